"""The small graphs used throughout the tests and the acceptance suite."""

from __future__ import annotations

from fractions import Fraction

from .metric_graph import GraphPoint, MetricGraph, build_graph

HALF = Fraction(1, 2)


def segment() -> MetricGraph:
    return build_graph(["a", "b"], [("e1", "a", "b", 1)])


def circle(length=1) -> MetricGraph:
    """Two vertices ``u, v`` joined by two edges of half the length."""
    h = Fraction(length) / 2
    return build_graph(["u", "v"], [("e1", "u", "v", h), ("e2", "v", "u", h)])


def theta() -> MetricGraph:
    return build_graph(["u", "v"], [("e1", "u", "v", 1), ("e2", "u", "v", 1), ("e3", "u", "v", 1)])


def dumbbell() -> MetricGraph:
    """Two unit loops joined by a unit bridge."""
    return build_graph(["x", "y"], [("l1", "x", "x", 1), ("b", "x", "y", 1), ("l2", "y", "y", 1)])


def grid_points(g: MetricGraph, step=HALF) -> list[GraphPoint]:
    """Vertices, then the points at positive multiples of ``step`` inside each edge."""
    step = Fraction(step)
    out = [GraphPoint(vertex=v) for v in g.vertices]
    for e in g.edges:
        t = step
        while t < e.length:
            out.append(GraphPoint(edge=e.id, offset=t))
            t += step
    return out


STANDARD = {"SEG": segment, "CIRC": circle, "THETA": theta, "DUMBBELL": dumbbell}
