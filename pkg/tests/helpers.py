"""Shared coordinates and graphs for the tests."""

from fractions import Fraction

from tropbun.metric_graph import GraphPoint, build_graph


def circ_point(x) -> GraphPoint:
    """Point at arc-length ``x`` from ``u`` on the catalog circle of length 1."""
    x = Fraction(x) % 1
    if x == 0:
        return GraphPoint(vertex="u")
    if x == Fraction(1, 2):
        return GraphPoint(vertex="v")
    if x < Fraction(1, 2):
        return GraphPoint(edge="e1", offset=x)
    return GraphPoint(edge="e2", offset=x - Fraction(1, 2))


def two_circles():
    return build_graph(
        ["u", "v", "s", "t"],
        [("e1", "u", "v", "1/2"), ("e2", "v", "u", "1/2"), ("f1", "s", "t", "1/2"), ("f2", "t", "s", "1/2")],
    )
