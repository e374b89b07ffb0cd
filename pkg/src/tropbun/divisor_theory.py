"""Linear equivalence, reduced divisors, Baker-Norine rank and Riemann-Roch.

All of these run on the unit subdivision of the host graph (see
:func:`tropbun.metric_graph.subdivide_to_unit`), where a divisor supported
on integer points becomes a chip configuration on a finite multigraph.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import lcm
from typing import TYPE_CHECKING

from .divisor import Divisor, degree
from .errors import InvalidInput
from .metric_graph import (
    GraphPoint,
    MetricGraph,
    canonical_divisor,
    euler_and_genus,
    simple_model,
    subdivide_to_unit,
    subdivision_scale,
    unit_subdivision,
)

if TYPE_CHECKING:
    from .covers import FreeCover

__all__ = [
    "degree",
    "reduce",
    "linequiv",
    "rank",
    "rank_bruteforce",
    "rr_check",
    "RRReport",
    "push_pull_divisor",
]


def _chips(d: Divisor, sub) -> list[int]:
    vec = [0] * sub.chip.n
    for p, c in d:
        vec[sub.vertex(p)] += c
    return vec


def _from_chips(host: MetricGraph, sub, vec) -> Divisor:
    return Divisor(host, [(sub.points[i], c) for i, c in enumerate(vec) if c])


@lru_cache(maxsize=256)
def _rank_points(g: MetricGraph) -> tuple[GraphPoint, ...]:
    """Vertices of the simple model, as points of ``g``: a rank-determining set."""
    model = simple_model(g)
    return tuple(model.to_original(GraphPoint(vertex=v)) for v in model.graph.vertices)


@lru_cache(maxsize=256)
def _rank_scale(g: MetricGraph) -> int:
    return subdivision_scale(g, _rank_points(g))


@lru_cache(maxsize=256)
def _candidates(sub) -> tuple[int, ...]:
    return tuple(sorted({sub.vertex(p) for p in _rank_points(sub.graph)}))


def reduce(d: Divisor, base: GraphPoint, limit: int | None = None) -> Divisor:
    """The ``base``-reduced representative of ``d``.

    On a disconnected host each other component is reduced with respect to
    its first vertex.
    """
    g = d.host
    g.check_point(base)
    sub = subdivide_to_unit(g, [*d.support, base], limit)
    vec = _chips(d, sub)
    qb = sub.vertex(base)
    for members in sub.chip.comps:
        q = qb if sub.chip.comp_id[qb] == sub.chip.comp_id[members[0]] else members[0]
        vec = sub.chip.reduce(vec, q)
    return _from_chips(g, sub, vec)


def is_principal(d: Divisor, limit: int | None = None) -> bool:
    if any(d.component_degrees()):
        return False
    g = d.host
    sub = subdivide_to_unit(g, d.support, limit)
    vec = _chips(d, sub)
    for members in sub.chip.comps:
        vec = sub.chip.reduce(vec, members[0])
    return not any(vec)


def linequiv(d1: Divisor, d2: Divisor, limit: int | None = None) -> bool:
    if d1.host != d2.host:
        raise InvalidInput("divisors live on different graphs")
    return is_principal(d1 - d2, limit)


def rank(d: Divisor, limit: int | None = None) -> int:
    """Baker-Norine rank, with ``sum_i (r_i + 1) - 1`` on disconnected hosts.

    Test divisors ``E`` are supported on the vertices of the simple model,
    which form a rank-determining set.
    """
    g = d.host
    scale = lcm(subdivision_scale(g, d.support), _rank_scale(g))
    sub = unit_subdivision(g, scale, limit)
    return sub.chip.rank(_chips(d, sub), _candidates(sub))


def rank_bruteforce(d: Divisor, limit: int | None = None) -> int:
    """Rank by enumerating every effective ``E`` on every subdivision vertex."""
    g = d.host
    sub = subdivide_to_unit(g, [*d.support, *_rank_points(g)], limit)
    return sub.chip.rank_bruteforce(_chips(d, sub))


@dataclass(frozen=True)
class RRReport:
    lhs: int
    rhs: int
    holds: bool

    def to_json(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


def rr_check(d: Divisor, limit: int | None = None) -> RRReport:
    """Compare ``r(D) - r(K - D)`` with ``deg D + chi``."""
    chi, _ = euler_and_genus(d.host)
    K = canonical_divisor(d.host)
    lhs = rank(d, limit) - rank(K - d, limit)
    rhs = d.degree + chi
    return RRReport(lhs, rhs, lhs == rhs)


def push_pull_divisor(f: "FreeCover", direction: str, d: Divisor) -> Divisor:
    """``direction`` is ``"push"`` (total space to base) or ``"pull"``."""
    if direction in ("push", "pushforward"):
        if d.host != f.total:
            raise InvalidInput("pushforward needs a divisor on the total space")
        return Divisor(f.base.graph, [(f.project(p)[0], c) for p, c in d])
    if direction in ("pull", "pullback"):
        if d.host != f.base.graph:
            raise InvalidInput("pullback needs a divisor on the base model")
        return Divisor(f.total, [(f.lift(p, k), c) for p, c in d for k in range(f.degree)])
    raise InvalidInput(f"direction must be 'push' or 'pull', got {direction!r}")
