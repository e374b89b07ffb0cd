"""Transition-function view of bundles: ``GL_n`` of the tropical semiring.

Over each edge a rank-``n`` cocycle is a permutation ``sigma`` together with
``n`` affine functions; the tropical matrix has entry ``g_i`` in position
``(i, sigma(i))`` and ``INF`` elsewhere.  Affine functions are written in the
coordinate ``x`` measured from the source of the edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .covers import Perm, check_perm, identity
from .errors import InvalidInput
from .metric_graph import SimpleModel

INF = math.inf


@dataclass(frozen=True)
class AffineFn:
    """``x -> slope * x + const``."""

    slope: int
    const: Fraction

    def __add__(self, other: "AffineFn") -> "AffineFn":
        return AffineFn(self.slope + other.slope, self.const + other.const)

    def __neg__(self) -> "AffineFn":
        return AffineFn(-self.slope, -self.const)

    def __call__(self, x) -> Fraction:
        return self.slope * x + self.const


ZERO_FN = AffineFn(0, Fraction(0))


@dataclass(frozen=True)
class Transition:
    perm: Perm
    fns: tuple[AffineFn, ...]

    def matrix(self) -> list[list]:
        n = len(self.perm)
        rows = [[INF] * n for _ in range(n)]
        for i, j in enumerate(self.perm):
            rows[i][j] = self.fns[i]
        return rows


class BundleCocycle:
    """Per-edge transitions of a rank-``n`` bundle on a simple model."""

    def __init__(self, base: SimpleModel, rank: int, transitions: Mapping[str, Transition]):
        if rank < 1:
            raise InvalidInput("bundle rank must be at least 1")
        g = base.graph
        trivial = Transition(identity(rank), (ZERO_FN,) * rank)
        out: dict[str, Transition] = {}
        for eid, tr in transitions.items():
            if not g.has_edge(eid):
                raise InvalidInput(f"unknown edge {eid!r} in cocycle")
            perm = check_perm(tr.perm, rank)
            if len(tr.fns) != rank:
                raise InvalidInput(f"edge {eid!r} needs {rank} transition functions, got {len(tr.fns)}")
            for f in tr.fns:
                if not isinstance(f.slope, int) or isinstance(f.slope, bool):
                    raise InvalidInput(f"slopes must be integers on edge {eid!r}")
            out[eid] = Transition(perm, tuple(AffineFn(f.slope, Fraction(f.const)) for f in tr.fns))
        self.base = base
        self.rank = rank
        self.transitions = {e.id: out.get(e.id, trivial) for e in g.edges}

    def __eq__(self, other) -> bool:
        if not isinstance(other, BundleCocycle):
            return NotImplemented
        return self.base == other.base and self.rank == other.rank and self.transitions == other.transitions

    def __repr__(self) -> str:
        return f"BundleCocycle(rank={self.rank}, degree={cocycle_degree(self)})"

    @property
    def perms(self) -> dict[str, Perm]:
        return {e: t.perm for e, t in self.transitions.items()}


def cocycle_degree(b: BundleCocycle) -> int:
    """Sum of the slopes of all finite entries."""
    return sum(f.slope for t in b.transitions.values() for f in t.fns)


def _same_base(a: BundleCocycle, b: BundleCocycle) -> None:
    if a.base != b.base:
        raise InvalidInput("cocycles live on different bases")


def cocycle_direct_sum(a: BundleCocycle, b: BundleCocycle) -> BundleCocycle:
    _same_base(a, b)
    n = a.rank
    out = {}
    for e, ta in a.transitions.items():
        tb = b.transitions[e]
        out[e] = Transition(ta.perm + tuple(n + j for j in tb.perm), ta.fns + tb.fns)
    return BundleCocycle(a.base, n + b.rank, out)


def cocycle_tensor(a: BundleCocycle, b: BundleCocycle) -> BundleCocycle:
    """Kronecker product: index ``(i, k)`` is ``i * rank(b) + k``."""
    _same_base(a, b)
    m = b.rank
    out = {}
    for e, ta in a.transitions.items():
        tb = b.transitions[e]
        perm = tuple(ta.perm[i] * m + tb.perm[k] for i in range(a.rank) for k in range(m))
        fns = tuple(ta.fns[i] + tb.fns[k] for i in range(a.rank) for k in range(m))
        out[e] = Transition(perm, fns)
    return BundleCocycle(a.base, a.rank * m, out)


def cocycle_dual(a: BundleCocycle) -> BundleCocycle:
    return BundleCocycle(a.base, a.rank, {e: Transition(t.perm, tuple(-f for f in t.fns)) for e, t in a.transitions.items()})


def cocycle_det(a: BundleCocycle) -> BundleCocycle:
    """Tropical determinant: the sum of the finite entries."""
    out = {}
    for e, t in a.transitions.items():
        total = ZERO_FN
        for f in t.fns:
            total = total + f
        out[e] = Transition((0,), (total,))
    return BundleCocycle(a.base, 1, out)


def _is_finite(entry) -> bool:
    return not (entry is None or entry == INF)


def split_block_triangular(t: Sequence[Sequence], m: int) -> tuple[list[list], list[list]]:
    """Split an invertible tropical matrix whose top-left ``m x m`` block is invertible.

    ``INF`` (or ``None``) marks the tropical zero.  Such a matrix is block
    diagonal, and the two diagonal blocks are returned.
    """
    n = len(t)
    if any(len(row) != n for row in t):
        raise InvalidInput("tropical matrix must be square")
    if not 0 <= m <= n:
        raise InvalidInput(f"block size {m} outside 0..{n}")
    cols = []
    for i, row in enumerate(t):
        finite = [j for j, x in enumerate(row) if _is_finite(x)]
        if len(finite) != 1:
            raise InvalidInput(f"row {i + 1} has {len(finite)} finite entries; matrix is not invertible")
        cols.append(finite[0])
    if sorted(cols) != list(range(n)):
        raise InvalidInput("two rows share the column of their finite entry; matrix is not invertible")
    if any(cols[i] >= m for i in range(m)):
        raise InvalidInput("top-left block not invertible")
    upper = [list(row[:m]) for row in t[:m]]
    lower = [list(row[m:]) for row in t[m:]]
    return upper, lower
