"""Root data on ``Z^r`` and their Weyl groups."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import factorial
from typing import Sequence

from .errors import InvalidInput, SizeLimitExceeded

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]

DEFAULT_WEYL_BOUND = factorial(10)


def pairing(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def reflect(u: Sequence[int], root: Sequence[int], coroot: Sequence[int]) -> Vector:
    """``u - <u, coroot> root``."""
    c = pairing(u, coroot)
    return tuple(a - c * b for a, b in zip(u, root))


class RootDatum:
    """Roots and coroots in ``Z^rank``, matched by index."""

    def __init__(self, rank: int, roots: Sequence[Sequence[int]], coroots: Sequence[Sequence[int]]):
        if not isinstance(rank, int) or rank < 0:
            raise InvalidInput("rank must be a non-negative integer")
        if len(roots) != len(coroots):
            raise InvalidInput(f"{len(roots)} roots but {len(coroots)} coroots")
        self.rank = rank
        self.roots = self._vectors(roots, "root")
        self.coroots = self._vectors(coroots, "coroot")

    def _vectors(self, vs, kind: str) -> tuple[Vector, ...]:
        out = []
        for i, v in enumerate(vs):
            if len(v) != self.rank or not all(isinstance(a, int) and not isinstance(a, bool) for a in v):
                raise InvalidInput(f"{kind} {i + 1} must be a length-{self.rank} integer vector")
            v = tuple(v)
            if not any(v):
                raise InvalidInput(f"{kind} {i + 1} is zero")
            if v in out:
                raise InvalidInput(f"duplicate {kind} {list(v)}")
            out.append(v)
        return tuple(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RootDatum):
            return NotImplemented
        return (self.rank, self.roots, self.coroots) == (other.rank, other.roots, other.coroots)

    def __hash__(self) -> int:
        return hash((self.rank, self.roots, self.coroots))

    def __repr__(self) -> str:
        return f"RootDatum(rank={self.rank}, roots={len(self.roots)})"

    def reflection_matrix(self, i: int) -> Matrix:
        a, c = self.roots[i], self.coroots[i]
        r = self.rank
        return tuple(tuple(int(row == col) - a[row] * c[col] for col in range(r)) for row in range(r))

    def coreflection_matrix(self, i: int) -> Matrix:
        a, c = self.roots[i], self.coroots[i]
        r = self.rank
        return tuple(tuple(int(row == col) - c[row] * a[col] for col in range(r)) for row in range(r))


@dataclass
class ValidationReport:
    axiom_i: bool
    axiom_ii: bool
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.axiom_i and self.axiom_ii

    def to_json(self) -> dict:
        return {"axiom_i": self.axiom_i, "axiom_ii": self.axiom_ii, "ok": self.ok, "failures": self.failures}


def validate(datum: RootDatum) -> ValidationReport:
    failures = []
    axiom_i = True
    for a, c in zip(datum.roots, datum.coroots):
        p = pairing(a, c)
        if p != 2:
            axiom_i = False
            failures.append(f"<{list(a)}, {list(c)}> = {p}, expected 2")
    axiom_ii = True
    roots, coroots = set(datum.roots), set(datum.coroots)
    for a, c in zip(datum.roots, datum.coroots):
        if {reflect(u, a, c) for u in datum.roots} != roots:
            axiom_ii = False
            failures.append(f"reflection in {list(a)} does not preserve the roots")
        if {reflect(u, c, a) for u in datum.coroots} != coroots:
            axiom_ii = False
            failures.append(f"reflection in {list(c)} does not preserve the coroots")
    return ValidationReport(axiom_i, axiom_ii, failures)


def _matmul(x: Matrix, y: Matrix) -> Matrix:
    n = len(x)
    return tuple(tuple(sum(x[i][k] * y[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def identity_matrix(r: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(r)) for i in range(r))


def weyl_group(datum: RootDatum, bound: int = DEFAULT_WEYL_BOUND) -> list[Matrix]:
    """Closure of the root reflections under composition, in discovery order."""
    report = validate(datum)
    if not report.ok:
        raise InvalidInput("not a root datum: " + "; ".join(report.failures))
    gens = sorted({datum.reflection_matrix(i) for i in range(len(datum.roots))})
    start = identity_matrix(datum.rank)
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for s in gens:
            x = _matmul(s, w)
            if x in seen:
                continue
            if len(seen) >= bound:
                raise SizeLimitExceeded(f"Weyl group closure exceeded {bound} elements")
            seen.add(x)
            order.append(x)
            queue.append(x)
    return order


def _basis(n: int, i: int) -> list[int]:
    v = [0] * n
    v[i] = 1
    return v


def gl_datum(n: int) -> RootDatum:
    """Roots ``e_i - e_j`` (``i != j``) of ``GL_n``; coroots are the same vectors."""
    if n < 1:
        raise InvalidInput("n must be at least 1")
    roots = []
    for i in range(n):
        for j in range(n):
            if i != j:
                roots.append(tuple(a - b for a, b in zip(_basis(n, i), _basis(n, j))))
    return RootDatum(n, roots, roots)


def sl_datum(n: int) -> RootDatum:
    """``SL_n`` on the sum-zero lattice, basis ``b_k = e_k - e_{k+1}``.

    Roots are written in the ``b`` basis and coroots in its dual basis, so the
    standard dot product is still the pairing.
    """
    if n < 1:
        raise InvalidInput("n must be at least 1")
    r = n - 1
    roots, coroots = [], []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            lo, hi, sign = (i, j, 1) if i < j else (j, i, -1)
            roots.append(tuple(sign if lo <= k < hi else 0 for k in range(r)))
            # <b_k, e_i - e_j>
            coroots.append(tuple(int(k == i) - int(k + 1 == i) - int(k == j) + int(k + 1 == j) for k in range(r)))
    return RootDatum(r, roots, coroots)
