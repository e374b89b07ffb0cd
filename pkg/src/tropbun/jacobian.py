"""Tropical Jacobian: period matrix, Abel-Jacobi map and its constructive inverse.

Coordinates are taken against the fundamental cycle basis of a spanning
forest: cycle ``j`` is its non-tree edge followed by the tree path back.  A
degree-zero divisor maps to the vector of its path integrals against the
cycles; two vectors represent the same class when their difference lies in
the period lattice spanned by the columns of the Gram matrix.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import floor
from typing import Iterable, Sequence

from .divisor import Divisor
from .errors import InvalidInput
from .metric_graph import GraphPoint, MetricGraph, spanning_forest
from .rational import inverse


class JacobianData:
    """Cycle basis, Gram matrix and tree-path coordinates for ``graph``.

    ``prefer`` lists edges that should enter the spanning forest first.
    """

    def __init__(self, graph: MetricGraph, prefer: Iterable[str] = ()):
        self.graph = graph
        self.forest, self.cycle_edges = spanning_forest(graph, prefer)
        self.genus = len(self.cycle_edges)
        forest = set(self.forest)
        # signed tree chain from the component root to each vertex
        chain: dict[str, dict[str, int]] = {}
        for comp in graph.components:
            root = comp.vertices[0]
            chain[root] = {}
            stack = [root]
            while stack:
                u = stack.pop()
                for e in graph.incidence[u]:
                    if e.id not in forest:
                        continue
                    w, sign = (e.dst, 1) if e.src == u else (e.src, -1)
                    if w in chain:
                        continue
                    c = dict(chain[u])
                    c[e.id] = c.get(e.id, 0) + sign
                    if c[e.id] == 0:
                        del c[e.id]
                    chain[w] = c
                    stack.append(w)
        self.cycles: list[dict[str, int]] = []
        for eid in self.cycle_edges:
            e = graph.edge(eid)
            cyc = {eid: 1}
            for k, s in chain[e.src].items():
                cyc[k] = cyc.get(k, 0) + s
            for k, s in chain[e.dst].items():
                cyc[k] = cyc.get(k, 0) - s
            self.cycles.append({k: s for k, s in cyc.items() if s})
        # coefficient of edge e in each cycle, for the per-edge pairing
        self.edge_weights: dict[str, tuple[int, ...]] = {
            e.id: tuple(c.get(e.id, 0) for c in self.cycles) for e in graph.edges
        }
        length = {e.id: e.length for e in graph.edges}
        g = self.genus
        self.gram: tuple[tuple[Fraction, ...], ...] = tuple(
            tuple(
                sum((length[k] * s * self.cycles[j].get(k, 0) for k, s in self.cycles[i].items()), Fraction(0))
                for j in range(g)
            )
            for i in range(g)
        )
        self._gram_inv = inverse(self.gram) if g else []
        self.vertex_coords: dict[str, tuple[Fraction, ...]] = {}
        for v, c in chain.items():
            vec = [Fraction(0)] * g
            for k, s in c.items():
                w = self.edge_weights[k]
                for j in range(g):
                    if w[j]:
                        vec[j] += s * w[j] * length[k]
            self.vertex_coords[v] = tuple(vec)

    def point_coords(self, p: GraphPoint) -> tuple[Fraction, ...]:
        """Path integral from the component root to ``p`` against each cycle."""
        if p.vertex is not None:
            return self.vertex_coords[p.vertex]
        e = self.graph.edge(p.edge)
        base = self.vertex_coords[e.src]
        w = self.edge_weights[e.id]
        return tuple(b + p.offset * wj for b, wj in zip(base, w))

    def lattice_coefficients(self, vec: Sequence[Fraction]) -> list[Fraction]:
        """Solve ``M x = vec``; ``vec`` is a period iff ``x`` is integral."""
        inv = self._gram_inv
        return [sum((inv[i][j] * vec[j] for j in range(self.genus)), Fraction(0)) for i in range(self.genus)]

    def canonical(self, vec: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """The representative ``M frac(M^-1 vec)`` of the class of ``vec``."""
        x = [c - floor(c) for c in self.lattice_coefficients(vec)]
        return tuple(sum((self.gram[i][j] * x[j] for j in range(self.genus)), Fraction(0)) for i in range(self.genus))


@lru_cache(maxsize=256)
def jacobian(graph: MetricGraph, prefer: tuple[str, ...] = ()) -> JacobianData:
    return JacobianData(graph, prefer)


class JacCoord:
    """A point of ``R^g / Lambda``; equality is decided modulo the lattice."""

    def __init__(self, jac: JacobianData, vector: Sequence[Fraction]):
        if len(vector) != jac.genus:
            raise InvalidInput(f"expected {jac.genus} coordinates, got {len(vector)}")
        self.jac = jac
        self.vector = tuple(Fraction(v) for v in vector)

    @property
    def canonical(self) -> tuple[Fraction, ...]:
        return self.jac.canonical(self.vector)

    def is_zero(self) -> bool:
        return all(c.denominator == 1 for c in self.jac.lattice_coefficients(self.vector))

    def __sub__(self, other: "JacCoord") -> "JacCoord":
        return JacCoord(self.jac, [a - b for a, b in zip(self.vector, other.vector)])

    def __add__(self, other: "JacCoord") -> "JacCoord":
        return JacCoord(self.jac, [a + b for a, b in zip(self.vector, other.vector)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, JacCoord):
            return NotImplemented
        if self.jac.graph != other.jac.graph or self.jac.cycle_edges != other.jac.cycle_edges:
            return False
        return (self - other).is_zero()

    def __hash__(self) -> int:
        return hash((self.jac.graph, self.canonical))

    def __repr__(self) -> str:
        return f"JacCoord({', '.join(str(c) for c in self.canonical)})"


def abel_jacobi(d: Divisor, base: GraphPoint | None = None, jac: JacobianData | None = None) -> JacCoord:
    """Abel-Jacobi class of a divisor of degree zero on every component.

    The class does not depend on ``base`` for such divisors; the argument is
    accepted for symmetry with :func:`divisor_from_jac`.
    """
    if any(d.component_degrees()):
        raise InvalidInput("Abel-Jacobi needs degree zero on every component")
    jac = jac or jacobian(d.host)
    if jac.graph != d.host:
        raise InvalidInput("Jacobian data belongs to another graph")
    if base is not None:
        d.host.check_point(base)
    vec = [Fraction(0)] * jac.genus
    for p, c in d:
        for j, x in enumerate(jac.point_coords(p)):
            vec[j] += c * x
    return JacCoord(jac, vec)


def divisor_from_jac(c: JacCoord, deg: int, base: GraphPoint) -> Divisor:
    """A divisor of degree ``deg`` whose degree-zero part has class ``c``.

    For cycle ``j`` with non-tree edge ``e`` and coordinate ``t = n l(e) + r``
    this places ``p_e(r) - src(e) + n (dst(e) - src(e))``, then ``deg * base``.
    """
    jac = c.jac
    g = jac.graph
    g.check_point(base)
    terms: list[tuple[GraphPoint, int]] = [(base, deg)]
    for eid, t in zip(jac.cycle_edges, c.vector):
        e = g.edge(eid)
        n = floor(t / e.length)
        r = t - n * e.length
        src, dst = GraphPoint(vertex=e.src), GraphPoint(vertex=e.dst)
        if r:
            terms += [(g.point(eid, r), 1), (src, -1)]
        if n:
            terms += [(dst, n), (src, -n)]
    return Divisor(g, terms)


def jac_equiv(d1: Divisor, d2: Divisor) -> bool:
    """Linear equivalence decided through the Abel-Jacobi map."""
    if d1.host != d2.host:
        raise InvalidInput("divisors live on different graphs")
    diff = d1 - d2
    if any(diff.component_degrees()):
        return False
    return abel_jacobi(diff).is_zero()
