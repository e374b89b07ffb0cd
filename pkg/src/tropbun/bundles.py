"""Tropical vector bundles as multidivisors.

A rank-``n`` bundle is stored as a degree-``n`` free cover together with a
divisor on its total space; it is the pushforward of the line bundle of
that divisor.  Most operations act on the two pieces separately:

* direct sums take disjoint unions of covers,
* tensor products take fibered products and add pulled-back divisors,
* duals negate the divisor, determinants push it down.

Conversions to and from :class:`~tropbun.cocycle.BundleCocycle` provide the
transition-function view, and an independent route for degrees.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor
from typing import Iterable, Mapping, Sequence

from .cocycle import AffineFn, BundleCocycle, Transition, cocycle_degree, cocycle_tensor
from .covers import (
    FreeCover,
    Perm,
    build_cover_relabelled,
    canonical_form,
    compose_covers,
    cover_isomorphisms,
    disjoint_union,
    fibered_product,
    invert,
    lift_to_composite,
    pullback_cover,
    relabel_point,
    trivial_cover,
)
from .divisor import Divisor
from .divisor_theory import RRReport, push_pull_divisor, rank
from .errors import InvalidInput, InvariantViolation
from .jacobian import abel_jacobi, divisor_from_jac, jacobian
from .metric_graph import GraphPoint, MetricGraph, SimpleModel, canonical_divisor, euler_and_genus


class Multidivisor:
    """A free cover and a divisor on its total space."""

    def __init__(self, cover: FreeCover, div: Divisor):
        if div.host != cover.total:
            raise InvalidInput("multidivisor divisor must live on the cover's total space")
        self.cover = cover
        self.div = div
        self._hash = hash((cover, div))

    @property
    def base(self) -> SimpleModel:
        return self.cover.base

    @property
    def rank(self) -> int:
        return self.cover.degree

    @property
    def degree(self) -> int:
        return self.div.degree

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multidivisor):
            return NotImplemented
        return self.cover == other.cover and self.div == other.div

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Multidivisor(rank={self.rank}, degree={self.degree}, {self.div!r})"


def multidivisor(cover: FreeCover, terms: Iterable[tuple[GraphPoint, int, int]]) -> Multidivisor:
    """Build from ``(base point, sheet, coefficient)`` triples."""
    return Multidivisor(cover, Divisor(cover.total, [(cover.lift(p, k), c) for p, k, c in terms]))


def _model_divisor(base: SimpleModel, d: Divisor) -> Divisor:
    if d.host == base.graph:
        return d
    if d.host == base.original:
        return Divisor(base.graph, [(base.to_model(p), c) for p, c in d])
    raise InvalidInput("divisor does not live on this base")


def line_bundle(base: SimpleModel, d: Divisor) -> Multidivisor:
    """The line bundle of a divisor on the base (or on the graph it refines)."""
    d = _model_divisor(base, d)
    f = trivial_cover(base, 1)
    return Multidivisor(f, Divisor(f.total, [(f.lift(p, 0), c) for p, c in d]))


def trivial_bundle(base: SimpleModel, n: int = 1) -> Multidivisor:
    f = trivial_cover(base, n)
    return Multidivisor(f, Divisor.zero(f.total))


def _same_base(E: Multidivisor, F: Multidivisor) -> None:
    if E.base != F.base:
        raise InvalidInput("bundles live on different bases")


def _lifted(f: FreeCover, terms: Iterable[tuple[GraphPoint, int]]) -> Divisor:
    """Divisor on ``f.total`` from lifts of points that are already normalised."""
    acc: dict[GraphPoint, int] = {}
    for p, c in terms:
        acc[p] = acc.get(p, 0) + c
    return Divisor._trusted(f.total, acc)


def direct_sum(E: Multidivisor, F: Multidivisor) -> Multidivisor:
    _same_base(E, F)
    f = disjoint_union(E.cover, F.cover)
    n = E.rank
    terms = []
    for p, c in E.div:
        q, k = E.cover.project(p)
        terms.append((f.lift(q, k), c))
    for p, c in F.div:
        q, k = F.cover.project(p)
        terms.append((f.lift(q, n + k), c))
    return Multidivisor(f, _lifted(f, terms))


def tensor(E: Multidivisor, F: Multidivisor) -> Multidivisor:
    """Fibered product of covers carrying ``pr_1^* D_1 + pr_2^* D_2``."""
    _same_base(E, F)
    f = fibered_product(E.cover, F.cover)
    n, m = E.rank, F.rank
    terms = []
    for p, c in E.div:
        q, k = E.cover.project(p)
        terms += [(f.lift(q, k * m + l), c) for l in range(m)]
    for p, c in F.div:
        q, l = F.cover.project(p)
        terms += [(f.lift(q, k * m + l), c) for k in range(n)]
    out = Multidivisor(f, _lifted(f, terms))
    if out.degree != m * E.degree + n * F.degree:
        raise InvariantViolation("tensor degree differs from rank-weighted additivity")
    return out


def tensor_degree(E: Multidivisor, F: Multidivisor) -> int:
    """Degree of ``E (x) F`` from the multidivisor and from the Kronecker cocycle."""
    via_div = tensor(E, F).degree
    via_cocycle = cocycle_degree(cocycle_tensor(bundle_from_multidivisor(E), bundle_from_multidivisor(F)))
    formula = F.rank * E.degree + E.rank * F.degree
    if not via_div == via_cocycle == formula:
        raise InvariantViolation(f"tensor degree mismatch: {via_div}, {via_cocycle}, {formula}")
    return formula


@lru_cache(maxsize=4096)
def dual(E: Multidivisor) -> Multidivisor:
    return Multidivisor(E.cover, -E.div)


def determinant(E: Multidivisor) -> Multidivisor:
    return line_bundle(E.base, push_pull_divisor(E.cover, "push", E.div))


def bundle_rank_n(E: Multidivisor) -> int:
    return E.rank


def bundle_degree(E: Multidivisor) -> int:
    """Degree from the divisor, cross-checked against the cocycle slopes."""
    via_cocycle = cocycle_degree(bundle_from_multidivisor(E))
    if via_cocycle != E.degree:
        raise InvariantViolation(f"degree mismatch: divisor {E.degree}, cocycle {via_cocycle}")
    return E.degree


def _sheet_pullback(source: FreeCover, target: FreeCover, smap, d: Divisor) -> Divisor:
    """Pull ``d`` on ``target.total`` back along the isomorphism ``smap: source -> target``."""
    inverse = tuple(invert(t) for t in smap)
    return Divisor(source.total, [(target.map_point(inverse, p, source), c) for p, c in d])


def transport(E: Multidivisor, smap, target: FreeCover) -> Multidivisor:
    """Push ``E`` forward along the cover isomorphism ``smap: E.cover -> target``."""
    return Multidivisor(target, Divisor(target.total, [(E.cover.map_point(smap, p, target), c) for p, c in E.div]))


def _principal(d: Divisor) -> bool:
    if any(d.component_degrees()):
        return False
    return abel_jacobi(d).is_zero()


@lru_cache(maxsize=65536)
def bundle_iso(E1: Multidivisor, E2: Multidivisor) -> bool:
    """Some cover isomorphism makes ``D1 - phi^* D2`` principal."""
    _same_base(E1, E2)
    if E1.rank != E2.rank or E1.degree != E2.degree:
        return False
    for smap in cover_isomorphisms(E1.cover, E2.cover):
        if _principal(E1.div - _sheet_pullback(E1.cover, E2.cover, smap, E2.div)):
            return True
    return False


def bn_rank_bundle(E: Multidivisor, limit: int | None = None) -> int:
    return rank(E.div, limit)


def wrr_check(E: Multidivisor, limit: int | None = None) -> RRReport:
    """Compare ``r(E) - r(H(K) (x) E^*)`` with ``deg E + n chi``."""
    g = E.base.graph
    chi, _ = euler_and_genus(g)
    twisted = tensor(line_bundle(E.base, canonical_divisor(g)), dual(E))
    lhs = bn_rank_bundle(E, limit) - bn_rank_bundle(twisted, limit)
    rhs = E.degree + E.rank * chi
    return RRReport(lhs, rhs, lhs == rhs)


# stability


def _require_connected(E: Multidivisor) -> None:
    if not E.base.graph.is_connected:
        raise InvalidInput("stability needs a connected base")


def component_slopes(E: Multidivisor) -> list[tuple[int, int]]:
    """``(degree, rank)`` of each summand, one per component of the cover."""
    degs = E.div.component_degrees()
    return [(degs[c.index], c.size) for c in E.cover.components]


def slope(E: Multidivisor) -> Fraction:
    return Fraction(E.degree, E.rank)


def is_stable(E: Multidivisor) -> bool:
    _require_connected(E)
    return E.cover.is_connected


def is_semistable(E: Multidivisor) -> bool:
    _require_connected(E)
    mu = slope(E)
    return all(Fraction(d, r) == mu for d, r in component_slopes(E))


# cocycle conversions


def line_bundle_transitions(H: MetricGraph, d: Divisor, prefer: Iterable[str] = ()) -> dict[str, AffineFn]:
    """Transition functions of the line bundle of ``d`` on a simple graph.

    On the star of each vertex ``v`` take the piecewise-linear ``f_v`` with
    ``f_v(v) = 0``, divisor ``d`` restricted to the star, and all of ``d(v)``
    as outgoing slope on the first incident edge (edges in ``prefer`` first).
    The transition on edge ``e`` is ``f_src - f_dst``, which is affine.
    """
    if d.host != H:
        raise InvalidInput("divisor lives on another graph")
    preferred = set(prefer)
    start: dict[tuple[str, str], int] = {}
    for v in H.vertices:
        inc = H.incidence[v]
        if not inc:
            if d[GraphPoint(vertex=v)]:
                raise InvalidInput(f"chips on isolated vertex {v!r} cannot be realised")
            continue
        first = next((e for e in inc if e.id in preferred), inc[0])
        start[(v, first.id)] = d[GraphPoint(vertex=v)]
    chips: dict[str, list[tuple[Fraction, int]]] = {}
    for p, c in d:
        if p.vertex is None:
            chips.setdefault(p.edge, []).append((p.offset, c))

    out = {}
    for e in H.edges:
        L = e.length
        inner = chips.get(e.id, [])
        s0 = start.get((e.src, e.id), 0)
        t0 = start.get((e.dst, e.id), 0)

        def f_src(x):
            return s0 * x + sum(m * (x - a) for a, m in inner if x > a)

        def f_dst(x):  # f_dst as a function of the distance x from the source
            u = L - x
            return t0 * u + sum(m * (u - (L - a)) for a, m in inner if u > L - a)

        const = f_src(0) - f_dst(0)
        rise = (f_src(L) - f_dst(L)) - const
        if (rise / L).denominator != 1:
            raise InvariantViolation(f"non-integral slope on edge {e.id!r}")
        fn = AffineFn(int(rise / L), const)
        for a, _ in inner:
            if f_src(a) - f_dst(a) != fn(a):
                raise InvariantViolation(f"transition on {e.id!r} is not affine")
        out[e.id] = fn
    return out


def bundle_from_multidivisor(m: Multidivisor) -> BundleCocycle:
    f = m.cover
    base = f.base
    lifted_cycles = [f.edge_name(e, k) for e in base.cycle_edges for k in range(f.degree)]
    fns = line_bundle_transitions(f.total, m.div, prefer=lifted_cycles)
    # kill constants along each sheet of the base spanning forest
    shift: dict[str, Fraction] = {}
    g = base.graph
    forest = set(base.forest)
    for comp in g.components:
        for k in range(f.degree):
            root = f.vertex_name(comp.vertices[0], k)
            shift[root] = Fraction(0)
            stack = [comp.vertices[0]]
            while stack:
                u = stack.pop()
                for e in g.incidence[u]:
                    if e.id not in forest:
                        continue
                    b = fns[f.edge_name(e.id, k)].const
                    s, t = f.vertex_name(e.src, k), f.vertex_name(e.dst, k)
                    if s in shift and t not in shift:
                        shift[t] = shift[s] + b
                        stack.append(e.dst)
                    elif t in shift and s not in shift:
                        shift[s] = shift[t] - b
                        stack.append(e.src)
    transitions = {}
    for e in g.edges:
        perm = f.sigma[e.id]
        row = []
        for k in range(f.degree):
            ed = f.total.edge(f.edge_name(e.id, k))
            fn = fns[ed.id]
            row.append(AffineFn(fn.slope, fn.const + shift[ed.src] - shift[ed.dst]))
        transitions[e.id] = Transition(perm, tuple(row))
    return BundleCocycle(base, f.degree, transitions)


def canonical_representative(cover: FreeCover, d: Divisor) -> Divisor:
    """Degree at the first vertex of each component plus Abel-Jacobi chips."""
    total = cover.total
    degs = d.component_degrees()
    anchors = Divisor(total, [(GraphPoint(vertex=c.vertices[0]), k) for c, k in zip(total.components, degs)])
    c = abel_jacobi(d - anchors)
    return divisor_from_jac(c, 0, GraphPoint(vertex=total.vertices[0])) + anchors


def multidivisor_from_cocycle(b: BundleCocycle) -> Multidivisor:
    """Cover from the permutations, divisor realising the sheet-wise line bundle."""
    base = b.base
    g = base.graph
    cover, tau = build_cover_relabelled(base, b.perms, b.rank)
    terms = []
    for e in g.edges:
        tr = b.transitions[e.id]
        L = e.length
        for k in range(b.rank):
            fn = tr.fns[k]
            # f_src = (a + n) x + min(x, r) and f_dst = f_src - g on the edge
            n = floor(fn.const / L)
            r = fn.const - n * L
            lead = fn.slope + n + (1 if r else 0)
            terms.append((relabel_point(cover, tau, GraphPoint(vertex=e.src), k), lead))
            terms.append((relabel_point(cover, tau, GraphPoint(vertex=e.dst), tr.perm[k]), -n))
            if r:
                terms.append((relabel_point(cover, tau, g.point(e.id, r), k), -1))
    d = Divisor(cover.total, terms)
    return Multidivisor(cover, canonical_representative(cover, d))


def canonicalize(E: Multidivisor) -> Multidivisor:
    """Isomorphic multidivisor on the lexicographically minimal cover, canonical divisor."""
    cover, smap = canonical_form(E.cover)
    moved = transport(E, smap, cover)
    return Multidivisor(cover, canonical_representative(cover, moved.div))


# local systems


@dataclass(frozen=True)
class LocalSystemRep:
    """Constant transitions ``(permutation, translation vector)`` per edge.

    Edges left out carry the identity; :func:`local_system_from_bundle` only
    ever fills in the non-tree edges.
    """

    base: SimpleModel
    rank: int
    monodromy: Mapping[str, tuple[Perm, tuple[Fraction, ...]]]

    def __post_init__(self):
        for eid, (perm, shift) in self.monodromy.items():
            if not self.base.graph.has_edge(eid):
                raise InvalidInput(f"local system data on unknown edge {eid!r}")
            if sorted(perm) != list(range(self.rank)) or len(shift) != self.rank:
                raise InvalidInput(f"malformed monodromy on edge {eid!r}")

    def to_cocycle(self) -> BundleCocycle:
        out = {}
        for eid, (perm, shift) in self.monodromy.items():
            # translating the fibre by c is the constant transition -c
            out[eid] = Transition(tuple(perm), tuple(AffineFn(0, -Fraction(c)) for c in shift))
        return BundleCocycle(self.base, self.rank, out)


def bundle_from_local_system(lam: LocalSystemRep) -> Multidivisor:
    E = multidivisor_from_cocycle(lam.to_cocycle())
    if E.degree != 0 or not is_semistable(E):
        raise InvariantViolation("a local system produced a bundle that is not semistable of degree 0")
    return E


def local_system_from_bundle(E: Multidivisor) -> LocalSystemRep:
    """Constant-cocycle representative of a semistable degree-0 bundle.

    The cover is first moved to its canonical form.  On its total space the
    lifted spanning forest is extended to a spanning forest; the constant on
    each remaining edge is the Abel-Jacobi coordinate of that cycle.
    """
    if E.degree != 0 or not is_semistable(E):
        raise InvalidInput("only semistable bundles of degree 0 come from local systems")
    E = canonicalize(E)
    f = E.cover
    prefer = tuple(f.edge_name(e, k) for e in f.base.forest for k in range(f.degree))
    jac = jacobian(f.total, prefer)
    coords = abel_jacobi(E.div, jac=jac).canonical
    const = dict(zip(jac.cycle_edges, coords))
    mono = {}
    for e in f.base.cycle_edges:
        shift = tuple(const.get(f.edge_name(e, k), Fraction(0)) for k in range(f.degree))
        mono[e] = (f.sigma[e], shift)
    return LocalSystemRep(f.base, f.degree, mono)


def local_systems_equivalent(a: LocalSystemRep, b: LocalSystemRep) -> bool:
    """Same cover up to isomorphism, with matching Jacobian classes upstairs."""
    return bundle_iso(bundle_from_local_system(a), bundle_from_local_system(b))


# push and pull along covers


def push_pull_bundle(f: FreeCover, direction: str, E: Multidivisor) -> Multidivisor:
    if direction in ("push", "pushforward"):
        if E.base.graph != f.total:
            raise InvalidInput("pushforward needs a bundle on the total space of the cover")
        composite, tau = compose_covers(f, E.cover)
        terms = [(lift_to_composite(f, E.cover, composite, tau, p), c) for p, c in E.div]
        return Multidivisor(composite, Divisor(composite.total, terms))
    if direction in ("pull", "pullback"):
        if E.base != f.base:
            raise InvalidInput("pullback needs a bundle on the base of the cover")
        cover, tau = pullback_cover(f, E.cover)
        terms = []
        for p, c in E.div:
            b, j = E.cover.project(p)
            for k in range(f.degree):
                terms.append((relabel_point(cover, tau, f.lift(b, k), j), c))
        return Multidivisor(cover, Divisor(cover.total, terms))
    raise InvalidInput(f"direction must be 'push' or 'pull', got {direction!r}")
