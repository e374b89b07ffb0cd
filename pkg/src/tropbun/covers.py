"""Free covers of metric graphs encoded by permutation cocycles.

Sheets are numbered ``0 .. n-1`` internally (the JSON layer is 1-based).  The
lift of edge ``e`` starting on sheet ``k`` ends on sheet ``sigma[e][k]``.
Covers are gauge-fixed: ``sigma`` is the identity on the spanning forest of
the base model, so isomorphism of covers over a connected base is
simultaneous conjugacy of the permutations on the non-tree edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import permutations, product
from typing import Iterable, Mapping, Sequence

from .errors import InvalidInput
from .metric_graph import Edge, GraphPoint, MetricGraph, SimpleModel

Perm = tuple[int, ...]
SheetMap = tuple[Perm, ...]  # one permutation per component of the base

DEFAULT_DEGREE_CAP = 6


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(a: Perm, b: Perm) -> Perm:
    """``a after b``."""
    return tuple(a[i] for i in b)


def invert(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def conjugate(t: Perm, s: Perm) -> Perm:
    """``t s t^-1``."""
    out = [0] * len(s)
    for i, j in enumerate(s):
        out[t[i]] = t[j]
    return tuple(out)


def check_perm(p: Sequence[int], n: int) -> Perm:
    p = tuple(p)
    if len(p) != n or sorted(p) != list(range(n)):
        raise InvalidInput(f"not a permutation of {n} sheets: {list(p)}")
    return p


# equal covers share one total space, so per-graph caches downstream hit
_TOTALS: dict[tuple, tuple] = {}


def _build_total(base: SimpleModel, degree: int, sig: Mapping[str, Perm]) -> tuple:
    g = base.graph
    vname = {(v, k): f"{v}#{k + 1}" for v in g.vertices for k in range(degree)}
    ename = {(e.id, k): f"{e.id}#{k + 1}" for e in g.edges for k in range(degree)}
    edges = []
    for e in g.edges:
        s = sig[e.id]
        for k in range(degree):
            edges.append(Edge(ename[e.id, k], vname[e.src, k], vname[e.dst, s[k]], e.length))
    total = MetricGraph([vname[v, k] for v in g.vertices for k in range(degree)], edges)
    vsrc = {name: key for key, name in vname.items()}
    esrc = {name: key for key, name in ename.items()}
    return vname, ename, vsrc, esrc, total, {}, {}


class FreeCover:
    """A gauge-fixed degree-``n`` cover of a simple model, with its total space.

    Total-space vertices are named ``"v#k"`` and edges ``"e#k"`` with 1-based
    sheet ``k``; edge ``e#k`` starts on sheet ``k``.
    """

    def __init__(self, base: SimpleModel, degree: int, sigma: Mapping[str, Sequence[int]] | None = None):
        if degree < 1:
            raise InvalidInput("cover degree must be at least 1")
        g = base.graph
        ident = identity(degree)
        sig: dict[str, Perm] = {}
        for e in g.edges:
            sig[e.id] = ident
        for eid, p in (sigma or {}).items():
            if not g.has_edge(eid):
                raise InvalidInput(f"unknown edge {eid!r} in cover")
            sig[eid] = check_perm(p, degree)
        for eid in base.forest:
            if sig[eid] != ident:
                raise InvalidInput(f"cover is not gauge-fixed on forest edge {eid!r}")
        self.base = base
        self.degree = degree
        self.sigma = sig
        self.monodromy: tuple[Perm, ...] = tuple(sig[e] for e in base.cycle_edges)
        self._hash = hash((base, degree, self.monodromy))

        key = (base, degree, tuple(sig[e.id] for e in g.edges))
        built = _TOTALS.get(key)
        if built is None:
            built = _TOTALS[key] = _build_total(base, degree, sig)
        self._vname, self._ename, self._vsrc, self._esrc, self.total, self._lifts, self._projections = built

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeCover):
            return NotImplemented
        return self.base == other.base and self.degree == other.degree and self.monodromy == other.monodromy

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"FreeCover(degree={self.degree}, monodromy={self.monodromy})"

    # sheet addressing

    def vertex_name(self, v: str, k: int) -> str:
        return self._vname[v, k]

    def edge_name(self, e: str, k: int) -> str:
        return self._ename[e, k]

    def lift(self, p: GraphPoint, k: int) -> GraphPoint:
        """The point over base point ``p`` on sheet ``k``."""
        hit = self._lifts.get((p, k))
        if hit is None:
            if p.vertex is not None:
                hit = GraphPoint(vertex=self._vname[p.vertex, k])
            else:
                hit = GraphPoint(edge=self._ename[p.edge, k], offset=p.offset)
            self._lifts[p, k] = hit
        return hit

    def project(self, p: GraphPoint) -> tuple[GraphPoint, int]:
        """Base point and sheet of a total-space point."""
        hit = self._projections.get(p)
        if hit is None:
            if p.vertex is not None:
                v, k = self._vsrc[p.vertex]
                hit = (GraphPoint(vertex=v), k)
            else:
                e, k = self._esrc[p.edge]
                hit = (GraphPoint(edge=e, offset=p.offset), k)
            self._projections[p] = hit
        return hit

    def project_edge(self, eid: str) -> tuple[str, int]:
        return self._esrc[eid]

    def project_vertex(self, vid: str) -> tuple[str, int]:
        return self._vsrc[vid]

    @cached_property
    def base_component_edges(self) -> list[list[str]]:
        """Non-tree edges of the base, grouped by base component."""
        g = self.base.graph
        groups: list[list[str]] = [[] for _ in g.components]
        for eid in self.base.cycle_edges:
            groups[g.component_of_vertex[g.edge(eid).src]].append(eid)
        return groups

    def map_point(self, smap: SheetMap, p: GraphPoint, target: "FreeCover") -> GraphPoint:
        """Image of a total-space point under the isomorphism given by ``smap``."""
        q, k = self.project(p)
        comp = self.base.graph.component_of(q)
        return target.lift(q, smap[comp][k])

    @cached_property
    def components(self) -> list["CoverComponent"]:
        out = []
        base = self.base.graph
        for index, comp in enumerate(self.total.components):
            sheets = sorted({self._vsrc[v][1] for v in comp.vertices})
            bcomp = base.component_of_vertex[self._vsrc[comp.vertices[0]][0]]
            out.append(CoverComponent(bcomp, tuple(sheets), comp.genus, index))
        out.sort(key=lambda c: (c.base_component, c.sheets))
        return out

    @property
    def is_connected(self) -> bool:
        return len(self.components) == 1


@dataclass(frozen=True)
class CoverComponent:
    base_component: int
    sheets: tuple[int, ...]
    genus: int
    index: int  # position in ``total.components``

    @property
    def size(self) -> int:
        return len(self.sheets)


def gauge_fix(base: SimpleModel, degree: int, sigma: Mapping[str, Sequence[int]]) -> tuple[dict[str, Perm], dict[str, Perm]]:
    """Relabel sheets vertex by vertex so that forest edges carry the identity.

    Returns the new cocycle and, per vertex, the relabelling old sheet -> new.
    """
    g = base.graph
    ident = identity(degree)
    raw = {e.id: ident for e in g.edges}
    for eid, p in sigma.items():
        if not g.has_edge(eid):
            raise InvalidInput(f"unknown edge {eid!r} in cover")
        raw[eid] = check_perm(p, degree)
    tau: dict[str, Perm] = {}
    forest = set(base.forest)
    for comp in g.components:
        root = comp.vertices[0]
        tau[root] = ident
        stack = [root]
        while stack:
            u = stack.pop()
            for e in g.incidence[u]:
                if e.id not in forest:
                    continue
                if e.src == u and e.dst not in tau:
                    tau[e.dst] = compose(tau[u], invert(raw[e.id]))
                    stack.append(e.dst)
                elif e.dst == u and e.src not in tau:
                    tau[e.src] = compose(tau[u], raw[e.id])
                    stack.append(e.src)
    fixed = {}
    for e in g.edges:
        fixed[e.id] = compose(tau[e.dst], compose(raw[e.id], invert(tau[e.src])))
    return fixed, tau


def build_cover_relabelled(base: SimpleModel, sigma: Mapping[str, Sequence[int]], degree: int | None = None):
    """Like :func:`build_cover`, also returning the per-vertex sheet relabelling."""
    if degree is None:
        if not sigma:
            raise InvalidInput("cover degree is needed when no permutation is given")
        degree = len(next(iter(sigma.values())))
    fixed, tau = gauge_fix(base, degree, sigma)
    return FreeCover(base, degree, fixed), tau


def build_cover(base: SimpleModel, sigma: Mapping[str, Sequence[int]], degree: int | None = None) -> FreeCover:
    """Cover from arbitrary permutations on any edges; forest edges are re-gauged."""
    return build_cover_relabelled(base, sigma, degree)[0]


def relabel_point(cover: FreeCover, tau: Mapping[str, Perm], p: GraphPoint, raw_sheet: int) -> GraphPoint:
    """Total-space point over ``p`` on a sheet numbered before gauge fixing."""
    if p.vertex is not None:
        return cover.lift(p, tau[p.vertex][raw_sheet])
    src = cover.base.graph.edge(p.edge).src
    return cover.lift(p, tau[src][raw_sheet])


def trivial_cover(base: SimpleModel, degree: int) -> FreeCover:
    return FreeCover(base, degree)


def components_and_genus(c: FreeCover) -> list[tuple[tuple[int, ...], int]]:
    return [(comp.sheets, comp.genus) for comp in c.components]


def _canonical_tuples(n: int, length: int) -> list[tuple[Perm, ...]]:
    """Lexicographically minimal representatives of ``S_n^length`` under conjugation.

    A tuple is minimal iff each entry is the least conjugate of itself under
    the stabiliser of the preceding entries.
    """
    group = list(permutations(range(n)))
    out: list[tuple[Perm, ...]] = []

    def extend(prefix: tuple[Perm, ...], stab: list[Perm]) -> None:
        if len(prefix) == length:
            out.append(prefix)
            return
        for s in group:
            images = [conjugate(t, s) for t in stab]
            if min(images) == s:
                extend(prefix + (s,), [t for t, im in zip(stab, images) if im == s])

    extend((), group)
    return out


def enumerate_covers(base: SimpleModel, n: int, cap: int = DEFAULT_DEGREE_CAP) -> list[FreeCover]:
    """All degree-``n`` covers up to isomorphism, in canonical order."""
    if n < 1:
        raise InvalidInput("cover degree must be at least 1")
    if n > cap:
        raise InvalidInput(f"degree {n} exceeds the enumeration cap {cap}")
    probe = FreeCover(base, n)
    per_comp = [_canonical_tuples(n, len(edges)) for edges in probe.base_component_edges]
    covers = []
    for combo in product(*per_comp):
        sigma = {}
        for edges, perms in zip(probe.base_component_edges, combo):
            sigma.update(zip(edges, perms))
        covers.append(FreeCover(base, n, sigma))
    return covers


def _check_same_base(c1: FreeCover, c2: FreeCover) -> None:
    if c1.base != c2.base:
        raise InvalidInput("covers have different bases")


@lru_cache(maxsize=4096)
def cover_isomorphisms(c1: FreeCover, c2: FreeCover) -> tuple[SheetMap, ...]:
    """Every sheet relabelling carrying ``c1`` to ``c2`` over the base.

    Each entry holds one permutation per base component.
    """
    _check_same_base(c1, c2)
    if c1.degree != c2.degree:
        return ()
    group = list(permutations(range(c1.degree)))
    per_comp = []
    for edges in c1.base_component_edges:
        pairs = [(c1.sigma[e], c2.sigma[e]) for e in edges]
        per_comp.append([t for t in group if all(conjugate(t, a) == b for a, b in pairs)])
    return tuple(tuple(m) for m in product(*per_comp))


def deck_group(c: FreeCover) -> tuple[SheetMap, ...]:
    return cover_isomorphisms(c, c)


def canonical_form(c: FreeCover) -> tuple[FreeCover, SheetMap]:
    """The isomorphic cover with lexicographically minimal monodromy, and a map onto it."""
    group = list(permutations(range(c.degree)))
    sigma: dict[str, Perm] = {}
    smap = []
    for edges in c.base_component_edges:
        perms = [c.sigma[e] for e in edges]
        best = min(group, key=lambda t: [conjugate(t, s) for s in perms])
        smap.append(best)
        sigma.update((e, conjugate(best, s)) for e, s in zip(edges, perms))
    return FreeCover(c.base, c.degree, sigma), tuple(smap)


@lru_cache(maxsize=4096)
def disjoint_union(c1: FreeCover, c2: FreeCover) -> FreeCover:
    _check_same_base(c1, c2)
    n1 = c1.degree
    sigma = {e: c1.sigma[e] + tuple(n1 + j for j in c2.sigma[e]) for e in c1.sigma}
    return FreeCover(c1.base, n1 + c2.degree, sigma)


@lru_cache(maxsize=4096)
def fibered_product(c1: FreeCover, c2: FreeCover) -> FreeCover:
    """Sheet ``(k, l)`` is numbered ``k * n2 + l``."""
    _check_same_base(c1, c2)
    n2 = c2.degree
    sigma = {}
    for e in c1.sigma:
        a, b = c1.sigma[e], c2.sigma[e]
        sigma[e] = tuple(a[k] * n2 + b[l] for k in range(c1.degree) for l in range(n2))
    return FreeCover(c1.base, c1.degree * n2, sigma)


def compose_covers(f: FreeCover, h: FreeCover):
    """The cover ``f o h`` of ``f.base``, where ``h`` covers ``f.total``.

    Raw sheet ``k * m + j`` is sheet ``j`` of ``h`` above sheet ``k`` of ``f``.
    Returns the gauge-fixed cover and the relabelling used by
    :func:`relabel_point`.
    """
    if h.base.graph != f.total:
        raise InvalidInput("inner cover must have the outer total space as base")
    m = h.degree
    sigma = {}
    for e in f.base.graph.edges:
        s = f.sigma[e.id]
        images = []
        for k in range(f.degree):
            rho = h.sigma[f.edge_name(e.id, k)]
            images += [s[k] * m + rho[j] for j in range(m)]
        sigma[e.id] = tuple(images)
    return build_cover_relabelled(f.base, sigma, f.degree * m)


def lift_to_composite(f: FreeCover, h: FreeCover, composite: FreeCover, tau, p: GraphPoint) -> GraphPoint:
    """Where a point of ``h.total`` lands in the total space of ``compose_covers(f, h)``."""
    q, j = h.project(p)  # q on f.total
    base_point, k = f.project(q)
    return relabel_point(composite, tau, base_point, k * h.degree + j)


def pullback_cover(f: FreeCover, h: FreeCover):
    """The cover of ``f.total`` obtained by pulling back ``h`` (both over ``f.base``).

    Returns the gauge-fixed cover of the model of ``f.total`` and the raw relabelling;
    raw sheet ``j`` over total-space point ``(p, k)`` is the point ``(p, k, j)``.
    """
    from .metric_graph import simple_model

    if f.base != h.base:
        raise InvalidInput("covers have different bases")
    model = simple_model(f.total)
    sigma = {}
    for e in f.total.edges:
        base_edge, _ = f.project_edge(e.id)
        sigma[e.id] = h.sigma[base_edge]
    return build_cover_relabelled(model, sigma, h.degree)
