"""Compact metric graphs given by finite models with exact rational lengths.

A :class:`MetricGraph` is a list of vertex ids and a list of oriented edges
with positive rational lengths.  Points are either vertices or interior points
of an edge, addressed by their distance from the edge's source.  The order in
which vertices and edges are listed is the id order used for every
deterministic tie-break in the package.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import lcm
from typing import Iterable, Mapping, Sequence

from .errors import InvalidInput, SizeLimitExceeded
from .rational import lcm_denominators, parse_rational

DEFAULT_LIMIT = 5000


def size_limit(limit: int | None = None) -> int:
    """Effective subdivision budget: explicit value, then ``TROPBUN_LIMIT``, then 5000."""
    if limit is not None:
        return int(limit)
    env = os.environ.get("TROPBUN_LIMIT")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InvalidInput(f"TROPBUN_LIMIT is not an integer: {env!r}") from None
    return DEFAULT_LIMIT


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str
    length: Fraction

    @property
    def is_loop(self) -> bool:
        return self.src == self.dst


@dataclass(frozen=True, eq=False)
class GraphPoint:
    """A vertex, or an interior point of an edge at ``offset`` from its source."""

    vertex: str | None = None
    edge: str | None = None
    offset: Fraction | None = None

    def __post_init__(self):
        # points are dictionary keys everywhere; hashing a Fraction is slow
        object.__setattr__(self, "_hash", hash((self.vertex, self.edge, self.offset)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if not isinstance(other, GraphPoint):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.vertex == other.vertex
            and self.edge == other.edge
            and self.offset == other.offset
        )

    @classmethod
    def at(cls, vertex: str) -> "GraphPoint":
        return cls(vertex=vertex)

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def __repr__(self) -> str:
        if self.vertex is not None:
            return f"<{self.vertex}>"
        return f"<{self.edge}@{self.offset}>"


@dataclass(frozen=True)
class Component:
    vertices: tuple[str, ...]
    edges: tuple[str, ...]

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges)

    @property
    def genus(self) -> int:
        return 1 - self.euler_characteristic


class MetricGraph:
    """Validated finite model of a compact metric graph.  Immutable."""

    def __init__(self, vertices: Sequence[str], edges: Sequence[Edge]):
        self.vertices: tuple[str, ...] = tuple(vertices)
        self.edges: tuple[Edge, ...] = tuple(edges)
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        self._eindex = {e.id: i for i, e in enumerate(self.edges)}
        self._hash = hash((self.vertices, self.edges))
        self._keys: dict[GraphPoint, tuple] = {}

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, MetricGraph):
            return NotImplemented
        return self._hash == other._hash and self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"MetricGraph(V={len(self.vertices)}, E={len(self.edges)})"

    # lookups

    def edge(self, edge_id: str) -> Edge:
        try:
            return self.edges[self._eindex[edge_id]]
        except KeyError:
            raise InvalidInput(f"unknown edge {edge_id!r}") from None

    def has_vertex(self, v: str) -> bool:
        return v in self._vindex

    def has_edge(self, e: str) -> bool:
        return e in self._eindex

    def vertex_index(self, v: str) -> int:
        return self._vindex[v]

    def edge_index(self, e: str) -> int:
        return self._eindex[e]

    @cached_property
    def incidence(self) -> dict[str, tuple[Edge, ...]]:
        """Edges touching each vertex, in edge order (a loop appears once)."""
        out: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.src].append(e)
            if e.dst != e.src:
                out[e.dst].append(e)
        return {v: tuple(es) for v, es in out.items()}

    def valence(self, v: str) -> int:
        return sum(2 if e.is_loop else 1 for e in self.incidence[v])

    @cached_property
    def length_denominator(self) -> int:
        return lcm_denominators(e.length for e in self.edges)

    @cached_property
    def loops(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.is_loop)

    @cached_property
    def total_length(self) -> Fraction:
        return sum((e.length for e in self.edges), Fraction(0))

    # points

    def point(self, edge_id: str, offset) -> GraphPoint:
        """The point at distance ``offset`` from the source of an edge, in normal form."""
        e = self.edge(edge_id)
        t = Fraction(offset)
        if t < 0 or t > e.length:
            raise InvalidInput(f"offset {t} outside edge {edge_id!r} of length {e.length}")
        if t == 0:
            return GraphPoint(vertex=e.src)
        if t == e.length:
            return GraphPoint(vertex=e.dst)
        return GraphPoint(edge=edge_id, offset=t)

    def check_point(self, p: GraphPoint) -> GraphPoint:
        if p.vertex is not None:
            if p.vertex not in self._vindex:
                raise InvalidInput(f"unknown vertex {p.vertex!r}")
            return p
        e = self.edge(p.edge)
        if not (0 < p.offset < e.length):
            raise InvalidInput(
                f"point on {p.edge!r} must have 0 < offset < {e.length}, got {p.offset}"
            )
        return p

    def point_key(self, p: GraphPoint) -> tuple:
        hit = self._keys.get(p)
        if hit is None:
            if p.vertex is not None:
                hit = (0, self._vindex[p.vertex], Fraction(0))
            else:
                hit = (1, self._eindex[p.edge], p.offset)
            self._keys[p] = hit
        return hit

    def endpoints_of(self, p: GraphPoint) -> tuple[str, ...]:
        """Vertices of the cell containing ``p``."""
        if p.vertex is not None:
            return (p.vertex,)
        e = self.edge(p.edge)
        return (e.src, e.dst)

    # topology

    @cached_property
    def components(self) -> tuple[Component, ...]:
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for e in self.edges:
            a, b = find(e.src), find(e.dst)
            if a != b:
                if self._vindex[a] < self._vindex[b]:
                    parent[b] = a
                else:
                    parent[a] = b
        verts: dict[str, list[str]] = {}
        for v in self.vertices:
            verts.setdefault(find(v), []).append(v)
        edges: dict[str, list[str]] = {r: [] for r in verts}
        for e in self.edges:
            edges[find(e.src)].append(e.id)
        return tuple(Component(tuple(verts[r]), tuple(edges[r])) for r in verts)

    @cached_property
    def component_of_vertex(self) -> dict[str, int]:
        return {v: i for i, c in enumerate(self.components) for v in c.vertices}

    def component_of(self, p: GraphPoint) -> int:
        if p.vertex is not None:
            return self.component_of_vertex[p.vertex]
        return self.component_of_vertex[self.edge(p.edge).src]

    @property
    def is_connected(self) -> bool:
        return len(self.components) == 1

    @cached_property
    def is_simple(self) -> bool:
        seen = set()
        for e in self.edges:
            if e.is_loop:
                return False
            key = frozenset((e.src, e.dst))
            if key in seen:
                return False
            seen.add(key)
        return True


def build_graph(vertices: Iterable[str], edges: Iterable) -> MetricGraph:
    """Validate and build a graph.

    ``edges`` holds ``(id, src, dst, length)`` tuples or mappings with those
    keys; lengths may be ``Fraction``, ``int`` or ``"p/q"`` strings.
    """
    vs = list(vertices)
    seen: set[str] = set()
    for v in vs:
        if v in seen:
            raise InvalidInput(f"duplicate vertex id {v!r}")
        seen.add(v)
    out: list[Edge] = []
    eids: set[str] = set()
    for item in edges:
        if isinstance(item, Edge):
            eid, src, dst, length = item.id, item.src, item.dst, item.length
        elif isinstance(item, Mapping):
            try:
                eid, src, dst, length = item["id"], item["src"], item["dst"], item["length"]
            except KeyError as exc:
                raise InvalidInput(f"edge record missing field {exc.args[0]!r}") from None
        else:
            eid, src, dst, length = item
        length = parse_rational(length)
        if eid in eids:
            raise InvalidInput(f"duplicate edge id {eid!r}")
        eids.add(eid)
        if length <= 0:
            raise InvalidInput(f"non-positive length on edge {eid!r}")
        for end in (src, dst):
            if end not in seen:
                raise InvalidInput(f"edge {eid!r} has dangling endpoint {end!r}")
        out.append(Edge(eid, src, dst, length))
    return MetricGraph(vs, out)


def euler_and_genus(g: MetricGraph) -> tuple[int, list[int]]:
    return len(g.vertices) - len(g.edges), [c.genus for c in g.components]


def canonical_divisor(g: MetricGraph):
    """``K = sum (val(p) - 2) p`` over the vertices of the model."""
    from .divisor import Divisor

    return Divisor(g, {GraphPoint(vertex=v): g.valence(v) - 2 for v in g.vertices})


def spanning_forest(g: MetricGraph, prefer: Iterable[str] = ()) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Kruskal in id order (``prefer`` first): returns (forest edges, non-tree edges)."""
    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    order = list(dict.fromkeys(prefer))
    chosen = set(order)
    order += [e.id for e in g.edges if e.id not in chosen]
    forest = set()
    for eid in order:
        e = g.edge(eid)
        a, b = find(e.src), find(e.dst)
        if a != b:
            parent[a] = b
            forest.add(eid)
    tree = tuple(e.id for e in g.edges if e.id in forest)
    rest = tuple(e.id for e in g.edges if e.id not in forest)
    return tree, rest


class SimpleModel:
    """A loop-free, multiedge-free refinement with a chosen spanning forest.

    ``pieces[e]`` lists the model edges that subdivide original edge ``e``,
    ordered from its source; ``origin[m]`` gives the original edge of model
    edge ``m`` and the offset at which the piece starts.
    """

    def __init__(self, graph: MetricGraph, original: MetricGraph, pieces: Mapping[str, tuple[str, ...]]):
        self.graph = graph
        self.original = original
        self._hash = hash((graph, original))
        self.pieces = dict(pieces)
        self.origin: dict[str, tuple[str, Fraction]] = {}
        for eid, ms in self.pieces.items():
            start = Fraction(0)
            for m in ms:
                self.origin[m] = (eid, start)
                start += graph.edge(m).length
        self.forest, self.cycle_edges = spanning_forest(graph)
        self._forest_set = frozenset(self.forest)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, SimpleModel):
            return NotImplemented
        return self.graph == other.graph and self.original == other.original

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"SimpleModel({self.graph!r}, cycles={len(self.cycle_edges)})"

    def in_forest(self, edge_id: str) -> bool:
        return edge_id in self._forest_set

    def to_model(self, p: GraphPoint) -> GraphPoint:
        """Image in the model of a point of the original graph."""
        if p.vertex is not None:
            return p
        t = p.offset
        for m in self.pieces[p.edge]:
            length = self.graph.edge(m).length
            if t <= length:
                return self.graph.point(m, t)
            t -= length
        raise InvalidInput(f"offset beyond edge {p.edge!r}")

    def to_original(self, p: GraphPoint) -> GraphPoint:
        """Image in the original graph of a point of the model."""
        if p.vertex is not None:
            if self.original.has_vertex(p.vertex):
                return p
            m = next(e for e in self.graph.incidence[p.vertex] if e.src == p.vertex)
            eid, start = self.origin[m.id]
            return self.original.point(eid, start)
        eid, start = self.origin[p.edge]
        return self.original.point(eid, start + p.offset)


def _fresh(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name += "'"
    taken.add(name)
    return name


@lru_cache(maxsize=256)
def simple_model(g: MetricGraph) -> SimpleModel:
    """Refine loops into three pieces and each parallel edge into two (already simple: unchanged)."""
    if g.is_simple:
        return SimpleModel(g, g, {e.id: (e.id,) for e in g.edges})
    classes: dict[frozenset, int] = {}
    for e in g.edges:
        if not e.is_loop:
            key = frozenset((e.src, e.dst))
            classes[key] = classes.get(key, 0) + 1
    vnames = set(g.vertices)
    enames = {e.id for e in g.edges}
    vertices = list(g.vertices)
    edges: list[Edge] = []
    pieces: dict[str, tuple[str, ...]] = {}
    for e in g.edges:
        if e.is_loop:
            k = 3
        elif classes[frozenset((e.src, e.dst))] > 1:
            k = 2
        else:
            k = 1
        if k == 1:
            edges.append(e)
            pieces[e.id] = (e.id,)
            continue
        enames.discard(e.id)
        step = e.length / k
        inner = [_fresh(f"{e.id}:{j}", vnames) for j in range(1, k)]
        vertices.extend(inner)
        chain = [e.src, *inner, e.dst]
        ids = []
        for j in range(k):
            mid = _fresh(f"{e.id}:{j + 1}", enames)
            edges.append(Edge(mid, chain[j], chain[j + 1], step))
            ids.append(mid)
        pieces[e.id] = tuple(ids)
    return SimpleModel(MetricGraph(vertices, edges), g, pieces)


class UnitSubdivision:
    """Unit-length subdivision of ``scale * graph`` as a finite chip-firing graph.

    ``points[i]`` is the point of the original graph that became vertex ``i``;
    ``index`` is the inverse map.  Vertices of the original graph come first.
    """

    def __init__(self, graph: MetricGraph, scale: int):
        from .chipfiring import FiniteGraph

        self.graph = graph
        self.scale = scale
        points: list[GraphPoint] = [GraphPoint(vertex=v) for v in graph.vertices]
        index = {p: i for i, p in enumerate(points)}
        links: list[tuple[int, int]] = []
        for e in graph.edges:
            pieces = int(e.length * scale)
            prev = index[GraphPoint(vertex=e.src)]
            for j in range(1, pieces):
                p = GraphPoint(edge=e.id, offset=Fraction(j, scale))
                index[p] = len(points)
                points.append(p)
                links.append((prev, index[p]))
                prev = index[p]
            links.append((prev, index[GraphPoint(vertex=e.dst)]))
        self.points = points
        self.index = index
        self.chip = FiniteGraph(len(points), links)
        comp = graph.component_of_vertex
        self.component = [comp[graph.endpoints_of(p)[0]] for p in points]

    def vertex(self, p: GraphPoint) -> int:
        try:
            return self.index[p]
        except KeyError:
            raise InvalidInput(f"point {p!r} is not at an integer position of the subdivision") from None


def subdivision_scale(g: MetricGraph, extra_points: Iterable[GraphPoint] = ()) -> int:
    scale = g.length_denominator
    for p in extra_points:
        if p.vertex is None:
            scale = lcm(scale, p.offset.denominator)
    # a unit loop is invisible to chip-firing; two pieces keep the genus honest
    if any(e.length * scale == 1 for e in g.loops):
        scale *= 2
    return scale


@lru_cache(maxsize=1024)
def _unit_size(g: MetricGraph, scale: int) -> int:
    return len(g.vertices) + sum(int(e.length * scale) - 1 for e in g.edges)


@lru_cache(maxsize=128)
def _unit(g: MetricGraph, scale: int) -> UnitSubdivision:
    return UnitSubdivision(g, scale)


def subdivide_to_unit(
    g: MetricGraph, extra_points: Iterable[GraphPoint] = (), limit: int | None = None
) -> UnitSubdivision:
    extra = list(extra_points)
    for p in extra:
        g.check_point(p)
    return unit_subdivision(g, subdivision_scale(g, extra), limit)


def unit_subdivision(g: MetricGraph, scale: int, limit: int | None = None) -> UnitSubdivision:
    """The subdivision at a given scale, after the size-limit check."""
    count = _unit_size(g, scale)
    budget = size_limit(limit)
    if count > budget:
        raise SizeLimitExceeded(f"unit subdivision needs {count} vertices, limit is {budget}")
    return _unit(g, scale)
