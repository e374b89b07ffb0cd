"""JSON reading and writing for every object the command line handles.

Rationals travel as ``"p/q"`` strings.  Sheets and permutations are 1-based
on the wire and 0-based in memory.  Bundles are read against a base graph
(the original one, not its simple model); edge ids of the simple model are
accepted wherever an original edge id would be.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from .bundles import LocalSystemRep, Multidivisor
from .cocycle import AffineFn, BundleCocycle, Transition
from .covers import FreeCover, Perm, build_cover_relabelled, relabel_point
from .divisor import Divisor
from .elliptic import SemistableCanonicalForm
from .errors import InvalidInput
from .metric_graph import GraphPoint, MetricGraph, SimpleModel, build_graph, simple_model
from .rational import format_rational, parse_rational
from .root_datum import RootDatum


def load_json(path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def dump_json(doc: Any, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(doc, sort_keys=True, indent=2)
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _field(data: Any, key: str, kind: str):
    if not isinstance(data, Mapping):
        raise InvalidInput(f"{kind} must be a JSON object")
    if key not in data:
        raise InvalidInput(f"{kind} is missing field {key!r}")
    return data[key]


def _int(value: Any, what: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise InvalidInput(f"{what} must be an integer, got {value!r}")
    return value


def _list(value: Any, what: str) -> list:
    if not isinstance(value, list):
        raise InvalidInput(f"{what} must be a JSON array")
    return value


# graphs and points


def graph_from_json(data: Any) -> MetricGraph:
    vertices = _list(_field(data, "vertices", "graph"), "graph vertices")
    edges = _list(_field(data, "edges", "graph"), "graph edges")
    for v in vertices:
        if not isinstance(v, str):
            raise InvalidInput(f"vertex ids must be strings, got {v!r}")
    return build_graph(vertices, edges)


def graph_to_json(g: MetricGraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"id": e.id, "src": e.src, "dst": e.dst, "length": format_rational(e.length)} for e in g.edges],
    }


def point_from_json(data: Any, g: MetricGraph) -> GraphPoint:
    if isinstance(data, Mapping) and "vertex" in data:
        v = data["vertex"]
        if not isinstance(v, str) or not g.has_vertex(v):
            raise InvalidInput(f"unknown vertex {v!r}")
        return GraphPoint(vertex=v)
    eid = _field(data, "edge", "point")
    if not isinstance(eid, str) or not g.has_edge(eid):
        raise InvalidInput(f"unknown edge {eid!r}")
    return g.point(eid, parse_rational(_field(data, "offset", "point")))


def point_to_json(p: GraphPoint) -> dict:
    if p.vertex is not None:
        return {"vertex": p.vertex}
    return {"edge": p.edge, "offset": format_rational(p.offset)}


def divisor_from_json(data: Any, g: MetricGraph) -> Divisor:
    terms = []
    for item in _list(data, "divisor"):
        p = point_from_json(_field(item, "point", "divisor term"), g)
        terms.append((p, _int(_field(item, "coeff", "divisor term"), "coefficient")))
    return Divisor(g, terms)


def divisor_to_json(d: Divisor) -> list:
    return [{"point": point_to_json(p), "coeff": c} for p, c in d]


# points on a base given either on the original graph or on its simple model


def model_point_from_json(data: Any, model: SimpleModel) -> GraphPoint:
    if isinstance(data, Mapping) and "edge" in data and not model.original.has_edge(data["edge"]):
        return point_from_json(data, model.graph)
    if isinstance(data, Mapping) and "vertex" in data and not model.original.has_vertex(data["vertex"]):
        return point_from_json(data, model.graph)
    return model.to_model(point_from_json(data, model.original))


def _model_edge(model: SimpleModel, eid: Any) -> str:
    """Model edge carrying data given for ``eid``: the last piece of an original edge."""
    if isinstance(eid, str):
        if eid in model.pieces:
            return model.pieces[eid][-1]
        if model.graph.has_edge(eid):
            return eid
    raise InvalidInput(f"unknown edge {eid!r}")


# covers


def perm_from_json(data: Any, n: int | None = None) -> Perm:
    images = _list(data, "permutation")
    size = len(images) if n is None else n
    out = []
    for x in images:
        out.append(_int(x, "permutation entry") - 1)
    if len(out) != size or sorted(out) != list(range(size)):
        raise InvalidInput(f"not a permutation of 1..{size}: {images!r}")
    return tuple(out)


def perm_to_json(p: Perm) -> list[int]:
    return [k + 1 for k in p]


def cover_from_json(data: Any, model: SimpleModel) -> tuple[FreeCover, dict]:
    """The gauge-fixed cover and the sheet relabelling applied at each vertex."""
    degree = _int(_field(data, "degree", "cover"), "cover degree")
    if degree < 1:
        raise InvalidInput("cover degree must be at least 1")
    sigma_in = data.get("sigma", {})
    if not isinstance(sigma_in, Mapping):
        raise InvalidInput("cover sigma must be a JSON object")
    sigma: dict[str, Perm] = {}
    for eid, p in sigma_in.items():
        m = _model_edge(model, eid)
        if m in sigma:
            raise InvalidInput(f"edge {eid!r} given twice in cover")
        sigma[m] = perm_from_json(p, degree)
    return build_cover_relabelled(model, sigma, degree)


def cover_to_json(c: FreeCover) -> dict:
    """Keys on original edges where only the last piece permutes sheets, model edges otherwise."""
    ident = tuple(range(c.degree))
    model = c.base
    sigma = {}
    for eid, ms in model.pieces.items():
        moving = [m for m in ms if c.sigma[m] != ident]
        if moving == [ms[-1]]:
            sigma[eid] = perm_to_json(c.sigma[ms[-1]])
        else:
            sigma.update((m, perm_to_json(c.sigma[m])) for m in moving)
    return {"degree": c.degree, "sigma": sigma}


def cover_point_from_json(data: Any, cover: FreeCover, tau) -> GraphPoint:
    sheet = _int(_field(data, "sheet", "cover point"), "sheet")
    if not 1 <= sheet <= cover.degree:
        raise InvalidInput(f"sheet {sheet} outside 1..{cover.degree}")
    p = model_point_from_json(data, cover.base)
    return relabel_point(cover, tau, p, sheet - 1)


def cover_point_to_json(cover: FreeCover, p: GraphPoint) -> dict:
    q, k = cover.project(p)
    out = point_to_json(cover.base.to_original(q))
    out["sheet"] = k + 1
    return out


# bundles


def base_from_json(data: Any, graph: MetricGraph | None) -> SimpleModel:
    if isinstance(data, Mapping) and "graph" in data:
        graph = graph_from_json(data["graph"])
    if graph is None:
        raise InvalidInput("no base graph: pass --graph or embed a \"graph\" field")
    return simple_model(graph)


def multidivisor_from_json(data: Any, graph: MetricGraph | None = None) -> Multidivisor:
    model = base_from_json(data, graph)
    cover, tau = cover_from_json(_field(data, "cover", "bundle"), model)
    terms = []
    for item in _list(data.get("divisor", []), "bundle divisor"):
        p = cover_point_from_json(_field(item, "point", "divisor term"), cover, tau)
        terms.append((p, _int(_field(item, "coeff", "divisor term"), "coefficient")))
    return Multidivisor(cover, Divisor(cover.total, terms))


def multidivisor_to_json(E: Multidivisor) -> dict:
    return {
        "graph": graph_to_json(E.base.original),
        "cover": cover_to_json(E.cover),
        "divisor": [{"point": cover_point_to_json(E.cover, p), "coeff": c} for p, c in E.div],
    }


def _fn_from_json(data: Any) -> AffineFn:
    return AffineFn(_int(_field(data, "slope", "transition"), "slope"), parse_rational(_field(data, "const", "transition")))


def cocycle_from_json(data: Any, graph: MetricGraph | None = None) -> BundleCocycle:
    model = base_from_json(data, graph)
    rank = _int(_field(data, "rank", "cocycle"), "cocycle rank")
    raw = _field(data, "transitions", "cocycle")
    if not isinstance(raw, Mapping):
        raise InvalidInput("cocycle transitions must be a JSON object")
    out = {}
    for eid, tr in raw.items():
        if not model.graph.has_edge(eid):
            raise InvalidInput(f"cocycle edge {eid!r} is not an edge of the simple model")
        perm = perm_from_json(_field(tr, "perm", "transition"), rank)
        fns = tuple(_fn_from_json(x) for x in _list(_field(tr, "g", "transition"), "transition functions"))
        out[eid] = Transition(perm, fns)
    return BundleCocycle(model, rank, out)


def cocycle_to_json(b: BundleCocycle) -> dict:
    return {
        "graph": graph_to_json(b.base.original),
        "rank": b.rank,
        "transitions": {
            e: {
                "perm": perm_to_json(t.perm),
                "g": [{"slope": f.slope, "const": format_rational(f.const)} for f in t.fns],
            }
            for e, t in b.transitions.items()
        },
    }


def local_system_from_json(data: Any, graph: MetricGraph | None = None) -> LocalSystemRep:
    model = base_from_json(data, graph)
    rank = _int(_field(data, "rank", "local system"), "local system rank")
    raw = _field(data, "monodromy", "local system")
    if not isinstance(raw, Mapping):
        raise InvalidInput("local system monodromy must be a JSON object")
    mono = {}
    for eid, item in raw.items():
        if not model.graph.has_edge(eid):
            raise InvalidInput(f"local system edge {eid!r} is not an edge of the simple model")
        perm = perm_from_json(_field(item, "perm", "monodromy"), rank)
        shift = tuple(parse_rational(x) for x in _list(_field(item, "shift", "monodromy"), "shift"))
        mono[eid] = (perm, shift)
    return LocalSystemRep(model, rank, mono)


def local_system_to_json(lam: LocalSystemRep) -> dict:
    return {
        "graph": graph_to_json(lam.base.original),
        "rank": lam.rank,
        "monodromy": {
            e: {"perm": perm_to_json(p), "shift": [format_rational(x) for x in s]} for e, (p, s) in lam.monodromy.items()
        },
    }


def canonical_form_to_json(form: SemistableCanonicalForm) -> dict:
    return form.to_json()


# root data


def root_datum_from_json(data: Any) -> RootDatum:
    rank = _int(_field(data, "rank", "root datum"), "rank")

    def vectors(key):
        return [list(_list(v, key)) for v in _list(_field(data, key, "root datum"), key)]

    return RootDatum(rank, vectors("roots"), vectors("coroots"))


def root_datum_to_json(r: RootDatum) -> dict:
    return {"rank": r.rank, "roots": [list(v) for v in r.roots], "coroots": [list(v) for v in r.coroots]}
