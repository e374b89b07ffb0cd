import json
from fractions import Fraction

import pytest

from tropbun import catalog, io
from tropbun.bundles import LocalSystemRep, bundle_from_multidivisor, bundle_iso, multidivisor
from tropbun.covers import FreeCover, enumerate_covers
from tropbun.divisor import Divisor
from tropbun.elliptic import e_trop, psi
from tropbun.errors import InvalidInput
from tropbun.metric_graph import GraphPoint, simple_model
from tropbun.root_datum import gl_datum


def test_graph_round_trip():
    for make in catalog.STANDARD.values():
        g = make()
        assert io.graph_from_json(io.graph_to_json(g)) == g
    doc = {"vertices": ["a", "b"], "edges": [{"id": "e1", "src": "a", "dst": "b", "length": "1/1"}]}
    assert io.graph_to_json(io.graph_from_json(doc)) == doc


@pytest.mark.parametrize(
    "doc",
    [
        {"vertices": ["a"]},
        {"vertices": "ab", "edges": []},
        {"vertices": [1], "edges": []},
        {"vertices": ["a", "b"], "edges": [{"id": "e", "src": "a", "dst": "b", "length": "1/0"}]},
        [],
    ],
)
def test_graph_rejects(doc):
    with pytest.raises(InvalidInput):
        io.graph_from_json(doc)


def test_divisor_round_trip(theta):
    doc = [{"point": {"vertex": "u"}, "coeff": 2}, {"point": {"edge": "e1", "offset": "1/3"}, "coeff": -1}]
    d = io.divisor_from_json(doc, theta)
    assert d.degree == 1
    assert io.divisor_from_json(io.divisor_to_json(d), theta) == d


@pytest.mark.parametrize(
    "doc",
    [
        [{"point": {"vertex": "z"}, "coeff": 1}],
        [{"point": {"edge": "e1", "offset": "3/1"}, "coeff": 1}],
        [{"point": {"vertex": "u"}, "coeff": 1.5}],
        [{"point": {"vertex": "u"}}],
        {"point": {"vertex": "u"}, "coeff": 1},
    ],
)
def test_divisor_rejects(theta, doc):
    with pytest.raises(InvalidInput):
        io.divisor_from_json(doc, theta)


def test_cover_keys_on_original_edges(theta_model):
    for n in (2, 3):
        for c in enumerate_covers(theta_model, n):
            doc = io.cover_to_json(c)
            assert set(doc["sigma"]) <= {"e1", "e2", "e3"}
            back, _ = io.cover_from_json(doc, theta_model)
            assert back == c


def test_cover_relabelled_on_forest_edge(circ_model):
    # a swap written on the first half of the circle is moved onto the cycle edge
    c, tau = io.cover_from_json({"degree": 2, "sigma": {"e1": [2, 1]}}, circ_model)
    assert c.is_connected
    assert tau


@pytest.mark.parametrize(
    "doc",
    [{"degree": 0}, {"degree": 2, "sigma": {"e9": [2, 1]}}, {"degree": 2, "sigma": {"e1": [1, 1]}}, {"degree": 2, "sigma": []}],
)
def test_cover_rejects(circ_model, doc):
    with pytest.raises(InvalidInput):
        io.cover_from_json(doc, circ_model)


def test_multidivisor_round_trip(theta_model):
    a, b = theta_model.cycle_edges
    f = FreeCover(theta_model, 3, {a: (1, 2, 0), b: (1, 0, 2)})
    pts = catalog.grid_points(theta_model.graph, Fraction(1, 4))
    E = multidivisor(f, [(pts[3], 0, 2), (pts[7], 2, -1), (pts[-1], 1, 1)])
    doc = json.loads(io.dump_json(io.multidivisor_to_json(E)))
    assert io.multidivisor_from_json(doc) == E


def test_multidivisor_needs_graph():
    doc = {"cover": {"degree": 1}, "divisor": []}
    with pytest.raises(InvalidInput):
        io.multidivisor_from_json(doc)
    E = io.multidivisor_from_json(doc, catalog.segment())
    assert E.rank == 1


def test_elliptic_round_trip():
    for E in (e_trop(2, 1), psi(Fraction(1, 5), 3, 1), e_trop(3, 2, Fraction(7, 2))):
        assert bundle_iso(io.multidivisor_from_json(io.multidivisor_to_json(E)), E)


def test_cocycle_round_trip(circ_model):
    b = bundle_from_multidivisor(e_trop(2, 1))
    assert io.cocycle_from_json(io.cocycle_to_json(b)) == b
    doc = io.cocycle_to_json(b)
    assert all(set(t) == {"perm", "g"} for t in doc["transitions"].values())


def test_local_system_round_trip(circ_model):
    lam = LocalSystemRep(circ_model, 2, {circ_model.cycle_edges[0]: ((1, 0), (Fraction(1, 3), Fraction(0)))})
    assert io.local_system_from_json(io.local_system_to_json(lam)) == lam


def test_root_datum():
    doc = {"rank": 2, "roots": [[1, -1], [-1, 1]], "coroots": [[1, -1], [-1, 1]]}
    assert io.root_datum_from_json(doc) == gl_datum(2)
    assert io.root_datum_to_json(gl_datum(2)) == doc
    with pytest.raises(InvalidInput):
        io.root_datum_from_json({"rank": 2, "roots": [[1, 2, 3]], "coroots": [[1, 1, 1]]})


def test_dump_is_canonical():
    assert io.dump_json({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'
    assert io.dump_json({"b": 1}, pretty=True) == '{\n  "b": 1\n}'


def test_load_errors(tmp_path):
    with pytest.raises(InvalidInput):
        io.load_json(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(InvalidInput, match="malformed"):
        io.load_json(bad)


def test_point_conversion(theta_model):
    p = io.model_point_from_json({"edge": "e2", "offset": "1/4"}, theta_model)
    assert theta_model.to_original(p) == GraphPoint(edge="e2", offset=Fraction(1, 4))
    q = io.model_point_from_json({"edge": "e2:2", "offset": "1/4"}, theta_model)
    assert theta_model.to_original(q) == GraphPoint(edge="e2", offset=Fraction(3, 4))
