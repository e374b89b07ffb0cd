from fractions import Fraction

import pytest

from tropbun import catalog
from tropbun.divisor import Divisor
from tropbun.errors import InvalidInput, SizeLimitExceeded
from tropbun.metric_graph import (
    GraphPoint,
    build_graph,
    canonical_divisor,
    euler_and_genus,
    simple_model,
    subdivide_to_unit,
)
from tropbun.rational import format_rational, mod, parse_rational

from helpers import two_circles


class TestRationals:
    def test_parse_and_format(self):
        assert parse_rational("3/4") == Fraction(3, 4)
        assert parse_rational("-2") == -2
        assert parse_rational(5) == 5
        assert format_rational(Fraction(-6, 4)) == "-3/2"
        assert format_rational(2) == "2/1"

    @pytest.mark.parametrize("text", ["1/0", "2/4", "1/-2", "x", "", "1.5", True, None])
    def test_rejects(self, text):
        with pytest.raises(InvalidInput):
            parse_rational(text)

    def test_mod(self):
        assert mod(Fraction(-1, 3), Fraction(1)) == Fraction(2, 3)
        assert mod(Fraction(7, 4), Fraction(1, 2)) == Fraction(1, 4)


class TestBuild:
    def test_segment(self, seg):
        assert (len(seg.vertices), len(seg.edges)) == (2, 1)

    def test_circle(self, circ):
        assert (len(circ.vertices), len(circ.edges)) == (2, 2)
        assert circ.total_length == 1

    def test_zero_length(self):
        with pytest.raises(InvalidInput, match="non-positive length"):
            build_graph(["a", "b"], [("e", "a", "b", 0)])

    @pytest.mark.parametrize(
        "vertices, edges",
        [
            (["a", "a"], []),
            (["a"], [("e", "a", "b", 1)]),
            (["a", "b"], [("e", "a", "b", 1), ("e", "b", "a", 1)]),
            (["a", "b"], [{"id": "e", "src": "a", "length": "1/1"}]),
        ],
    )
    def test_malformed(self, vertices, edges):
        with pytest.raises(InvalidInput):
            build_graph(vertices, edges)

    def test_points(self, seg):
        assert seg.point("e1", 0) == GraphPoint(vertex="a")
        assert seg.point("e1", 1) == GraphPoint(vertex="b")
        with pytest.raises(InvalidInput):
            seg.point("e1", 2)
        with pytest.raises(InvalidInput):
            seg.check_point(GraphPoint(vertex="z"))


class TestSimpleModel:
    def test_segment_unchanged(self, seg):
        m = simple_model(seg)
        assert m.graph == seg
        assert m.cycle_edges == ()

    def test_theta(self, theta):
        m = simple_model(theta)
        assert (len(m.graph.vertices), len(m.graph.edges)) == (5, 6)
        assert len(m.cycle_edges) == 2
        assert m.graph.is_simple

    def test_loop_becomes_triangle(self):
        # a single midpoint would leave two parallel edges
        m = simple_model(build_graph(["x"], [("l", "x", "x", 1)]))
        assert (len(m.graph.vertices), len(m.graph.edges)) == (3, 3)
        assert {e.length for e in m.graph.edges} == {Fraction(1, 3)}
        assert m.graph.is_simple

    @pytest.mark.parametrize("name", sorted(catalog.STANDARD))
    def test_point_round_trip(self, name):
        g = catalog.STANDARD[name]()
        m = simple_model(g)
        for p in catalog.grid_points(g, Fraction(1, 6)):
            assert m.to_original(m.to_model(p)) == p
        assert euler_and_genus(m.graph) == euler_and_genus(g)


class TestInvariants:
    def test_euler(self, seg, theta):
        assert euler_and_genus(seg) == (1, [0])
        assert euler_and_genus(theta) == (-1, [2])
        assert euler_and_genus(two_circles()) == (0, [1, 1])

    def test_canonical(self, seg, circ, theta):
        a, b = GraphPoint(vertex="a"), GraphPoint(vertex="b")
        assert canonical_divisor(seg) == Divisor(seg, [(a, -1), (b, -1)])
        assert canonical_divisor(circ).degree == 0 and len(canonical_divisor(circ)) == 0
        K = canonical_divisor(theta)
        assert K == Divisor(theta, [(GraphPoint(vertex="u"), 1), (GraphPoint(vertex="v"), 1)])
        # handshake: deg K = 2 |E| - 2 |V|
        assert K.degree == 2 * len(theta.edges) - 2 * len(theta.vertices)

    def test_canonical_degree_everywhere(self):
        for make in catalog.STANDARD.values():
            g = make()
            chi, _ = euler_and_genus(g)
            assert canonical_divisor(g).degree == -2 * chi


class TestSubdivision:
    def test_circle_scale_two(self, circ):
        sub = subdivide_to_unit(circ)
        assert sub.scale == 2
        assert sub.chip.n == 2
        # two unit edges between the same pair of vertices
        assert sub.chip.nbrs[0] == ((1, 2),)

    def test_segment_thirds(self, seg):
        sub = subdivide_to_unit(seg, [seg.point("e1", Fraction(1, 3))])
        assert sub.chip.n == 4
        assert sum(m for nb in sub.chip.nbrs for _, m in nb) == 2 * 3

    def test_points_index(self, seg):
        p = seg.point("e1", Fraction(2, 3))
        sub = subdivide_to_unit(seg, [p])
        assert sub.points[sub.vertex(p)] == p

    def test_size_limit(self, seg, monkeypatch):
        far = seg.point("e1", Fraction(1, 10000))
        with pytest.raises(SizeLimitExceeded):
            subdivide_to_unit(seg, [far])
        assert subdivide_to_unit(seg, [far], limit=20000).chip.n == 10001
        monkeypatch.setenv("TROPBUN_LIMIT", "3")
        with pytest.raises(SizeLimitExceeded):
            subdivide_to_unit(seg, [seg.point("e1", Fraction(1, 3))])
