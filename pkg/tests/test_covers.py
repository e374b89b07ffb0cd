from fractions import Fraction
from itertools import permutations, product
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropbun import catalog
from tropbun.covers import (
    FreeCover,
    build_cover,
    compose,
    components_and_genus,
    conjugate,
    cover_isomorphisms,
    deck_group,
    disjoint_union,
    enumerate_covers,
    fibered_product,
    invert,
    trivial_cover,
)
from tropbun.errors import InvalidInput
from tropbun.metric_graph import euler_and_genus, simple_model

SWAP = (1, 0)


def burnside_count(n: int, k: int) -> int:
    """Orbits of ``S_n`` acting on ``S_n^k`` by simultaneous conjugation."""
    group = list(permutations(range(n)))
    total = 0
    for g in group:
        centralizer = sum(1 for h in group if compose(g, h) == compose(h, g))
        total += centralizer**k
    return total // factorial(n)


def connected_double(model):
    return FreeCover(model, 2, {model.cycle_edges[0]: SWAP})


class TestPermutations:
    def test_group_laws(self):
        p, q = (1, 2, 0), (0, 2, 1)
        assert compose(p, invert(p)) == (0, 1, 2)
        assert conjugate(p, q) == compose(compose(p, q), invert(p))


class TestBuild:
    def test_connected_circle_cover(self, circ_model):
        c = connected_double(circ_model)
        assert c.is_connected
        assert c.total.total_length == 2
        assert components_and_genus(c) == [((0, 1), 1)]

    def test_split_circle_cover(self, circ_model):
        c = FreeCover(circ_model, 2)
        assert components_and_genus(c) == [((0,), 1), ((1,), 1)]
        g = c.total
        for comp in g.components:
            assert sum(g.edge(e).length for e in comp.edges) == 1

    def test_theta_double(self, theta_model):
        a, _ = theta_model.cycle_edges
        c = FreeCover(theta_model, 2, {a: SWAP})
        assert c.is_connected
        chi, genus = euler_and_genus(c.total)
        assert (chi, genus) == (-2, [3])

    def test_gauge_fixing(self, circ_model):
        forest_edge = circ_model.forest[0]
        with pytest.raises(InvalidInput):
            FreeCover(circ_model, 2, {forest_edge: SWAP})
        c = build_cover(circ_model, {forest_edge: SWAP})
        assert c == connected_double(circ_model)

    def test_bad_permutation(self, circ_model):
        with pytest.raises(InvalidInput):
            FreeCover(circ_model, 2, {circ_model.cycle_edges[0]: (0, 0)})
        with pytest.raises(InvalidInput):
            FreeCover(circ_model, 0)

    def test_lift_project(self, theta_model):
        a, b = theta_model.cycle_edges
        c = FreeCover(theta_model, 3, {a: (1, 2, 0), b: (1, 0, 2)})
        for p in catalog.grid_points(theta_model.graph, Fraction(1, 4)):
            for k in range(3):
                assert c.project(c.lift(p, k)) == (p, k)


class TestComponents:
    def test_trivial_theta(self, theta_model):
        assert components_and_genus(trivial_cover(theta_model, 3)) == [((0,), 2), ((1,), 2), ((2,), 2)]

    def test_product_of_connected(self, circ_model):
        d = connected_double(circ_model)
        assert components_and_genus(fibered_product(d, d)) == [((0, 3), 1), ((1, 2), 1)]


class TestEnumerate:
    def test_circle(self, circ_model):
        assert len(enumerate_covers(circ_model, 2)) == 2
        assert len(enumerate_covers(circ_model, 3)) == 3

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_segment(self, seg_model, n):
        assert len(enumerate_covers(seg_model, n)) == 1

    @pytest.mark.parametrize("name, n", [(m, n) for m in ("CIRC", "THETA", "DUMBBELL") for n in (1, 2, 3, 4)])
    def test_burnside(self, name, n):
        model = simple_model(catalog.STANDARD[name]())
        covers = enumerate_covers(model, n)
        assert len(covers) == burnside_count(n, len(model.cycle_edges))
        for a, b in product(covers, repeat=2):
            assert bool(cover_isomorphisms(a, b)) == (a == b)

    def test_theta_counts(self, theta_model):
        # pairs of permutations up to simultaneous conjugation
        assert [len(enumerate_covers(theta_model, n)) for n in range(1, 6)] == [1, 4, 11, 43, 161]

    def test_cap(self, circ_model):
        with pytest.raises(InvalidInput):
            enumerate_covers(circ_model, 7)
        with pytest.raises(InvalidInput):
            enumerate_covers(circ_model, 0)


class TestIsomorphisms:
    def test_identity_present(self, theta_model):
        for c in enumerate_covers(theta_model, 3):
            assert ((0, 1, 2),) in cover_isomorphisms(c, c)

    def test_trivial_all(self, circ_model):
        assert len(cover_isomorphisms(trivial_cover(circ_model, 3), trivial_cover(circ_model, 3))) == 6

    def test_connected_vs_split(self, circ_model):
        assert cover_isomorphisms(connected_double(circ_model), trivial_cover(circ_model, 2)) == ()

    def test_deck(self, circ_model, theta_model):
        assert len(deck_group(connected_double(circ_model))) == 2
        assert len(deck_group(trivial_cover(circ_model, 3))) == 6
        a, _ = theta_model.cycle_edges
        assert deck_group(FreeCover(theta_model, 2, {a: SWAP})) == (((0, 1),), ((1, 0),))

    def test_different_bases(self, circ_model, theta_model):
        with pytest.raises(InvalidInput):
            cover_isomorphisms(trivial_cover(circ_model, 1), trivial_cover(theta_model, 1))


class TestUnionProduct:
    def test_union(self, circ_model):
        one = trivial_cover(circ_model, 1)
        assert disjoint_union(one, one) == trivial_cover(circ_model, 2)
        u = disjoint_union(connected_double(circ_model), one)
        assert u.degree == 3
        assert sorted(c.size for c in u.components) == [1, 2]
        assert disjoint_union(trivial_cover(circ_model, 2), trivial_cover(circ_model, 3)).degree == 5

    def test_product(self, circ_model, theta_model):
        assert fibered_product(trivial_cover(circ_model, 2), trivial_cover(circ_model, 3)).degree == 6
        a, b = theta_model.cycle_edges
        c = FreeCover(theta_model, 3, {a: (1, 2, 0)})
        p = fibered_product(trivial_cover(theta_model, 2), c)
        assert sorted(comp.size for comp in p.components) == [3, 3]


@given(st.permutations(range(3)), st.permutations(range(3)), st.permutations(range(3)))
def test_conjugated_covers_are_isomorphic(a, b, t):
    model = simple_model(catalog.theta())
    e1, e2 = model.cycle_edges
    c1 = FreeCover(model, 3, {e1: tuple(a), e2: tuple(b)})
    c2 = FreeCover(model, 3, {e1: conjugate(tuple(t), tuple(a)), e2: conjugate(tuple(t), tuple(b))})
    assert cover_isomorphisms(c1, c2)
    chi, _ = euler_and_genus(c1.total)
    assert chi == 3 * euler_and_genus(model.graph)[0]
