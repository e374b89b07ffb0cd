from math import factorial

import pytest

from tropbun.errors import InvalidInput, SizeLimitExceeded
from tropbun.root_datum import (
    RootDatum,
    gl_datum,
    identity_matrix,
    pairing,
    reflect,
    sl_datum,
    validate,
    weyl_group,
)


def matmul(x, y):
    n = len(x)
    return tuple(tuple(sum(x[i][k] * y[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def det(m):
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(len(m)))


class TestValidate:
    def test_gl2(self):
        d = RootDatum(2, [[1, -1], [-1, 1]], [[1, -1], [-1, 1]])
        assert validate(d).ok
        assert d == gl_datum(2)

    def test_bad_pairing(self):
        report = validate(RootDatum(1, [[1]], [[1]]))
        assert not report.axiom_i
        assert not report.ok and report.failures

    def test_torus(self):
        assert validate(RootDatum(3, [], [])).ok
        assert gl_datum(1).roots == ()

    def test_not_closed(self):
        report = validate(RootDatum(2, [[1, -1]], [[1, -1]]))
        assert report.axiom_i and not report.axiom_ii

    @pytest.mark.parametrize(
        "rank, roots, coroots",
        [(1, [[0]], [[2]]), (1, [[1], [1]], [[2], [2]]), (1, [[1]], []), (2, [[1]], [[2]]), (1, [[True]], [[2]]), (-1, [], [])],
    )
    def test_malformed(self, rank, roots, coroots):
        with pytest.raises(InvalidInput):
            RootDatum(rank, roots, coroots)

    @pytest.mark.parametrize("n", range(1, 6))
    def test_standard(self, n):
        assert validate(gl_datum(n)).ok
        assert validate(sl_datum(n)).ok
        assert len(gl_datum(n).roots) == n * (n - 1)


class TestWeyl:
    @pytest.mark.parametrize("n", range(1, 6))
    def test_orders(self, n):
        assert len(weyl_group(gl_datum(n))) == factorial(n)
        assert len(weyl_group(sl_datum(n))) == factorial(n)

    def test_small(self):
        assert weyl_group(RootDatum(2, [], [])) == [identity_matrix(2)]
        assert len(weyl_group(gl_datum(2))) == 2
        assert len(weyl_group(sl_datum(2))) == 2 and sl_datum(2).rank == 1

    def test_reflections_are_involutions(self):
        for datum in (gl_datum(4), sl_datum(4)):
            for i in range(len(datum.roots)):
                s = datum.reflection_matrix(i)
                assert matmul(s, s) == identity_matrix(datum.rank)
                assert det([list(r) for r in s]) == -1
                a, c = datum.roots[i], datum.coroots[i]
                assert tuple(sum(s[r][k] * a[k] for k in range(datum.rank)) for r in range(datum.rank)) == reflect(a, a, c)

    def test_closed(self):
        group = weyl_group(gl_datum(3))
        members = set(group)
        ident = identity_matrix(3)
        for x in group:
            assert any(matmul(x, y) == ident for y in group)
            for y in group:
                assert matmul(x, y) in members

    def test_preserves_roots(self):
        datum = sl_datum(4)
        roots = set(datum.roots)
        for w in weyl_group(datum):
            image = {tuple(sum(w[r][k] * a[k] for k in range(datum.rank)) for r in range(datum.rank)) for a in roots}
            assert image == roots

    def test_rejects_invalid(self):
        with pytest.raises(InvalidInput):
            weyl_group(RootDatum(1, [[1]], [[1]]))
        with pytest.raises(InvalidInput):
            weyl_group(RootDatum(2, [[1, 0], [0, 1]], [[2, -3], [-3, 2]]))

    def test_bound(self):
        with pytest.raises(SizeLimitExceeded):
            weyl_group(gl_datum(4), bound=10)

    def test_pairing(self):
        assert pairing([1, -1, 0], [1, -1, 0]) == 2
