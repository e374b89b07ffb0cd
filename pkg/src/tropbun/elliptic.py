"""Bundles on a circle of circumference ``l``.

The circle is modelled by three vertices ``c0, c1, c2`` at ``0, l/3, 2l/3``
with edges oriented in the direction of increasing coordinate; ``p_x`` is the
point at coordinate ``x`` and ``p_0 = c0``.  Its connected ``n``-sheeted cover
is again a circle, of length ``n l``, on which the lift of ``p_x`` to the
first sheet sits at coordinate ``x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .bundles import (
    Multidivisor,
    bn_rank_bundle,
    bundle_iso,
    direct_sum,
    dual,
    is_semistable,
    is_stable,
    line_bundle,
    slope,
    tensor,
)
from .covers import FreeCover
from .divisor import Divisor
from .errors import InvalidInput
from .jacobian import abel_jacobi, jacobian
from .metric_graph import GraphPoint, MetricGraph, SimpleModel, build_graph, simple_model
from .rational import format_rational, mod


@dataclass(frozen=True)
class CirclePoint:
    circumference: Fraction
    x: Fraction

    @classmethod
    def of(cls, x, circumference=1) -> "CirclePoint":
        length = Fraction(circumference)
        if length <= 0:
            raise InvalidInput("circumference must be positive")
        return cls(length, mod(Fraction(x), length))


@lru_cache(maxsize=64)
def circle_model(circumference=Fraction(1)) -> SimpleModel:
    third = Fraction(circumference) / 3
    g = build_graph(
        ["c0", "c1", "c2"],
        [("e0", "c0", "c1", third), ("e1", "c1", "c2", third), ("e2", "c2", "c0", third)],
    )
    return simple_model(g)


def circle_point(x, circumference=1) -> GraphPoint:
    length = Fraction(circumference)
    x = mod(Fraction(x), length)
    third = length / 3
    i = int(x // third)
    r = x - i * third
    if r == 0:
        return GraphPoint(vertex=f"c{i}")
    return GraphPoint(edge=f"e{i}", offset=r)


def _shift(n: int) -> tuple[int, ...]:
    return tuple((k + 1) % n for k in range(n))


@lru_cache(maxsize=4096)
def connected_cover(n: int, circumference=1) -> FreeCover:
    return FreeCover(circle_model(Fraction(circumference)), n, {"e2": _shift(n)})


@lru_cache(maxsize=4096)
def e_trop(n: int, d: int, circumference=1) -> Multidivisor:
    """The connected ``n``-sheeted cover with ``d`` times the first lift of ``p_0``."""
    if n < 1:
        raise InvalidInput("rank must be at least 1")
    f = connected_cover(n, circumference)
    return Multidivisor(f, Divisor(f.total, [(GraphPoint(vertex=f.vertex_name("c0", 0)), d)]))


@lru_cache(maxsize=4096)
def point_bundle(x, circumference=1) -> Multidivisor:
    """``H(p_x - p_0)``."""
    model = circle_model(Fraction(circumference))
    d = Divisor(model.graph, [(circle_point(x, circumference), 1), (GraphPoint(vertex="c0"), -1)])
    return line_bundle(model, d)


@lru_cache(maxsize=4096)
def psi(x, n: int, d: int, circumference=1) -> Multidivisor:
    """``E(n, d)`` twisted by the degree-zero line bundle ``H(p_x - p_0)``."""
    return tensor(e_trop(n, d, circumference), point_bundle(x, circumference))


@dataclass(frozen=True)
class SemistableCanonicalForm:
    n: int
    d: int
    h: int
    points: tuple[Fraction, ...]
    circumference: Fraction

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "h": self.h,
            "points": [format_rational(x) for x in self.points],
            "circumference": format_rational(self.circumference),
        }


def _circle_length(E: Multidivisor) -> Fraction:
    g = E.base.graph
    length = g.total_length
    if E.base != circle_model(length):
        raise InvalidInput("bundle does not live on the standard circle model")
    return length


def _component_coordinate(m: Multidivisor, comp, n_prime: int, d_prime: int, length: Fraction) -> Fraction:
    """Canonical coordinate in ``[0, l/n')`` of one stable summand."""
    f = m.cover
    total = f.total
    anchor = GraphPoint(vertex=f.vertex_name("c0", comp.sheets[0]))
    part = m.div.on_component(comp.index) - Divisor(total, [(anchor, d_prime)])
    jac = jacobian(total)
    coords = abel_jacobi(part, jac=jac).vector
    members = set(total.components[comp.index].edges)
    j = next(i for i, e in enumerate(jac.cycle_edges) if e in members)
    a = mod(coords[j], jac.gram[j][j])
    return mod(a / n_prime, length / n_prime)


@lru_cache(maxsize=65536)
def classify_semistable(E: Multidivisor) -> SemistableCanonicalForm:
    """Coordinates in ``Sym^h`` of a bundle in the main semistable component."""
    length = _circle_length(E)
    if not is_semistable(E):
        raise InvalidInput("bundle is not semistable")
    n, d = E.rank, E.degree
    h = gcd(n, d)
    n_prime, d_prime = n // h, d // h
    points = []
    for comp in E.cover.components:
        if comp.size != n_prime:
            raise InvalidInput(
                f"summand of rank {comp.size} lies outside the main component (expected rank {n_prime})"
            )
        points.append(_component_coordinate(E, comp, n_prime, d_prime, length))
    return SemistableCanonicalForm(n, d, h, tuple(sorted(points)), length)


def bundle_from_form(form: SemistableCanonicalForm) -> Multidivisor:
    n_prime, d_prime = form.n // form.h, form.d // form.h
    out = None
    for x in form.points:
        s = psi(x, n_prime, d_prime, form.circumference)
        out = s if out is None else direct_sum(out, s)
    return out


def _is_circle(g: MetricGraph, comp) -> bool:
    return comp.genus == 1 and all(g.valence(v) == 2 for v in comp.vertices)


def circle_rank(d: Divisor) -> int:
    """``max(-1, deg - 1)`` per circle, except degree 0 (0 iff the class is trivial)."""
    g = d.host
    total = 0
    degs = d.component_degrees()
    for i, comp in enumerate(g.components):
        if not _is_circle(g, comp):
            raise InvalidInput("circle_rank needs every component to be a circle")
        k = degs[i]
        if k > 0:
            r = k - 1
        elif k < 0:
            r = -1
        else:
            r = 0 if abel_jacobi(d.on_component(i)).is_zero() else -1
        total += r + 1
    return total - 1


def brill_noether_member(E: Multidivisor, r: int) -> bool:
    """At least ``r + 1`` summands of ``E`` are trivial."""
    if E.degree != 0:
        raise InvalidInput("Brill-Noether loci are taken in degree 0")
    form = classify_semistable(E)
    return sum(1 for x in form.points if x == 0) >= r + 1


def _check_theta_pair(E: Multidivisor, F: Multidivisor) -> None:
    if slope(F) != -slope(E):
        raise InvalidInput("theta membership needs slope(F) = -slope(E)")
    if not is_stable(F):
        raise InvalidInput("F must be stable")


@lru_cache(maxsize=65536)
def summands(form: SemistableCanonicalForm) -> tuple[Multidivisor, ...]:
    """The distinct stable summands ``psi(x)`` of the bundle with this form."""
    n_prime, d_prime = form.n // form.h, form.d // form.h
    return tuple(psi(x, n_prime, d_prime, form.circumference) for x in sorted(set(form.points)))


def theta_member(E: Multidivisor, F: Multidivisor) -> bool:
    """``dual(F)`` is isomorphic to a summand of ``E``."""
    _check_theta_pair(E, F)
    form = classify_semistable(E)
    target = dual(F)
    if target.rank != form.n // form.h:
        raise InvalidInput(f"F must have rank {form.n // form.h}")
    return any(bundle_iso(target, s) for s in summands(form))


def theta_member_by_rank(E: Multidivisor, F: Multidivisor, limit: int | None = None) -> bool:
    """The tensor-rank side of the criterion: ``r(E (x) F) >= 0``."""
    _check_theta_pair(E, F)
    return bn_rank_bundle(tensor(E, F), limit) >= 0
