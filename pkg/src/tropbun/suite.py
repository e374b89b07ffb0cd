"""The acceptance suite: ten exact checks with wall-clock budgets.

Each ``criterion_*`` function runs one family of instances and returns a
:class:`CriterionResult`; a criterion passes when every instance agrees and
it finished inside its budget.  ``python -m tropbun suite run`` and
``tests/test_acceptance.py`` both call :func:`run_suite`.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, factorial, gcd
from typing import Callable, Iterator, Sequence

from . import catalog
from .bundles import (
    LocalSystemRep,
    Multidivisor,
    bn_rank_bundle,
    bundle_from_local_system,
    bundle_iso,
    direct_sum,
    dual,
    is_semistable,
    line_bundle,
    local_system_from_bundle,
    multidivisor_from_cocycle,
    tensor,
    wrr_check,
)
from .cocycle import AffineFn, BundleCocycle, Transition
from .covers import FreeCover, enumerate_covers
from .divisor import Divisor
from .divisor_theory import linequiv, rank, rr_check
from .elliptic import (
    brill_noether_member,
    circle_model,
    circle_rank,
    classify_semistable,
    point_bundle,
    psi,
    theta_member,
    theta_member_by_rank,
)
from .errors import InvalidInput, TropbunError
from .jacobian import jac_equiv
from .metric_graph import (
    GraphPoint,
    MetricGraph,
    SimpleModel,
    canonical_divisor,
    euler_and_genus,
    simple_model,
    subdivide_to_unit,
)
from .root_datum import RootDatum, gl_datum, sl_datum, validate, weyl_group

DEFAULT_BN_GRID = 6
THETA_GRID = 24


@dataclass
class CriterionResult:
    number: int
    title: str
    ok: bool
    detail: str
    seconds: float
    budget: float | None

    @property
    def passed(self) -> bool:
        return self.ok and (self.budget is None or self.seconds <= self.budget)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        timing = f"{self.seconds:.1f}s" + (f" of {self.budget:.0f}s" if self.budget is not None else "")
        return f"criterion {self.number:>2} {status}  {self.title}: {self.detail} ({timing})"

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "exact": self.ok,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
            "budget": self.budget,
        }


class _Tally:
    def __init__(self):
        self.checked = 0
        self.failures: list[str] = []

    def check(self, ok: bool, what: Callable[[], str]) -> None:
        self.checked += 1
        if not ok and len(self.failures) < 5:
            self.failures.append(what())
        elif not ok:
            self.failures.append("")

    @property
    def ok(self) -> bool:
        return not self.failures and self.checked > 0

    def summary(self, noun: str) -> str:
        text = f"{self.checked} {noun}, {len(self.failures)} failures"
        shown = [f for f in self.failures if f]
        if shown:
            text += "; first: " + shown[0]
        return text


def _timed(number: int, title: str, budget: float | None, body: Callable[[], tuple[bool, str]]) -> CriterionResult:
    start = time.perf_counter()
    try:
        ok, detail = body()
    except TropbunError as exc:
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CriterionResult(number, title, ok, detail, time.perf_counter() - start, budget)


# divisor families


def signed_divisors(
    host: MetricGraph,
    points: Sequence[GraphPoint],
    degrees: Sequence[int],
    admit: Callable[[int, int], bool],
) -> Iterator[Divisor]:
    """Every ``P - N`` with ``P, N`` effective on ``points``, disjoint supports,
    ``deg(P - N)`` in ``degrees`` and ``admit(deg P, deg N)``."""
    idx = range(len(points))
    top = max(degrees)
    for n_neg in range(0, 64):
        if not any(admit(d + n_neg, n_neg) for d in degrees if d + n_neg >= 0):
            if n_neg > top + 64:
                break
            if not any(admit(k, n_neg) for k in range(0, top + n_neg + 1)):
                break
        for neg in combinations_with_replacement(idx, n_neg):
            used = set(neg)
            for d in degrees:
                n_pos = d + n_neg
                if n_pos < 0 or not admit(n_pos, n_neg):
                    continue
                for pos in combinations_with_replacement(idx, n_pos):
                    if used.intersection(pos):
                        continue
                    yield Divisor(host, [(points[i], 1) for i in pos] + [(points[i], -1) for i in neg])


RR_DEGREES = range(-1, 5)
RR_MAX_NEGATIVE = 3
WRR_DEGREES = range(-2, 4)


def _rr_admit(n_pos: int, n_neg: int) -> bool:
    return n_neg <= RR_MAX_NEGATIVE


def _wrr_admit(n_pos: int, n_neg: int) -> bool:
    return n_pos + n_neg <= 2 or (n_neg == 0 and n_pos == 3)


def rr_family(g: MetricGraph) -> Iterator[Divisor]:
    return signed_divisors(g, catalog.grid_points(g), RR_DEGREES, _rr_admit)


def _lifted_grid(f: FreeCover) -> list[GraphPoint]:
    model = f.base
    base_points = [model.to_model(p) for p in catalog.grid_points(model.original)]
    return [f.lift(p, k) for p in base_points for k in range(f.degree)]


def wrr_family(f: FreeCover) -> Iterator[Multidivisor]:
    for d in signed_divisors(f.total, _lifted_grid(f), WRR_DEGREES, _wrr_admit):
        yield Multidivisor(f, d)


def wrr_covers(model: SimpleModel) -> list[FreeCover]:
    return [f for n in (1, 2, 3) for f in enumerate_covers(model, n)]


# criteria


def criterion_1() -> CriterionResult:
    def body():
        t = _Tally()
        for name in ("SEG", "CIRC", "THETA", "DUMBBELL"):
            for d in rr_family(catalog.STANDARD[name]()):
                rep = rr_check(d)
                t.check(rep.holds, lambda: f"{name} {d!r}: {rep.lhs} != {rep.rhs}")
        return t.ok, t.summary("divisors")

    return _timed(1, "Riemann-Roch", 60, body)


def criterion_2() -> CriterionResult:
    def body():
        t = _Tally()
        for name in ("CIRC", "THETA"):
            for f in wrr_covers(simple_model(catalog.STANDARD[name]())):
                for E in wrr_family(f):
                    rep = wrr_check(E)
                    t.check(rep.holds, lambda: f"{name} {f!r} {E.div!r}: {rep.lhs} != {rep.rhs}")
        return t.ok, t.summary("multidivisors")

    return _timed(2, "Weil-Riemann-Roch", 120, body)


def _random_segment_cocycle(rng: random.Random, model: SimpleModel, n: int, slopes: Sequence[int]) -> BundleCocycle:
    fns = tuple(AffineFn(s, Fraction(rng.randint(-8, 8), 4)) for s in slopes)
    perm = tuple(rng.sample(range(n), n))
    return BundleCocycle(model, n, {"e1": Transition(perm, fns)})


def splitting_type(E: Multidivisor) -> tuple[int, ...]:
    """Degrees of the line-bundle summands of a bundle on a tree, sorted."""
    degs = E.div.component_degrees()
    if any(c.size != 1 for c in E.cover.components):
        raise InvalidInput("summand of rank > 1 over a tree")
    return tuple(sorted(degs[c.index] for c in E.cover.components))


def criterion_3(pairs: int = 200, seed: int = 7) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        model = simple_model(catalog.segment())
        t = _Tally()
        same = 0
        for _ in range(pairs):
            n = rng.randint(1, 3)
            slopes = [rng.randint(-2, 2) for _ in range(n)]
            E1 = multidivisor_from_cocycle(_random_segment_cocycle(rng, model, n, slopes))
            if rng.random() < 0.5:
                other = rng.sample(slopes, n)
            else:
                other = [rng.randint(-2, 2) for _ in range(n)]
            E2 = multidivisor_from_cocycle(_random_segment_cocycle(rng, model, n, other))
            a, b = splitting_type(E1), splitting_type(E2)
            t.check(a == tuple(sorted(slopes)) and b == tuple(sorted(other)), lambda: f"splitting {a}, {b}")
            iso = bundle_iso(E1, E2)
            same += a == b
            t.check(iso == (a == b), lambda: f"iso={iso} for splittings {a} and {b}")
        return t.ok, t.summary("checks") + f" ({same} of {pairs} pairs share a splitting type)"

    return _timed(3, "Birkhoff-Grothendieck", 10, body)


PSI_TYPES = ((2, 0), (2, 1), (3, 1), (3, 2), (4, 2))


def _in_translation_group(delta: Fraction, n: int, d: int, length: Fraction) -> bool:
    """``delta`` lies in ``(d l / n) Z + l Z``."""
    return any(((delta - a * Fraction(d, n) * length) / length).denominator == 1 for a in range(n))


def criterion_4(grid: int = 24) -> CriterionResult:
    def body():
        t = _Tally()
        length = Fraction(1)
        xs = [Fraction(k, grid) for k in range(grid)]
        for n, d in PSI_TYPES:
            bundles = [psi(x, n, d) for x in xs]
            # a connected psi is in the main component only when n and d are coprime
            forms = [classify_semistable(b) for b in bundles] if gcd(n, d) == 1 else None
            for i, x in enumerate(xs):
                for j, y in enumerate(xs):
                    expected = _in_translation_group(x - y, n, d, length)
                    iso = bundle_iso(bundles[i], bundles[j])
                    t.check(iso == expected, lambda: f"(n,d)=({n},{d}) x={x} y={y}: iso={iso}")
                    if forms is not None:
                        t.check((forms[i] == forms[j]) == iso, lambda: f"canonical form disagrees at x={x} y={y}")
        return t.ok, t.summary("checks")

    return _timed(4, "circle classification", 60, body)


NS_GRIDS = {"CIRC": [Fraction(k, 4) for k in range(4)], "THETA": [Fraction(0), Fraction(1, 2)]}


def local_system_family(model: SimpleModel, grid: Sequence[Fraction]) -> Iterator[LocalSystemRep]:
    cycles = model.cycle_edges
    for n in (1, 2, 3):
        for f in enumerate_covers(model, n):
            for consts in combinations_product(grid, len(cycles) * n):
                mono = {
                    e: (f.sigma[e], tuple(consts[i * n:(i + 1) * n])) for i, e in enumerate(cycles)
                }
                yield LocalSystemRep(model, n, mono)


def combinations_product(values: Sequence, k: int) -> Iterator[tuple]:
    if k == 0:
        yield ()
        return
    for head in values:
        for rest in combinations_product(values, k - 1):
            yield (head,) + rest


def criterion_5() -> CriterionResult:
    def body():
        t = _Tally()
        for name, grid in NS_GRIDS.items():
            model = simple_model(catalog.STANDARD[name]())
            for lam in local_system_family(model, grid):
                E = bundle_from_local_system(lam)
                t.check(E.degree == 0 and is_semistable(E), lambda: f"{name}: forward output not semistable of degree 0")
                back = local_system_from_bundle(E)
                E2 = bundle_from_local_system(back)
                t.check(bundle_iso(E, E2), lambda: f"{name} {dict(lam.monodromy)}: round trip not isomorphic")
        return t.ok, t.summary("checks")

    return _timed(5, "Narasimhan-Seshadri", 60, body)


def _principal_by_firing(rng: random.Random, g: MetricGraph, points: Sequence[GraphPoint]) -> Divisor:
    """Fire a random vertex set of the unit subdivision a random number of times."""
    sub = subdivide_to_unit(g, points)
    chip = sub.chip
    fired = {v for v in range(chip.n) if rng.random() < 0.4}
    times = rng.randint(1, 2)
    vec = [0] * chip.n
    for v in fired:
        for w, m in chip.nbrs[v]:
            if w not in fired:
                vec[v] -= m * times
                vec[w] += m * times
    return Divisor(g, [(sub.points[i], c) for i, c in enumerate(vec) if c])


def _random_degree_zero(rng: random.Random, g: MetricGraph, points: Sequence[GraphPoint]) -> Divisor:
    k = rng.randint(0, 3)
    terms = [(rng.choice(points), 1) for _ in range(k)] + [(rng.choice(points), -1) for _ in range(k)]
    per_comp = Divisor(g, terms).component_degrees()
    # balance each component at its first vertex
    fix = [(GraphPoint(vertex=c.vertices[0]), -per_comp[i]) for i, c in enumerate(g.components)]
    return Divisor(g, terms + fix)


def circle_instances() -> Iterator[Divisor]:
    """Every divisor on a union of circles whose rank criteria 1 and 2 compute."""
    g = catalog.circle()
    K = canonical_divisor(g)
    for d in rr_family(g):
        yield d
        yield K - d
    model = simple_model(g)
    for f in wrr_covers(model):
        twist = line_bundle(model, canonical_divisor(model.graph))
        for E in wrr_family(f):
            yield E.div
            yield tensor(twist, dual(E)).div


def criterion_6(pairs: int = 500, seed: int = 11) -> CriterionResult:
    def body():
        rng = random.Random(seed)
        t = _Tally()
        equivalent = 0
        for name, make in catalog.STANDARD.items():
            g = make()
            points = catalog.grid_points(g, Fraction(1, 4))
            for i in range(pairs):
                d1 = _random_degree_zero(rng, g, points)
                if i % 2:
                    d2 = d1 + _principal_by_firing(rng, g, points)
                else:
                    d2 = _random_degree_zero(rng, g, points)
                a, b = linequiv(d1, d2), jac_equiv(d1, d2)
                equivalent += a
                t.check(a == b, lambda: f"{name}: reduce says {a}, Abel-Jacobi says {b} for {d1!r} ~ {d2!r}")
                t.check(i % 2 == 0 or a, lambda: f"{name}: fired divisor not recognised as equivalent")
        circles = 0
        for d in circle_instances():
            circles += 1
            r1, r2 = circle_rank(d), rank(d)
            t.check(r1 == r2, lambda: f"circle rank {r1} != rank {r2} for {d!r}")
        return t.ok, t.summary("checks") + f" ({equivalent} equivalent pairs, {circles} circle instances)"

    return _timed(6, "oracle equivalence", None, body)


def _circle_sum(xs: Sequence[Fraction]) -> Multidivisor:
    E = point_bundle(xs[0])
    for x in xs[1:]:
        E = direct_sum(E, point_bundle(x))
    return E


def criterion_7(max_rank: int = 4, grid: int = THETA_GRID) -> CriterionResult:
    def body():
        t = _Tally()
        pts = [Fraction(k, grid) for k in range(grid)]
        lines = [point_bundle(y) for y in pts]
        members = 0
        for n in range(1, max_rank + 1):
            for xs in combinations_with_replacement(pts, n):
                E = _circle_sum(xs)
                for F in lines:
                    a = theta_member(E, F)
                    b = theta_member_by_rank(E, F)
                    members += a
                    t.check(a == b, lambda: f"E={xs} F={F.div!r}: summand test {a}, rank test {b}")
        return t.ok, t.summary("pairs") + f" ({members} members)"

    return _timed(7, "theta criterion", 120, body)


def partition_count(n: int) -> int:
    """Number of partitions of ``n`` by the standard part-size recursion."""
    table = [1] + [0] * n
    for part in range(1, n + 1):
        for total in range(part, n + 1):
            table[total] += table[total - part]
    return table[n]


def criterion_8(max_degree: int = 5) -> CriterionResult:
    def body():
        t = _Tally()
        counts = {}
        for name in ("SEG", "CIRC", "THETA"):
            model = simple_model(catalog.STANDARD[name]())
            chi, _ = euler_and_genus(model.original)
            for n in range(1, max_degree + 1):
                covers = enumerate_covers(model, n)
                counts[name, n] = len(covers)
                for f in covers:
                    chi_total, _ = euler_and_genus(f.total)
                    t.check(chi_total == n * chi, lambda: f"{name} degree {n}: chi {chi_total} != {n * chi}")
                if name == "CIRC":
                    t.check(len(covers) == partition_count(n), lambda: f"circle degree {n}: {len(covers)} covers")
                if name == "SEG":
                    t.check(len(covers) == 1, lambda: f"segment degree {n}: {len(covers)} covers")
        circ = ",".join(str(counts["CIRC", n]) for n in range(2, max_degree + 1))
        theta = ",".join(str(counts["THETA", n]) for n in range(2, max_degree + 1))
        return t.ok, t.summary("checks") + f" (circle {circ}; theta {theta})"

    return _timed(8, "Riemann-Hurwitz", None, body)


def criterion_9(grid: int = DEFAULT_BN_GRID) -> CriterionResult:
    def body():
        t = _Tally()
        pts = [Fraction(k, grid) for k in range(grid)]
        for n in (3, 4):
            loci: dict[int, set] = {r: set() for r in range(-1, n + 1)}
            for xs in combinations_with_replacement(pts, n):
                E = _circle_sum(xs)
                r_E = bn_rank_bundle(E)
                form = classify_semistable(E)
                for r in range(-1, n + 1):
                    member = brill_noether_member(E, r)
                    t.check(member == (r_E >= r), lambda: f"n={n} r={r} E={xs}: member={member}, rank={r_E}")
                    if member:
                        loci[r].add(form.points)
            for r, locus in loci.items():
                free = n - r - 1
                expected = comb(grid + free - 1, free) if free >= 0 else 0
                # dropping r + 1 trivial summands leaves a free multiset of size n - r - 1
                rest = set()
                for points in locus:
                    left = list(points)
                    for _ in range(r + 1):
                        left.remove(Fraction(0))
                    rest.add(tuple(left))
                t.check(
                    len(locus) == expected and all(len(p) == free for p in rest) and len(rest) == len(locus),
                    lambda: f"n={n} r={r}: locus has {len(locus)} points, expected {expected}",
                )
        return t.ok, t.summary("checks") + f" (grid 1/{grid})"

    return _timed(9, "Brill-Noether", None, body)


def _bad_data() -> list[tuple[str, Callable[[], RootDatum]]]:
    return [
        ("pairing 1", lambda: RootDatum(1, [[1]], [[1]])),
        ("not closed", lambda: RootDatum(2, [[1, -1]], [[1, -1]])),
        ("infinite closure", lambda: RootDatum(2, [[1, 0], [0, 1]], [[2, -3], [-3, 2]])),
        ("zero root", lambda: RootDatum(1, [[0]], [[2]])),
        ("duplicate root", lambda: RootDatum(1, [[1], [1]], [[2], [2]])),
        ("count mismatch", lambda: RootDatum(1, [[1]], [])),
    ]


def criterion_10() -> CriterionResult:
    def body():
        t = _Tally()
        for n in range(1, 5):
            for datum in (gl_datum(n), sl_datum(n)):
                t.check(validate(datum).ok, lambda: f"rank-{n} datum fails validation")
                order = len(weyl_group(datum))
                t.check(order == factorial(n), lambda: f"Weyl group of order {order} for n={n}")
        for label, make in _bad_data():
            try:
                datum = make()
            except InvalidInput:
                t.check(True, str)
                continue
            report = validate(datum)
            t.check(not report.ok, lambda: f"fixture {label!r} accepted")
            try:
                weyl_group(datum)
                t.check(False, lambda: f"fixture {label!r} produced a Weyl group")
            except TropbunError:
                t.check(True, str)
        return t.ok, t.summary("checks")

    return _timed(10, "root data", 5, body)


CRITERIA: dict[int, Callable[..., CriterionResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
}


def run_suite(only: Sequence[int] | None = None, bn_grid: int = DEFAULT_BN_GRID, echo: Callable[[str], None] | None = None):
    results = []
    for number in only or sorted(CRITERIA):
        result = criterion_9(bn_grid) if number == 9 else CRITERIA[number]()
        if echo is not None:
            echo(result.line())
        results.append(result)
    return results
