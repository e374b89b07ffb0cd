"""Exact rational helpers: parsing, formatting and small linear solves."""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import InvalidInput

_RATIONAL = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(-?\d+))?\s*$")


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` (``q > 0``, reduced) or a bare integer."""
    if isinstance(text, bool):
        raise InvalidInput(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise InvalidInput(f"not a rational: {text!r}")
    m = _RATIONAL.match(text)
    if m is None:
        raise InvalidInput(f"not a rational: {text!r}")
    p = int(m.group(1))
    if m.group(2) is None:
        return Fraction(p)
    q = int(m.group(2))
    if q <= 0:
        raise InvalidInput(f"rational {text!r} needs a positive denominator")
    if gcd(p, q) != 1:
        raise InvalidInput(f"rational {text!r} is not in lowest terms")
    return Fraction(p, q)


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def lcm_denominators(values) -> int:
    out = 1
    for v in values:
        d = Fraction(v).denominator
        out = out * d // gcd(out, d)
    return out


def mod(x: Fraction, m: Fraction) -> Fraction:
    """Representative of ``x`` in ``[0, m)``."""
    return x - m * (x // m)


def solve(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    """Solve a nonsingular square system exactly by Gauss-Jordan elimination."""
    n = len(matrix)
    a = [[Fraction(v) for v in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        row = [v * inv for v in a[col]]
        a[col] = row
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], row)]
    return [a[r][n] for r in range(n)]


def inverse(matrix: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(matrix)
    cols = [solve(matrix, [Fraction(int(i == j)) for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]
