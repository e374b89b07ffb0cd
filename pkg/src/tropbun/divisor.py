"""Divisors: finitely supported integer functions on the points of a metric graph."""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .errors import InvalidInput
from .metric_graph import GraphPoint, MetricGraph


class Divisor:
    """Immutable divisor on ``host``; terms are kept sorted in id order."""

    def __init__(self, host: MetricGraph, coeffs: Mapping[GraphPoint, int] | Iterable[tuple[GraphPoint, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[GraphPoint, int] = {}
        for p, c in items:
            if not isinstance(c, int) or isinstance(c, bool):
                raise InvalidInput(f"divisor coefficient must be an integer, got {c!r}")
            if p.vertex is None:
                p = host.point(p.edge, p.offset)
            else:
                host.check_point(p)
            acc[p] = acc.get(p, 0) + c
        self._set(host, acc)

    def _set(self, host: MetricGraph, acc: Mapping[GraphPoint, int]) -> None:
        self.host = host
        self.terms: tuple[tuple[GraphPoint, int], ...] = tuple(
            sorted(((p, c) for p, c in acc.items() if c), key=lambda pc: host.point_key(pc[0]))
        )
        self._map = dict(self.terms)
        self._hash = None

    @classmethod
    def _trusted(cls, host: MetricGraph, acc: Mapping[GraphPoint, int]) -> "Divisor":
        """Skip validation: every key is already a normalised point of ``host``."""
        d = cls.__new__(cls)
        d._set(host, acc)
        return d

    @classmethod
    def zero(cls, host: MetricGraph) -> "Divisor":
        return cls(host)

    @classmethod
    def point(cls, host: MetricGraph, p: GraphPoint, coeff: int = 1) -> "Divisor":
        return cls(host, [(p, coeff)])

    def __iter__(self) -> Iterator[tuple[GraphPoint, int]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, p: GraphPoint) -> int:
        return self._map.get(p, 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Divisor):
            return NotImplemented
        return self.host == other.host and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.host, self.terms))
        return self._hash

    def __repr__(self) -> str:
        if not self.terms:
            return "Divisor(0)"
        return "Divisor(" + " + ".join(f"{c}*{p!r}" for p, c in self.terms) + ")"

    def _same_host(self, other: "Divisor") -> None:
        if self.host != other.host:
            raise InvalidInput("divisors live on different graphs")

    def __add__(self, other: "Divisor") -> "Divisor":
        self._same_host(other)
        acc = dict(self._map)
        for p, c in other.terms:
            acc[p] = acc.get(p, 0) + c
        return Divisor._trusted(self.host, acc)

    def __neg__(self) -> "Divisor":
        return Divisor._trusted(self.host, {p: -c for p, c in self.terms})

    def __sub__(self, other: "Divisor") -> "Divisor":
        self._same_host(other)
        acc = dict(self._map)
        for p, c in other.terms:
            acc[p] = acc.get(p, 0) - c
        return Divisor._trusted(self.host, acc)

    def __mul__(self, k: int) -> "Divisor":
        if not isinstance(k, int) or isinstance(k, bool):
            return NotImplemented
        return Divisor._trusted(self.host, {p: k * c for p, c in self.terms})

    __rmul__ = __mul__

    @property
    def degree(self) -> int:
        return sum(c for _, c in self.terms)

    @property
    def support(self) -> tuple[GraphPoint, ...]:
        return tuple(p for p, _ in self.terms)

    def is_effective(self) -> bool:
        return all(c > 0 for _, c in self.terms)

    def component_degrees(self) -> list[int]:
        out = [0] * len(self.host.components)
        for p, c in self.terms:
            out[self.host.component_of(p)] += c
        return out

    def on_component(self, index: int) -> "Divisor":
        host = self.host
        return Divisor._trusted(host, {p: c for p, c in self.terms if host.component_of(p) == index})


def degree(d: Divisor) -> int:
    return d.degree
