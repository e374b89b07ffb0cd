"""Chip-firing on finite multigraphs: reduced divisors and Baker-Norine rank.

Divisors here are plain integer lists indexed by vertex.  Everything works
per connected component, so disconnected graphs are fine as long as each
call names a vertex of the component it is about.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Iterable, Sequence


class FiniteGraph:
    def __init__(self, n: int, links: Iterable[tuple[int, int]]):
        mult: list[dict[int, int]] = [dict() for _ in range(n)]
        for a, b in links:
            if a == b:
                continue
            mult[a][b] = mult[a].get(b, 0) + 1
            mult[b][a] = mult[b].get(a, 0) + 1
        self.n = n
        self.nbrs: list[tuple[tuple[int, int], ...]] = [tuple(sorted(m.items())) for m in mult]
        self.comp_id = [-1] * n
        self.comps: list[list[int]] = []
        for s in range(n):
            if self.comp_id[s] >= 0:
                continue
            cid = len(self.comps)
            self.comp_id[s] = cid
            members, stack = [s], [s]
            while stack:
                u = stack.pop()
                for w, _ in self.nbrs[u]:
                    if self.comp_id[w] < 0:
                        self.comp_id[w] = cid
                        members.append(w)
                        stack.append(w)
            self.comps.append(sorted(members))
        self._levels: dict[int, tuple[list[int], list[list[int]]]] = {}
        self._memo: dict[tuple, dict[tuple[int, ...], list]] = {}
        self._ranks: dict[tuple, dict[tuple[int, ...], int]] = {}
        self._splits: dict = {}

    def levels(self, q: int) -> tuple[list[int], list[list[int]]]:
        """BFS distance from ``q`` and the vertices at each distance."""
        hit = self._levels.get(q)
        if hit is not None:
            return hit
        dist = [-1] * self.n
        dist[q] = 0
        layers = [[q]]
        while True:
            nxt = []
            for u in layers[-1]:
                for w, _ in self.nbrs[u]:
                    if dist[w] < 0:
                        dist[w] = len(layers)
                        nxt.append(w)
            if not nxt:
                break
            layers.append(nxt)
        self._levels[q] = (dist, layers)
        return dist, layers

    def reduce(self, divisor: Sequence[int], q: int) -> list[int]:
        """The ``q``-reduced divisor equivalent to ``divisor`` on the component of ``q``."""
        D = list(divisor)
        nbrs = self.nbrs
        dist, layers = self.levels(q)
        # bring every vertex but q out of debt, outermost layer first, by firing
        # the ball around q just often enough
        for k in range(len(layers) - 1, 0, -1):
            need = -min(D[v] for v in layers[k])
            if need > 0:
                for v in layers[k]:
                    for w, m in nbrs[v]:
                        if dist[w] == k - 1:
                            D[v] += need * m
                            D[w] -= need * m
        comp = self.comps[self.comp_id[q]]
        size = len(comp)
        while True:
            burnt = {q}
            heat: dict[int, int] = {}
            stack = [q]
            while stack:
                u = stack.pop()
                for w, m in nbrs[u]:
                    if w in burnt:
                        continue
                    h = heat.get(w, 0) + m
                    heat[w] = h
                    if h > D[w]:
                        burnt.add(w)
                        stack.append(w)
            if len(burnt) == size:
                return D
            # fire the unburnt set as many times as it stays out of debt
            times = min(D[v] // h for v, h in heat.items() if v not in burnt)
            for v, h in heat.items():
                if v in burnt:
                    continue
                D[v] -= times * h
                for w, m in nbrs[v]:
                    if w in burnt:
                        D[w] += times * m

    def has_effective_class(self, divisor: Sequence[int], q: int) -> bool:
        return self.reduce(divisor, q)[q] >= 0

    def component_rank(self, divisor: Sequence[int], comp: int, candidates: Sequence[int] | None = None) -> int:
        """Baker-Norine rank on one component.

        ``r(D) >= k`` holds iff ``r(D - v) >= k - 1`` for every ``v`` in
        ``candidates`` (all vertices of the component by default).  The rank
        is found by raising ``k`` until that test fails.  Proven lower and
        upper bounds are memoised on reduced representatives, so each class
        is reduced once per threshold at most.
        """
        members = self.comps[comp]
        q = members[0]
        cands = tuple(members if candidates is None else candidates)
        bounds = self._memo.setdefault((comp, cands), {})
        seen = self._ranks.setdefault((comp, cands), {})
        raw = tuple(divisor[v] for v in members)
        if raw in seen:
            return seen[raw]
        reduce = self.reduce

        def at_least(D: list[int], k: int) -> bool:
            if k < 0:
                return True
            if sum(D[v] for v in members) < k:
                return False
            red = reduce(D, q)
            key = tuple(red[v] for v in members)
            known = bounds.get(key)
            if known is None:
                known = bounds[key] = [0, None] if red[q] >= 0 else [-1, -1]
            lo, hi = known
            if k <= lo:
                return True
            if hi is not None and k > hi:
                return False
            for v in cands:
                red[v] -= 1
                ok = at_least(red, k - 1)
                red[v] += 1
                if not ok:
                    known[1] = k - 1
                    return False
            known[0] = k
            return True

        D = list(divisor)
        k = -1
        while at_least(D, k + 1):
            k += 1
        seen[raw] = k
        return k

    def rank(self, divisor: Sequence[int], candidates: Sequence[int] | None = None) -> int:
        """Rank with the convention ``sum_i (r_i + 1) - 1`` over components."""
        if candidates is not None:
            candidates = tuple(candidates)
        split = self._splits.get(candidates)
        if split is None:
            split = self._splits[candidates] = [
                None if candidates is None else tuple(v for v in candidates if self.comp_id[v] == cid)
                for cid in range(len(self.comps))
            ]
        total = 0
        for cid, cands in enumerate(split):
            total += self.component_rank(divisor, cid, cands) + 1
        return total - 1

    def component_rank_bruteforce(self, divisor: Sequence[int], comp: int) -> int:
        """Literal definition: test every effective E, degree by degree, lexicographically."""
        members = self.comps[comp]
        q = members[0]
        deg = sum(divisor[v] for v in members)
        r = 0
        while r <= deg:
            for E in combinations_with_replacement(members, r):
                D = list(divisor)
                for v in E:
                    D[v] -= 1
                if not self.has_effective_class(D, q):
                    return r - 1
            r += 1
        return deg if deg >= 0 else -1

    def rank_bruteforce(self, divisor: Sequence[int]) -> int:
        return sum(self.component_rank_bruteforce(divisor, c) + 1 for c in range(len(self.comps))) - 1
