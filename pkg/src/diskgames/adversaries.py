"""Breaker heuristics used to stress-test the Maker strategies.

None of these plays optimally.  They are adversaries in the empirical
sense: cheap, mean-spirited edge pickers that punish bookkeeping bugs.
Each keeps an incremental view of the game so one pick stays cheap even
on boards with 10^5 edges.
"""

from __future__ import annotations

import numpy as np

from diskgames.games import MAKER
from diskgames.graphs import UnionFind, norm_edge


class _EdgePool:
    """Unclaimed edges with O(1) removal and O(1) uniform sampling."""

    def __init__(self, edges):
        self.arr = [norm_edge(u, v) for u, v in edges]
        self.pos = {e: i for i, e in enumerate(self.arr)}

    def __len__(self) -> int:
        return len(self.arr)

    def remove(self, e) -> None:
        i = self.pos.pop(e, None)
        if i is None:
            return
        last = self.arr.pop()
        if last != e:
            self.arr[i] = last
            self.pos[last] = i

    def sample(self, rng, k: int) -> list:
        if not self.arr:
            return []
        idx = rng.integers(0, len(self.arr), size=min(k, len(self.arr)))
        return [self.arr[i] for i in idx]


class _Adversary:
    """Shared transcript tracking; subclasses implement _pick."""

    def __init__(self, edges, seed: int = 0, sample: int = 24):
        self.pool = _EdgePool(edges)
        self.rng = np.random.default_rng(seed)
        self.sample = sample
        self.maker_deg: dict[int, int] = {}
        self._seen = 0

    def _sync(self, state) -> None:
        t = state.transcript
        while self._seen < len(t):
            entry = t[self._seen]
            self._seen += 1
            e = (entry["edge"][0], entry["edge"][1])
            self.pool.remove(e)
            if entry["side"] == MAKER:
                self._on_maker(e)

    def _on_maker(self, e) -> None:
        self.maker_deg[e[0]] = self.maker_deg.get(e[0], 0) + 1
        self.maker_deg[e[1]] = self.maker_deg.get(e[1], 0) + 1

    def choose(self, state):
        self._sync(state)
        return self._pick(state)

    def _pick(self, state):
        raise NotImplementedError


class RandomBreaker(_Adversary):
    """Uniform over the unclaimed edges."""

    def _pick(self, state):
        return self.pool.arr[self.rng.integers(len(self.pool.arr))]


class LowDegreeAttacker(_Adversary):
    """Starves vertices where Maker is weakest.

    Samples a handful of unclaimed edges and claims the one whose
    endpoints have the smallest Maker degrees, so vertices Maker has
    neglected stay hard to serve.
    """

    def _pick(self, state):
        cands = self.pool.sample(self.rng, self.sample)
        return min(cands, key=lambda e: (self.maker_deg.get(e[0], 0) + self.maker_deg.get(e[1], 0), e))


class ClusterSpoiler(_Adversary):
    """Blocks growth of Maker's largest connected clusters.

    Tracks Maker's components with a union-find and, among a random
    sample of unclaimed edges, claims the one touching the most Maker
    mass (favouring edges that would merge two big clusters).
    """

    def __init__(self, edges, seed: int = 0, sample: int = 24):
        super().__init__(edges, seed=seed, sample=sample)
        n = 0
        for u, v in edges:
            n = max(n, u + 1, v + 1)
        self.uf = UnionFind(n)

    def _on_maker(self, e) -> None:
        super()._on_maker(e)
        self.uf.union(e[0], e[1])

    def _mass(self, v: int) -> int:
        if self.maker_deg.get(v, 0) == 0:
            return 0
        return self.uf.size[self.uf.find(v)]

    def _pick(self, state):
        cands = self.pool.sample(self.rng, self.sample)
        return max(cands, key=lambda e: (self._mass(e[0]) + self._mass(e[1]), [-e[0], -e[1]]))


def min_cut_partition(n: int, edges) -> tuple[float, set[int]]:
    """Global minimum edge cut by repeated maximum-adjacency sweeps.

    Returns (cut weight, one side of the cut).  Unit weights; parallel
    edges accumulate.  Deterministic tie-breaking so tests can pin
    outcomes.  O(n^3), fine for the few-hundred-vertex boards the cut
    adversary faces.
    """
    if n < 2:
        return 0.0, set(range(n))
    w = np.zeros((n, n))
    for u, v in edges:
        if u != v:
            w[u, v] += 1.0
            w[v, u] += 1.0
    groups: list[set[int]] = [{i} for i in range(n)]
    active = list(range(n))
    best_w = float("inf")
    best_side: set[int] = set()
    while len(active) > 1:
        a0 = active[0]
        order = [a0]
        wsum = {v: w[a0, v] for v in active if v != a0}
        while wsum:
            nxt = max(wsum, key=lambda v: (wsum[v], -v))
            order.append(nxt)
            del wsum[nxt]
            for v in wsum:
                wsum[v] += w[nxt, v]
        s, t = order[-2], order[-1]
        cut_w = float(sum(w[t, v] for v in active if v != t))
        if cut_w < best_w:
            best_w = cut_w
            best_side = set(groups[t])
        groups[s] |= groups[t]
        for v in active:
            if v not in (s, t):
                w[s, v] += w[t, v]
                w[v, s] = w[s, v]
        active.remove(t)
    return best_w, best_side


class CutAttacker(_Adversary):
    """Goes straight for a sparsest edge cut of the board.

    Computes a global min cut up front and claims its edges first; once
    the cut is spent it recomputes on what Maker could still use, then
    degrades to low-degree pressure.  Beats naive Maker play whenever
    the board has a thin cut.
    """

    def __init__(self, edges, seed: int = 0, sample: int = 24, max_recomputes: int = 8):
        super().__init__(edges, seed=seed, sample=sample)
        self.board = [norm_edge(u, v) for u, v in edges]
        self.n = 0
        for u, v in self.board:
            self.n = max(self.n, u + 1, v + 1)
        self.recomputes_left = max_recomputes
        self.targets = self._cut_targets(self.board)

    def _cut_targets(self, edges) -> list:
        _, side = min_cut_partition(self.n, edges)
        cut = [e for e in self.board if (e[0] in side) != (e[1] in side)]
        return sorted(cut)

    def _pick(self, state):
        while True:
            while self.targets:
                e = self.targets.pop(0)
                if e in self.pool.pos:
                    return e
            if self.recomputes_left <= 0:
                break
            self.recomputes_left -= 1
            # cut what is still usable: maker edges plus unclaimed
            usable = [e for e in self.board if state.owner.get(e) != "breaker"]
            self.targets = self._cut_targets(usable)
            if not any(e in self.pool.pos for e in self.targets):
                self.targets = []
                break
        cands = self.pool.sample(self.rng, self.sample)
        return min(cands, key=lambda e: (self.maker_deg.get(e[0], 0) + self.maker_deg.get(e[1], 0), e))


ADVERSARY_NAMES = ("random", "cut", "lowdeg", "cluster")


def make_adversary(name: str, edges, seed: int = 0):
    """Build one of the standard adversaries by name."""
    if name == "random":
        return RandomBreaker(edges, seed=seed)
    if name == "cut":
        return CutAttacker(edges, seed=seed)
    if name == "lowdeg":
        return LowDegreeAttacker(edges, seed=seed)
    if name == "cluster":
        return ClusterSpoiler(edges, seed=seed)
    raise ValueError(f"unknown adversary {name!r}")
