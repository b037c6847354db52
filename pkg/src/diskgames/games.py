"""Maker-Breaker game core.

Breaker always moves first; with bias b he claims b edges per round before
Maker claims one.  Maker wins a game when, once every edge is claimed, his
edges contain one of the winning structures; all winning structures here
are monotone (closed under adding edges), which the exact solver exploits
via two cutoffs: Maker has already won when his current edges contain a
winning set, and Breaker has already won when Maker's edges plus everything
unclaimed contain none.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from diskgames import graphs
from diskgames.graphs import UnionFind, norm_edge

MAKER = "maker"
BREAKER = "breaker"


class GameState:
    """Board, ownership and transcript of one Maker-Breaker play."""

    def __init__(self, edges, bias: int = 1):
        board = []
        seen = set()
        for u, v in edges:
            e = norm_edge(u, v)
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            board.append(e)
        self.board = board
        self.board_set = seen
        self.bias = bias
        self.owner: dict[tuple[int, int], str] = {}
        self.free = dict.fromkeys(board)  # insertion-ordered unclaimed set
        self.transcript: list[dict] = []
        self.to_move = BREAKER
        self._breaker_left = bias

    def unclaimed(self) -> list[tuple[int, int]]:
        return list(self.free)

    def maker_edges(self) -> list[tuple[int, int]]:
        return [e for e, o in self.owner.items() if o == MAKER]

    def breaker_edges(self) -> list[tuple[int, int]]:
        return [e for e, o in self.owner.items() if o == BREAKER]

    def finished(self) -> bool:
        return len(self.owner) == len(self.board)

    def claim(self, side: str, edge) -> None:
        e = norm_edge(*edge)
        if side != self.to_move:
            raise ValueError(f"{side} claimed out of turn")
        if e not in self.board_set:
            raise ValueError(f"{e} is not on the board")
        if e in self.owner:
            raise ValueError(f"{e} already claimed by {self.owner[e]}")
        self.owner[e] = side
        del self.free[e]
        self.transcript.append({"turn": len(self.transcript), "side": side, "edge": [e[0], e[1]]})
        if side == BREAKER:
            self._breaker_left -= 1
            if self._breaker_left == 0 or len(self.owner) == len(self.board):
                self.to_move = MAKER
        else:
            self.to_move = BREAKER
            self._breaker_left = self.bias

    def copy(self) -> "GameState":
        other = GameState.__new__(GameState)
        other.board = self.board
        other.board_set = self.board_set
        other.bias = self.bias
        other.owner = dict(self.owner)
        other.free = dict(self.free)
        other.transcript = list(self.transcript)
        other.to_move = self.to_move
        other._breaker_left = self._breaker_left
        return other

    def transcript_json(self) -> str:
        return "\n".join(json.dumps(entry) for entry in self.transcript)

    @classmethod
    def replay(cls, edges, transcript_text: str, bias: int = 1) -> "GameState":
        state = cls(edges, bias=bias)
        for line in transcript_text.splitlines():
            line = line.strip()
            if not line:
                continue
            entry = json.loads(line)
            if entry["turn"] != len(state.transcript):
                raise ValueError(f"turn {entry['turn']} out of order")
            state.claim(entry["side"], tuple(entry["edge"]))
        return state


class PairingStrategy:
    """Respond inside pre-chosen disjoint edge pairs, else fall back.

    Whenever Breaker claims one member of a pair, Maker answers with the
    other (if it is still free).  Any other Breaker move gets the fallback:
    the first unclaimed edge in board order, claimed and forgotten.
    """

    def __init__(self, pairs, fallback=None):
        seen = set()
        self.partner: dict[tuple[int, int], tuple[int, int]] = {}
        for a, b in pairs:
            ea, eb = norm_edge(*a), norm_edge(*b)
            if ea in seen or eb in seen or ea == eb:
                raise ValueError("pairs must consist of distinct disjoint edges")
            seen.update((ea, eb))
            self.partner[ea] = eb
            self.partner[eb] = ea
        self.fallback = fallback

    def respond(self, state: GameState, breaker_edges) -> tuple[int, int]:
        for be in breaker_edges:
            mate = self.partner.get(norm_edge(*be))
            if mate is not None and mate not in state.owner:
                return mate
        if self.fallback is not None:
            return self.fallback(state)
        free = state.unclaimed()
        if not free:
            raise ValueError("no free edge to claim")
        return free[0]

    def clone(self) -> "PairingStrategy":
        other = PairingStrategy([])
        other.partner = dict(self.partner)
        other.fallback = self.fallback
        return other


def play_game(state: GameState, maker, breaker):
    """Run a game to completion: breaker picks bias edges, maker answers.

    `maker` needs respond(state, breaker_edges); `breaker` needs
    choose(state) returning one edge per call.
    """
    while not state.finished():
        batch = []
        while state.to_move == BREAKER and not state.finished():
            mv = breaker.choose(state)
            state.claim(BREAKER, mv)
            batch.append(norm_edge(*mv))
        if state.finished():
            break
        state.claim(MAKER, maker.respond(state, batch))
    return state


def exhaustive_verify(edges, strategy_factory, achieved, max_failures: int = 3):
    """Play every unbiased Breaker line against a Maker strategy.

    `strategy_factory()` builds a fresh strategy; `achieved(maker_edges)`
    judges the finished board.  Returns (lines, failures): the number of
    complete Breaker move sequences and up to max_failures losing
    transcripts.  Exponential in the board size; keep boards small.
    """
    board = [norm_edge(u, v) for u, v in edges]
    lines = 0
    failures: list[list] = []

    def rec(state: GameState, strat) -> None:
        nonlocal lines
        if state.finished():
            lines += 1
            if not achieved(state.maker_edges()):
                if len(failures) < max_failures:
                    failures.append(list(state.transcript))
            return
        for f in state.unclaimed():
            child = state.copy()
            cstrat = strat.clone()
            child.claim(BREAKER, f)
            if not child.finished():
                child.claim(MAKER, cstrat.respond(child, [f]))
            rec(child, cstrat)

    rec(GameState(board), strategy_factory())
    return lines, failures


# ---------------------------------------------------------------------------
# winning structures


def _mask_adj(k: int, edges) -> list[int]:
    adj = [0] * k
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


def _has_path_on(k: int, edges, target: int) -> bool:
    """Is there a simple path visiting `target` vertices?"""
    if target <= 1:
        return True
    adj = _mask_adj(k, edges)
    # dp: reachable (mask, last) pairs, grown from single vertices
    reach = [set() for _ in range(k)]
    frontier = [(1 << v, v) for v in range(k)]
    size = 1
    while frontier and size < target:
        nxt = []
        for mask, last in frontier:
            for w in range(k):
                if adj[last] >> w & 1 and not mask >> w & 1:
                    nm = mask | 1 << w
                    if nm not in reach[w]:
                        reach[w].add(nm)
                        nxt.append((nm, w))
        frontier = nxt
        size += 1
    return bool(frontier) and size == target


class PathWin:
    """Maker aims for a simple path on `target` vertices of the board."""

    def __init__(self, k: int, target: int):
        self.k = k
        self.target = target
        self.name = f"path{target}"

    def __call__(self, edges) -> bool:
        return _has_path_on(self.k, edges, self.target)


class ConnectivityWin:
    def __init__(self, k: int):
        self.k = k
        self.name = "connectivity"

    def __call__(self, edges) -> bool:
        if self.k <= 1:
            return True
        uf = UnionFind(self.k)
        parts = self.k
        for u, v in edges:
            if uf.union(u, v):
                parts -= 1
        return parts == 1


class SubgraphWin:
    """Maker aims to own a copy of a fixed pattern graph."""

    def __init__(self, k_board: int, k_pattern: int, pattern_edges):
        self.k = k_board
        self.kp = k_pattern
        self.pedges = [norm_edge(u, v) for u, v in pattern_edges]
        self.name = f"subgraph{self.kp}"

    def __call__(self, edges) -> bool:
        adj = graphs.adjacency(self.k, edges)
        verts = range(self.k)
        return graphs.contains_subgraph(adj, verts, self.kp, self.pedges) is not None


class HamiltonWin:
    def __init__(self, k: int):
        self.k = k
        self.name = "hamilton"

    def __call__(self, edges) -> bool:
        return has_hamilton_cycle(self.k, edges)


class PerfectMatchingWin:
    def __init__(self, k: int):
        self.k = k
        self.name = "perfect_matching"

    def __call__(self, edges) -> bool:
        return has_perfect_matching(self.k, edges)


def has_hamilton_cycle(n: int, edges) -> tuple | None:
    """Search for a Hamilton cycle; returns the cycle or None.  n <= 20."""
    if n > 20:
        raise ValueError("certificate-free Hamilton search is capped at 20 vertices")
    if n == 0:
        return None
    adj = graphs.adjacency(n, edges)
    if n == 1:
        return None
    if n == 2:
        return None
    if any(len(a) < 2 for a in adj):
        return None
    path = [0]
    used = [False] * n
    used[0] = True

    def extend() -> bool:
        if len(path) == n:
            return 0 in adj[path[-1]]
        here = path[-1]
        for w in sorted(adj[here]):
            if not used[w]:
                used[w] = True
                path.append(w)
                if extend():
                    return True
                path.pop()
                used[w] = False
        return False

    return tuple(path) if extend() else None


def has_perfect_matching(n: int, edges) -> list | None:
    """Search for a perfect matching; returns it or None.  n <= 24."""
    if n > 24:
        raise ValueError("matching search is capped at 24 vertices")
    if n % 2:
        return None
    adj = graphs.adjacency(n, edges)
    matched = [False] * n
    out = []

    def extend() -> bool:
        try:
            u = matched.index(False)
        except ValueError:
            return True
        matched[u] = True
        for w in sorted(adj[u]):
            if not matched[w]:
                matched[w] = True
                out.append((u, w))
                if extend():
                    return True
                out.pop()
                matched[w] = False
        matched[u] = False
        return False

    return list(out) if extend() else None


def verify_hamilton_cycle(n: int, maker_edges, cycle) -> bool:
    if n < 3 or len(cycle) != n or len(set(cycle)) != n:
        return False
    eset = {norm_edge(u, v) for u, v in maker_edges}
    return all(
        norm_edge(cycle[i], cycle[(i + 1) % n]) in eset for i in range(n)
    )


def verify_perfect_matching(n: int, maker_edges, matching) -> bool:
    eset = {norm_edge(u, v) for u, v in maker_edges}
    seen = set()
    for u, v in matching:
        if norm_edge(u, v) not in eset or u in seen or v in seen:
            return False
        seen.update((u, v))
    return len(seen) == n


# ---------------------------------------------------------------------------
# exact solver


class ExactSolver:
    """Full game-tree solve of a small board with a monotone win test.

    States are memoized on a canonical form: the lexicographic minimum,
    over all board automorphisms, of the (ownership, to-move) encoding.
    This assumes the win test is automorphism-invariant (true for the
    global win conditions and for pattern containment, not for win sets
    pinned to specific vertices: pass canonical=False for those).
    Win-test results are memoized per Maker edge mask.  Boards are capped
    at 7 vertices / 21 edges.
    """

    def __init__(self, k: int, edges, win, bias: int = 1, canonical: bool = True):
        self.k = k
        self.edges = sorted(norm_edge(u, v) for u, v in edges)
        if k > 7 or len(self.edges) > 21:
            raise ValueError("exact solver is for at most 7 vertices / 21 edges")
        self.win = win
        self.bias = bias
        self.E = len(self.edges)
        self.eidx = {e: i for i, e in enumerate(self.edges)}
        self.full = (1 << self.E) - 1
        self._win_memo: dict[int, bool] = {}
        self._memo: dict = {}
        self._powers = np.arange(self.E, dtype=np.int64)
        if canonical and k <= 6:
            self._perms = self._perm_matrix()
        else:
            self._perms = None

    def _perm_matrix(self) -> np.ndarray:
        eset = set(self.edges)
        rows = []
        for perm in itertools.permutations(range(self.k)):
            img = [norm_edge(perm[u], perm[v]) for u, v in self.edges]
            if all(e in eset for e in img):
                rows.append([self.eidx[e] for e in img])
        return np.array(rows, dtype=np.int64)

    def _test(self, mask: int) -> bool:
        hit = self._win_memo.get(mask)
        if hit is None:
            hit = self.win([self.edges[i] for i in range(self.E) if mask >> i & 1])
            self._win_memo[mask] = hit
        return hit

    def _key(self, maker: int, breaker: int, to_move: str, left: int):
        if self._perms is None:
            return (maker, breaker, to_move, left)
        vec = ((maker >> self._powers) & 1) + 2 * ((breaker >> self._powers) & 1)
        img = vec[self._perms]
        best = img[np.lexsort(img.T[::-1])][0]
        return (best.tobytes(), to_move, left)

    def _solve(self, maker: int, breaker: int, to_move: str, left: int) -> bool:
        if self._test(maker):
            return True
        unclaimed = self.full & ~maker & ~breaker
        if not self._test(maker | unclaimed):
            return False
        if not unclaimed:
            return False
        key = self._key(maker, breaker, to_move, left)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        moves = [i for i in range(self.E) if unclaimed >> i & 1]
        if to_move == MAKER:
            res = any(
                self._solve(maker | 1 << i, breaker, BREAKER, self.bias) for i in moves
            )
        else:
            nleft = left - 1
            nmove = MAKER if nleft == 0 else BREAKER
            nleft2 = self.bias if nleft == 0 else nleft
            res = all(
                self._solve(maker, breaker | 1 << i, nmove, nleft2) for i in moves
            )
        self._memo[key] = res
        return res

    def maker_wins(self, maker_edges=(), breaker_edges=(), to_move: str = BREAKER) -> bool:
        maker = 0
        for e in maker_edges:
            maker |= 1 << self.eidx[norm_edge(*e)]
        breaker = 0
        for e in breaker_edges:
            breaker |= 1 << self.eidx[norm_edge(*e)]
        return self._solve(maker, breaker, to_move, self.bias)

    def best_maker_move(self, maker_edges, breaker_edges):
        """A winning Maker move from this position, or any legal one."""
        maker = 0
        for e in maker_edges:
            maker |= 1 << self.eidx[norm_edge(*e)]
        breaker = 0
        for e in breaker_edges:
            breaker |= 1 << self.eidx[norm_edge(*e)]
        unclaimed = self.full & ~maker & ~breaker
        fallback = None
        for i in range(self.E):
            if not unclaimed >> i & 1:
                continue
            if fallback is None:
                fallback = self.edges[i]
            if self._solve(maker | 1 << i, breaker, BREAKER, self.bias):
                return self.edges[i]
        return fallback


def solve_exact(
    k: int, edges, win, bias: int = 1, canonical: bool = True, first: str = BREAKER
) -> bool:
    """Does Maker win the game on this board (Breaker moving first by
    default)?"""
    solver = ExactSolver(k, edges, win, bias=bias, canonical=canonical)
    return solver.maker_wins(to_move=first)


class ExactStrategy:
    """Maker strategy backed by the exact solver (for tiny boards)."""

    def __init__(self, k: int, edges, win, solver: ExactSolver | None = None):
        self.solver = solver if solver is not None else ExactSolver(k, edges, win)

    def respond(self, state: GameState, breaker_edges) -> tuple[int, int]:
        mine = [e for e in state.maker_edges() if e in self.solver.eidx]
        theirs = [e for e in state.breaker_edges() if e in self.solver.eidx]
        move = self.solver.best_maker_move(mine, theirs)
        if move is None:
            free = state.unclaimed()
            if not free:
                raise ValueError("no free edge to claim")
            return free[0]
        return move

    def clone(self) -> "ExactStrategy":
        return ExactStrategy(0, (), None, solver=self.solver)


# ---------------------------------------------------------------------------
# spanning tree packing


class _Forest:
    """One forest of the two-tree packing, with path queries."""

    def __init__(self, n: int):
        self.n = n
        self.adj: list[set[int]] = [set() for _ in range(n)]
        self.edges: set[tuple[int, int]] = set()
        self.uf = UnionFind(n)

    def can_insert(self, e) -> bool:
        return not self.uf.together(e[0], e[1])

    def insert(self, e) -> None:
        self.add_raw(e)
        self.uf.union(e[0], e[1])

    def add_raw(self, e) -> None:
        u, v = e
        self.adj[u].add(v)
        self.adj[v].add(u)
        self.edges.add(e)

    def remove_raw(self, e) -> None:
        u, v = e
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        self.edges.discard(e)

    def refresh(self) -> None:
        """Rebuild connectivity and assert the edge set is still a forest."""
        self.uf = UnionFind(self.n)
        for u, v in self.edges:
            if not self.uf.union(u, v):
                raise AssertionError("swap cascade produced a cycle")

    def path(self, a: int, b: int) -> list[tuple[int, int]]:
        """Edges of the tree path from a to b (empty if disconnected)."""
        prev: dict[int, int | None] = {a: None}
        q = deque([a])
        while q:
            x = q.popleft()
            if x == b:
                break
            for y in self.adj[x]:
                if y not in prev:
                    prev[y] = x
                    q.append(y)
        if b not in prev:
            return []
        out = []
        x = b
        while prev[x] is not None:
            out.append(norm_edge(x, prev[x]))
            x = prev[x]
        return out


class TwoTreePackingTracker:
    """Streaming two-tree packing: edges arrive one at a time and the
    packing stays maximum after every arrival.

    Each edge goes greedily into the first forest with room, otherwise a
    breadth-first labeling over fundamental cycles searches for a cascade
    of swaps that makes room.  A failed search labels a vertex set on
    which both forests are already spanning trees; such a set stays
    saturated no matter what arrives later, so edges inside it are
    rejected by a union-find lookup instead of a repeat search.
    """

    def __init__(self, n: int):
        self.n = n
        self.forests = (_Forest(n), _Forest(n))
        self.placed = 0
        self.target = 2 * (n - 1) if n >= 2 else 0
        self.seen: set = set()
        self.clumps = UnionFind(max(n, 1))

    def ok(self) -> bool:
        return self.placed >= self.target

    def add(self, u: int, v: int) -> None:
        if u == v:
            return
        e = norm_edge(u, v)
        if e in self.seen:
            return
        self.seen.add(e)
        if self.placed >= self.target or self.clumps.together(u, v):
            return
        f0, f1 = self.forests
        if f0.can_insert(e):
            f0.insert(e)
            self.placed += 1
        elif f1.can_insert(e):
            f1.insert(e)
            self.placed += 1
        else:
            explored: set = set()
            if _augment(self.forests, e, explored):
                self.placed += 1
            else:
                first = u
                for w in explored:
                    self.clumps.union(first, w)


def two_tree_packing(n: int, edges) -> tuple[list, list] | None:
    """Two edge-disjoint spanning trees of the graph, or None."""
    if n < 2:
        return ([], []) if n == 1 else None
    tracker = TwoTreePackingTracker(n)
    for u, v in edges:
        if tracker.ok():
            break
        tracker.add(u, v)
    if not tracker.ok():
        return None
    return sorted(tracker.forests[0].edges), sorted(tracker.forests[1].edges)


def _augment(forests, e0, explored: set | None = None) -> bool:
    """Breadth-first swap-cascade search to place e0; True if placed.

    States are (edge, forest it wants to enter).  An edge enters a forest
    either directly or by evicting an edge of its fundamental cycle there,
    which is then re-homed in the other forest.  Breadth-first order keeps
    the cascade consistent: all cycle relations refer to the forests as
    they stood before any swap.
    """
    pred: dict[tuple, tuple] = {}
    start = [(e0, 0), (e0, 1)]
    q = deque(start)
    seen = set(start)
    leaf = None
    while q:
        x, i = q.popleft()
        if forests[i].can_insert(x):
            leaf = (x, i)
            break
        for y in forests[i].path(x[0], x[1]):
            nxt = (y, 1 - i)
            if nxt not in seen:
                seen.add(nxt)
                pred[nxt] = (x, i)
                q.append(nxt)
    if leaf is None:
        if explored is not None:
            # both forests restricted to these vertices are spanning
            # trees of them, so the set is saturated for good
            for x, _ in seen:
                explored.add(x[0])
                explored.add(x[1])
        return False
    x, i = leaf
    forests[i].add_raw(x)
    cur = leaf
    while cur in pred:
        px, pi = pred[cur]
        # cur's edge sat on px's fundamental cycle in forest pi: evict it
        # from there and let px take its place
        forests[pi].remove_raw(cur[0])
        forests[pi].add_raw(px)
        cur = (px, pi)
    forests[0].refresh()
    forests[1].refresh()
    return True


def verify_two_trees(n: int, edges, t1, t2) -> bool:
    eset = {norm_edge(u, v) for u, v in edges}
    s1 = {norm_edge(u, v) for u, v in t1}
    s2 = {norm_edge(u, v) for u, v in t2}
    if s1 & s2 or not (s1 <= eset and s2 <= eset):
        return False
    return graphs.is_spanning_tree(n, s1) and graphs.is_spanning_tree(n, s2)


class LehmanMakerStrategy:
    """Connectivity-game Maker for a board with two disjoint spanning trees.

    Two spanning trees of the progressively contracted board are kept; when
    Breaker takes a tree edge, its cut is repaired with an edge of the other
    tree, which Maker claims and contracts.  Breaker moves elsewhere let
    Maker claim any edge of the first tree.  Each Maker claim contracts one
    vertex pair, so n-1 claims connect the board.
    """

    def __init__(self, n: int, edges, packing=None):
        if packing is None:
            packing = two_tree_packing(n, edges)
        if packing is None:
            raise ValueError("board has no two-tree packing")
        self.n = n
        self.t = [set(packing[0]), set(packing[1])]
        self.uf = UnionFind(n)
        self.debug_checks = False

    def clone(self) -> "LehmanMakerStrategy":
        other = LehmanMakerStrategy.__new__(LehmanMakerStrategy)
        other.n = self.n
        other.t = [set(self.t[0]), set(self.t[1])]
        other.uf = UnionFind(self.n)
        other.uf.parent = list(self.uf.parent)
        other.uf.size = list(self.uf.size)
        other.debug_checks = self.debug_checks
        return other

    def _contracted_adj(self, tree_edges):
        adj: dict[int, set] = {}
        for u, v in tree_edges:
            ru, rv = self.uf.find(u), self.uf.find(v)
            adj.setdefault(ru, set()).add(rv)
            adj.setdefault(rv, set()).add(ru)
        return adj

    def _contract(self, e) -> None:
        self.uf.union(e[0], e[1])

    def _tree_path(self, tree_idx: int, a: int, b: int) -> list:
        """Edges of the contracted-tree path from root a to root b."""
        adj: dict[int, list] = {}
        for u, v in self.t[tree_idx]:
            ru, rv = self.uf.find(u), self.uf.find(v)
            adj.setdefault(ru, []).append((rv, (u, v)))
            adj.setdefault(rv, []).append((ru, (u, v)))
        prev = {a: None}
        q = deque([a])
        while q:
            x = q.popleft()
            if x == b:
                break
            for y, via in adj.get(x, ()):
                if y not in prev:
                    prev[y] = (x, via)
                    q.append(y)
        out = []
        x = b
        while prev.get(x) is not None:
            px, via = prev[x]
            out.append(via)
            x = px
        return out

    def respond(self, state: GameState, breaker_edges) -> tuple[int, int]:
        if len(breaker_edges) != 1:
            raise ValueError("the connectivity strategy plays the unbiased game")
        e = norm_edge(*breaker_edges[0])
        for i in (0, 1):
            if e in self.t[i]:
                return self._repair(state, i, e)
        return self._free_move(state)

    def _repair(self, state: GameState, i: int, e) -> tuple[int, int]:
        self.t[i].discard(e)
        # side of the cut left by e, in contracted vertex space
        adj = self._contracted_adj(self.t[i])
        a = self.uf.find(e[0])
        side = {a}
        q = deque([a])
        while q:
            x = q.popleft()
            for y in adj.get(x, ()):
                if y not in side:
                    side.add(y)
                    q.append(y)
        other = 1 - i
        for f in self.t[other]:
            ru, rv = self.uf.find(f[0]), self.uf.find(f[1])
            if (ru in side) != (rv in side):
                self.t[other].discard(f)
                self._contract(f)
                if self.debug_checks:
                    self._check()
                return f
        raise AssertionError("no repair edge crossed the cut; packing corrupted")

    def _free_move(self, state: GameState) -> tuple[int, int]:
        for i in (0, 1):
            if self.t[i]:
                g = min(self.t[i])
                self.t[i].discard(g)
                # contracting g closes a cycle in the other tree; open it
                other = 1 - i
                ra, rb = self.uf.find(g[0]), self.uf.find(g[1])
                if ra != rb:
                    path = self._tree_path(other, ra, rb)
                    self._contract(g)
                    if path:
                        self.t[other].discard(norm_edge(*path[0]))
                if self.debug_checks:
                    self._check()
                return g
        free = state.unclaimed()
        if not free:
            raise ValueError("no free edge to claim")
        return free[0]

    def _check(self) -> None:
        """Verify both trees still span the contracted board (debug)."""
        roots = {self.uf.find(v) for v in range(self.n)}
        for i in (0, 1):
            adj = self._contracted_adj(self.t[i])
            if len(roots) == 1:
                if self.t[i]:
                    raise AssertionError("leftover tree edges after full contraction")
                continue
            if len(self.t[i]) != len(roots) - 1:
                raise AssertionError("tree has wrong size")
            start = next(iter(roots))
            seen = {start}
            q = deque([start])
            while q:
                x = q.popleft()
                for y in adj.get(x, ()):
                    if y not in seen:
                        seen.add(y)
                        q.append(y)
            if seen != roots:
                raise AssertionError("tree does not span the contraction")


class NaiveMakerStrategy:
    """Claims the first unclaimed edge; the baseline the adversaries beat."""

    def respond(self, state: GameState, breaker_edges) -> tuple[int, int]:
        free = state.unclaimed()
        if not free:
            raise ValueError("no free edge to claim")
        return free[0]

    def clone(self) -> "NaiveMakerStrategy":
        return NaiveMakerStrategy()


# ---------------------------------------------------------------------------
# the H-game threshold


@dataclass
class FamilyMember:
    edges: tuple
    maker_win: bool
    realizable: bool | None


@dataclass
class KHResult:
    k: int
    family: list[FamilyMember]

    def winning(self) -> list[FamilyMember]:
        return [m for m in self.family if m.maker_win]

    def realizable_winning(self) -> list[FamilyMember]:
        return [m for m in self.family if m.maker_win and m.realizable]


def _complete_edges(k: int):
    return list(itertools.combinations(range(k), 2))


def compute_kH(k_pattern: int, pattern_edges, max_k: int = 6, tag_realizable: bool = True) -> KHResult:
    """Least board size k on which Maker wins the H-game, plus the family
    of all k-vertex boards (up to isomorphism) that are Maker wins.

    Raises if the threshold exceeds max_k (capped at 6: the enumeration of
    boards and the exact solve both explode beyond that).
    """
    if max_k > 6:
        raise ValueError("board enumeration is capped at 6 vertices")
    pedges = [norm_edge(u, v) for u, v in pattern_edges]
    k_found = None
    for k in range(max(2, k_pattern), max_k + 1):
        win = SubgraphWin(k, k_pattern, pedges)
        if solve_exact(k, _complete_edges(k), win):
            k_found = k
            break
    if k_found is None:
        raise ValueError(f"Maker does not win the H-game on any board up to K_{max_k}")

    family = []
    seen = set()
    pairs = _complete_edges(k_found)
    for mask in range(1 << len(pairs)):
        edges = tuple(pairs[i] for i in range(len(pairs)) if mask >> i & 1)
        canon = graphs.canonical_form(k_found, edges)
        if canon in seen:
            continue
        seen.add(canon)
        win = SubgraphWin(k_found, k_pattern, pedges)
        maker_win = solve_exact(k_found, edges, win) if edges else False
        realizable = None
        if tag_realizable and maker_win:
            realizable = unit_disk_realizable(k_found, edges)
        family.append(FamilyMember(edges=edges, maker_win=maker_win, realizable=realizable))
    return KHResult(k=k_found, family=family)


def unit_disk_realizable(k: int, edges, attempts: int = 400, seed: int = 7) -> bool | None:
    """Search for a unit-disk embedding of the graph: edges at distance
    <= 1, non-edges farther.  True on success, None when the search gives
    up (undecided); never a definite False."""
    eset = {norm_edge(u, v) for u, v in edges}
    non = [p for p in _complete_edges(k) if p not in eset]
    rng = np.random.default_rng(seed)

    def energy(pts):
        bad = 0.0
        for u, v in eset:
            d = math.dist(pts[u], pts[v])
            bad += max(0.0, d - 0.98) ** 2
        for u, v in non:
            d = math.dist(pts[u], pts[v])
            bad += max(0.0, 1.02 - d) ** 2
        return bad

    def exact_ok(pts) -> bool:
        for u, v in eset:
            if math.dist(pts[u], pts[v]) > 1:
                return False
        for u, v in non:
            if math.dist(pts[u], pts[v]) <= 1:
                return False
        return True

    for _ in range(attempts):
        pts = rng.uniform(0, 1.8, size=(k, 2))
        e = energy(pts)
        step = 0.3
        for _ in range(300):
            if e == 0.0 and exact_ok(pts):
                return True
            cand = pts + rng.normal(0, step, size=pts.shape)
            ce = energy(cand)
            if ce < e:
                pts, e = cand, ce
            else:
                step *= 0.97
        if exact_ok(pts):
            return True
    return None
