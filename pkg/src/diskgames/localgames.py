"""Local game strategies.

Three families of small Maker goals keep coming up when the grand
strategies stitch a spanning structure together:

* a path through all but one vertex of a clique,
* a path or matching on a board made of a clique A plus a stable set B
  with all A-A and A-B edges, where the goal must cover A with one
  B-to-B path (or two disjoint ones), or with a matching saturating A,
* a blob cycle: a Hamilton cycle of a dense vertex group carrying a
  clique on consecutive vertices.

Each strategy here answers one Breaker edge with one Maker edge; goals
are verified after the fact from Maker's final edge set, so a strategy
only has to claim well, never to prove anything mid-game.
"""

from __future__ import annotations

import itertools

from diskgames import games
from diskgames.blobs import BlobCycle
from diskgames.games import (
    BREAKER,
    MAKER,
    ExactSolver,
    GameState,
    PathWin,
    norm_edge,
)


class CliquePathStrategy:
    """Maker path on all but one vertex of a clique board.

    Peels one vertex u per level: a Breaker edge at u is answered with
    another free edge at u (u keeps at least half its edges), anything
    deeper is delegated to the next level, and the last four (or three)
    vertices are played by the exact solver.  Extra Maker edges acquired
    through fallbacks only help, so levels read the true board state
    directly instead of tracking a pretend sub-game.
    """

    def __init__(self, verts):
        self.verts = list(verts)
        s = len(self.verts)
        if s < 3:
            raise ValueError("the path game needs at least 3 vertices")
        base = self.verts[-4:] if s >= 4 else self.verts
        t = len(base)
        self.base_verts = base
        self.base_index = {v: i for i, v in enumerate(base)}
        self.base_solver = ExactSolver(
            t, itertools.combinations(range(t), 2), PathWin(t, t - 1)
        )

    def clone(self) -> "CliquePathStrategy":
        other = CliquePathStrategy.__new__(CliquePathStrategy)
        other.verts = self.verts
        other.base_verts = self.base_verts
        other.base_index = self.base_index
        other.base_solver = self.base_solver
        return other

    def respond(self, state: GameState, breaker_edges):
        if len(breaker_edges) != 1:
            raise ValueError("the path game is unbiased")
        mv = self._feed(0, norm_edge(*breaker_edges[0]), state)
        return mv if mv is not None else self._arbitrary(state)

    def _feed(self, lvl: int, e, state: GameState):
        sub = self.verts[lvl:]
        if len(sub) <= 4:
            return self._base_move(state)
        u = sub[0]
        if u in e:
            for w in sub[1:]:
                f = norm_edge(u, w)
                if f in state.board_set and f not in state.owner:
                    return f
            return None
        if e[0] in sub and e[1] in sub:
            return self._feed(lvl + 1, e, state)
        return None

    def _base_move(self, state: GameState):
        mine, theirs = [], []
        for (a, b), o in state.owner.items():
            ia, ib = self.base_index.get(a), self.base_index.get(b)
            if ia is None or ib is None:
                continue
            (mine if o == MAKER else theirs).append((ia, ib))
        mv = self.base_solver.best_maker_move(mine, theirs)
        if mv is None:
            return None
        f = norm_edge(self.base_verts[mv[0]], self.base_verts[mv[1]])
        return f if f in state.board_set and f not in state.owner else None

    def _arbitrary(self, state: GameState):
        vset = set(self.verts)
        for a, b in itertools.combinations(sorted(vset), 2):
            f = norm_edge(a, b)
            if f in state.board_set and f not in state.owner:
                return f
        free = state.unclaimed()
        if not free:
            raise ValueError("no free edge to claim")
        return free[0]


def clique_path_achieved(maker_edges, verts) -> bool:
    """Does the Maker graph contain a path on len(verts)-1 of verts?"""
    idx = {v: i for i, v in enumerate(verts)}
    edges = [
        (idx[a], idx[b])
        for a, b in maker_edges
        if a in idx and b in idx
    ]
    return games._has_path_on(len(verts), edges, len(verts) - 1)


# ---------------------------------------------------------------------------
# the clique-plus-stable-set boards


def _ab_board(A, B):
    edges = [norm_edge(x, y) for x, y in itertools.combinations(A, 2)]
    edges += [norm_edge(x, y) for x in A for y in B]
    return edges


def ab_board_edges(A, B) -> list:
    """All edges of the board: a clique on A plus every A-B edge."""
    return _ab_board(list(A), list(B))


class _PairTable:
    """Pairing bookkeeping shared by the small case machines."""

    def __init__(self):
        self.partner = {}

    def add(self, e1, e2) -> None:
        e1, e2 = norm_edge(*e1), norm_edge(*e2)
        self.partner[e1] = e2
        self.partner[e2] = e1

    def answer(self, state: GameState, e):
        mate = self.partner.get(norm_edge(*e))
        if mate is not None and mate in state.board_set and mate not in state.owner:
            return mate
        return None


class ABPathStrategy:
    """Maker claims toward one B-to-B path covering A, or two disjoint
    such paths jointly covering A, on the clique-plus-stable-set board.

    Winning shapes: a>=4 with b>=6 (clique-path play on A plus a cross
    response rule), a=3 with b>=5 (a fixed pairing), a=2 with b>=4 and
    a=1 with b>=4 (small case machines keyed to Breaker's opening).
    """

    def __init__(self, A, B):
        self.A = list(A)
        self.B = list(B)
        a, b = len(self.A), len(self.B)
        self.pairs = _PairTable()
        self.inner = None
        self.stage = 0
        if a >= 4 and b >= 6:
            self.mode = "clique"
            self.inner = CliquePathStrategy(self.A)
        elif a == 3 and b >= 5:
            self.mode = "pairing3"
            a1, a2, a3 = self.A
            b1, b2, b3, b4, b5 = self.B[:5]
            for ai in (a1, a2, a3):
                self.pairs.add((ai, b1), (ai, b2))
                self.pairs.add((ai, b3), (ai, b4))
            self.pairs.add((a1, b5), (a2, b5))
            self.pairs.add((a1, a2), (a1, a3))
            self.pairs.add((a2, a3), (a3, b5))
        elif a == 2 and b >= 4:
            self.mode = "two"
        elif a == 1 and b >= 4:
            self.mode = "one"
        else:
            raise ValueError(f"no winning line for |A|={a}, |B|={b}")

    def clone(self) -> "ABPathStrategy":
        other = ABPathStrategy.__new__(ABPathStrategy)
        # the case machines stash ad-hoc scalars (e.g. _two's b1), so copy
        # the whole dict and re-own the mutable parts
        other.__dict__.update(self.__dict__)
        other.pairs = _PairTable()
        other.pairs.partner = dict(self.pairs.partner)
        other.inner = self.inner.clone() if self.inner is not None else None
        return other

    def respond(self, state: GameState, breaker_edges):
        if len(breaker_edges) != 1:
            raise ValueError("this game is unbiased")
        e = norm_edge(*breaker_edges[0])
        mv = self.pairs.answer(state, e)
        if mv is None:
            mv = getattr(self, f"_{self.mode}")(state, e)
        if mv is None or mv in state.owner or mv not in state.board_set:
            mv = self._fallback(state)
        return mv

    def _free(self, state, x, y):
        f = norm_edge(x, y)
        if f in state.board_set and f not in state.owner:
            return f
        return None

    def _maker_has(self, state, x, y) -> bool:
        return state.owner.get(norm_edge(x, y)) == MAKER

    def _clique(self, state, e):
        aset = set(self.A)
        if e[0] in aset and e[1] in aset:
            return self.inner.respond(state, [e])
        u = e[0] if e[0] in aset else (e[1] if e[1] in aset else None)
        if u is not None:
            for y in self.B:
                mv = self._free(state, u, y)
                if mv:
                    return mv
        return None

    def _one(self, state, e):
        a1 = self.A[0]
        have = sum(1 for y in self.B if self._maker_has(state, a1, y))
        if have < 2:
            for y in self.B:
                mv = self._free(state, a1, y)
                if mv:
                    return mv
        return None

    def _two(self, state, e):
        a1, a2 = self.A
        if self.stage == 0:
            self.stage = 1
            if e != norm_edge(a1, a2):
                # Breaker opened on a cross edge: grab the A-A edge, then
                # guarantee each a_i one endpoint of its own.  The opened
                # edge blocks one B vertex for one side only.
                hit = a1 if a1 in e else a2
                other = a2 if hit == a1 else a1
                blocked = e[0] if e[1] == hit else e[1]
                fresh = [y for y in self.B if y != blocked]
                self.pairs.add((hit, fresh[1]), (hit, fresh[2]))
                self.pairs.add((other, blocked), (other, fresh[0]))
                return self._free(state, a1, a2)
            # Breaker opened on the A-A edge: supply a1, then case on
            # Breaker's next move (every board edge touches A here)
            self.b1 = self.B[0]
            self.stage = 2
            return self._free(state, a1, self.b1)
        if self.stage == 2:
            self.stage = 3
            b1 = self.b1
            rest = [y for y in self.B if y != b1]
            if a1 in e:
                # Breaker hit a1's supply line: mirror his B vertex to a2
                bi = e[0] if e[1] == a1 else e[1]
                fresh = [y for y in rest if y != bi][:2]
                self.pairs.add((a1, fresh[0]), (a1, fresh[1]))
                self.pairs.add((a2, fresh[0]), (a2, fresh[1]))
                return self._free(state, a2, bi)
            bi = e[0] if e[1] == a2 else e[1]
            if bi == b1:
                # Breaker shadowed a1's endpoint at a2: give a2 a fresh one
                self.pairs.add((a1, rest[1]), (a1, rest[2]))
                self.pairs.add((a2, rest[1]), (a2, rest[2]))
                return self._free(state, a2, rest[0])
            # Breaker hit a2 on a fresh vertex: take a2 a third one and
            # keep both a1's spare and the shadow routes alive
            fresh = [y for y in rest if y != bi]
            mv = self._free(state, a2, fresh[0])
            self.pairs.add((a1, bi), (a1, fresh[1]))
            self.pairs.add((a2, b1), (a2, fresh[1]))
            return mv
        return None

    def _fallback(self, state: GameState):
        for x in self.A:
            for y in self.B:
                mv = self._free(state, x, y)
                if mv:
                    return mv
        for x, y in itertools.combinations(self.A, 2):
            mv = self._free(state, x, y)
            if mv:
                return mv
        free = state.unclaimed()
        if not free:
            raise ValueError("no free edge to claim")
        return free[0]


class ABMatchingStrategy:
    """Maker claims toward a matching saturating A on the same board.

    Winning shapes: b>=4 with any a>=4 (clique-path play on A plus the
    cross response), a=3 with b>=3 (same), a=2 with b>=3 and a=1 with
    b>=2 (small case machines).
    """

    def __init__(self, A, B):
        self.A = list(A)
        self.B = list(B)
        a, b = len(self.A), len(self.B)
        self.pairs = _PairTable()
        self.inner = None
        self.stage = 0
        if a >= 4 and b >= 4:
            self.mode = "clique"
            self.inner = CliquePathStrategy(self.A)
        elif a == 3 and b >= 3:
            self.mode = "clique"
            self.inner = CliquePathStrategy(self.A)
        elif a == 2 and b >= 3:
            self.mode = "two"
        elif a == 1 and b >= 2:
            self.mode = "one"
            self.pairs.add((self.A[0], self.B[0]), (self.A[0], self.B[1]))
        else:
            raise ValueError(f"no winning line for |A|={a}, |B|={b}")

    def clone(self) -> "ABMatchingStrategy":
        other = ABMatchingStrategy.__new__(ABMatchingStrategy)
        other.A, other.B, other.mode = self.A, self.B, self.mode
        other.stage = self.stage
        other.pairs = _PairTable()
        other.pairs.partner = dict(self.pairs.partner)
        other.inner = self.inner.clone() if self.inner is not None else None
        return other

    def respond(self, state: GameState, breaker_edges):
        if len(breaker_edges) != 1:
            raise ValueError("this game is unbiased")
        e = norm_edge(*breaker_edges[0])
        mv = self.pairs.answer(state, e)
        if mv is None:
            mv = getattr(self, f"_{self.mode}")(state, e)
        if mv is None or mv in state.owner or mv not in state.board_set:
            mv = self._fallback(state)
        return mv

    def _free(self, state, x, y):
        f = norm_edge(x, y)
        if f in state.board_set and f not in state.owner:
            return f
        return None

    def _clique(self, state, e):
        aset = set(self.A)
        if e[0] in aset and e[1] in aset:
            return self.inner.respond(state, [e])
        u = e[0] if e[0] in aset else (e[1] if e[1] in aset else None)
        if u is not None:
            for y in self.B:
                mv = self._free(state, u, y)
                if mv:
                    return mv
        return None

    def _one(self, state, e):
        return None  # the pairing covers everything

    def _two(self, state, e):
        a1, a2 = self.A
        if self.stage == 0:
            self.stage = 1
            if e != norm_edge(a1, a2):
                return self._free(state, a1, a2)
            b1, b2, b3 = self.B[:3]
            self.pairs.add((a2, b2), (a2, b3))
            return self._free(state, a1, b1)
        return None

    def _fallback(self, state: GameState):
        for x in self.A:
            for y in self.B:
                mv = self._free(state, x, y)
                if mv:
                    return mv
        for x, y in itertools.combinations(self.A, 2):
            mv = self._free(state, x, y)
            if mv:
                return mv
        free = state.unclaimed()
        if not free:
            raise ValueError("no free edge to claim")
        return free[0]


# ---------------------------------------------------------------------------
# goal verification for the clique-plus-stable-set games


def _connector_assign(adj, chains, B):
    """Assign distinct B vertices to the open slots of the given chains.

    Each chain is a list of A vertices in path order; its slots are the
    two endpoints plus every consecutive pair lacking a direct Maker
    edge.  Backtracking over B choices; returns slot fills or None.
    """
    slots = []
    for ci, chain in enumerate(chains):
        slots.append(("end", chain[0]))
        for x, y in zip(chain, chain[1:]):
            if y not in adj.get(x, ()):
                slots.append(("gap", x, y))
        slots.append(("end", chain[-1]))

    used: set = set()
    fill: list = [None] * len(slots)

    def ok(slot, b):
        if slot[0] == "end":
            return slot[1] in adj.get(b, ())
        return slot[1] in adj.get(b, ()) and slot[2] in adj.get(b, ())

    def rec(i: int) -> bool:
        if i == len(slots):
            return True
        for b in B:
            if b in used or not ok(slots[i], b):
                continue
            used.add(b)
            fill[i] = b
            if rec(i + 1):
                return True
            used.discard(b)
        return False

    return fill if rec(0) else None


def _expand_chain(chain, fills, adj):
    out = [fills.pop(0)]
    for i, x in enumerate(chain):
        out.append(x)
        if i + 1 < len(chain) and chain[i + 1] not in adj.get(x, ()):
            out.append(fills.pop(0))
    out.append(fills.pop(0))
    return out


def verify_ab_path(maker_edges, A, B):
    """Find one B-to-B Maker path covering A, or two vertex-disjoint such
    paths jointly covering A.  Returns the path (or path pair) as vertex
    lists, or None.

    B is stable on this board, so any path alternates out of B; covering
    paths are an A ordering with distinct B vertices at the two ends and
    in every gap where consecutive A's lack a direct Maker edge.
    """
    A = list(A)
    if len(A) > 7:
        raise ValueError("verification is exponential; capped at |A| = 7")
    adj: dict = {}
    aset, bset = set(A), set(B)
    for u, v in maker_edges:
        if u in aset and v in aset or u in aset and v in bset or u in bset and v in aset:
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)

    def canon_orders(vs):
        seen = set()
        for perm in itertools.permutations(vs):
            if perm[::-1] in seen:
                continue
            seen.add(perm)
            yield list(perm)

    for order in canon_orders(A):
        fills = _connector_assign(adj, [order], B)
        if fills is not None:
            return [_expand_chain(order, list(fills), adj)]
    if len(A) >= 2:
        averts = set(A)
        for r in range(1, len(A) // 2 + 1):
            for part in itertools.combinations(A, r):
                rest = [x for x in A if x not in part]
                for o1 in canon_orders(part):
                    for o2 in canon_orders(rest):
                        fills = _connector_assign(adj, [o1, o2], B)
                        if fills is not None:
                            fl = list(fills)
                            p1 = _expand_chain(o1, fl, adj)
                            p2 = _expand_chain(o2, fl, adj)
                            return [p1, p2]
    return None


def verify_ab_matching(maker_edges, A, B):
    """Find a Maker matching saturating A; returns it or None."""
    adj: dict = {}
    aset = set(A)
    allowed = aset | set(B)
    for u, v in maker_edges:
        if u in allowed and v in allowed:
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
    A = list(A)
    used: set = set()
    out: list = []

    def rec(i: int) -> bool:
        if i == len(A):
            return True
        x = A[i]
        if x in used:
            return rec(i + 1)
        for y in sorted(adj.get(x, ()), key=str):
            if y in used or y == x:
                continue
            used.update((x, y))
            out.append((x, y))
            if rec(i + 1):
                return True
            out.pop()
            used.difference_update((x, y))
        return False

    used_ok = rec(0)
    return out if used_ok else None


# ---------------------------------------------------------------------------
# the blob-cycle builder


MIN_BOARD = {3: 12, 4: 40}


def min_board_size(k: int) -> int:
    """Board size at which the builder reliably makes a k-blob Hamilton
    cycle against the stock adversaries (measured, not proven)."""
    if k in MIN_BOARD:
        return MIN_BOARD[k]
    return 10 * k * k


class BlobBuilderStrategy:
    """Two-phase Maker heuristic for a k-blob Hamilton cycle on a vertex
    group whose board edges form a clique.

    Phase 1 grows a Maker clique of size k, abandoning candidates as
    soon as Breaker touches their link to the core.  Phase 2 maintains a
    Maker path with the clique as a contiguous block, extending at the
    ends, rotating (never through the block) when stuck, and finally
    closing the cycle.  `result()` returns the finished BlobCycle, or
    None while unfinished; verification against Maker's edges stays with
    the caller.
    """

    def __init__(self, verts, k: int):
        self.verts = list(verts)
        self.k = k
        if k < 2 or k > len(self.verts):
            raise ValueError("blob size out of range")
        self.core: list = []
        self.target = None
        self.path: list | None = None
        self.done: BlobCycle | None = None

    def clone(self) -> "BlobBuilderStrategy":
        other = BlobBuilderStrategy(self.verts, self.k)
        other.core = list(self.core)
        other.target = self.target
        other.path = list(self.path) if self.path is not None else None
        other.done = self.done
        return other

    def result(self) -> BlobCycle | None:
        return self.done

    # -- shared helpers

    def _owner(self, state, x, y):
        return state.owner.get(norm_edge(x, y))

    def _free(self, state, x, y):
        f = norm_edge(x, y)
        if f in state.board_set and f not in state.owner:
            return f
        return None

    def _maker(self, state, x, y) -> bool:
        return self._owner(state, x, y) == MAKER

    def respond(self, state: GameState, breaker_edges):
        if self.done is None:
            if self.path is None:
                # guard off-core vertices even while the clique grows; a
                # focused attack can kill one before the path wants it
                exposed = [v for v in self.verts if v not in set(self.core)]
                mv = self._defend(state, exposed)
                if mv is None:
                    mv = self._phase1(state)
            else:
                mv = self._phase2(state, 0)
        else:
            mv = None
        if mv is None:
            mv = self._arbitrary(state)
        return mv

    # -- phase 1: grow the clique

    def _core_clean(self, state, x) -> bool:
        return all(self._owner(state, x, c) != BREAKER for c in self.core)

    def _phase1(self, state: GameState):
        if not self.core:
            self.core = [self.verts[0]]
        while len(self.core) < self.k:
            if self.target is not None and (
                self.target in self.core or not self._core_clean(state, self.target)
            ):
                self.target = None
            if self.target is None:
                best = None
                for x in self.verts:
                    if x in self.core or not self._core_clean(state, x):
                        continue
                    have = sum(1 for c in self.core if self._maker(state, x, c))
                    if best is None or have > best[0]:
                        best = (have, x)
                if best is None:
                    self._rebuild_core(state)
                    if len(self.core) >= self.k:
                        break
                    return self._phase1_stuck(state)
                self.target = best[1]
            missing = [
                c for c in self.core if not self._maker(state, self.target, c)
            ]
            if not missing:
                self.core.append(self.target)
                self.target = None
                continue
            mv = self._free(state, self.target, missing[0])
            if mv is not None:
                return mv
            self.target = None  # a needed edge vanished; repick
        # core complete: switch to phase 2
        self.path = list(self.core)
        return self._phase2(state, 0)

    def _rebuild_core(self, state: GameState):
        """Greedy largest Maker clique, used when all candidates are dead."""
        best = [self.verts[0]]
        for seed in self.verts:
            cl = [seed]
            for x in self.verts:
                if x in cl:
                    continue
                if all(self._maker(state, x, c) for c in cl):
                    cl.append(x)
            if len(cl) > len(best):
                best = cl
        self.core = best[: self.k]
        self.target = None

    def _phase1_stuck(self, state: GameState):
        # no clean candidate: claim any free edge between core-adjacent
        # outsiders to keep options open
        for x in self.verts:
            if x in self.core:
                continue
            for c in self.core:
                mv = self._free(state, x, c)
                if mv is not None:
                    return mv
        return None

    # -- phase 2: path maintenance

    def _core_span(self) -> tuple[int, int] | None:
        pos = [i for i, v in enumerate(self.path) if v in set(self.core)]
        if not pos:
            return None
        return min(pos), max(pos)

    DEFEND_AT = 8
    DEFEND_DEG = 4

    def _phase2(self, state: GameState, depth: int):
        if depth > 2 * len(self.verts) + 4:
            return None
        path = self.path
        unvisited = [v for v in self.verts if v not in set(path)]
        if not unvisited:
            return self._close(state)
        mv = self._defend(state, unvisited)
        if mv is not None:
            return mv
        # try to extend at either end
        for endside in (len(path) - 1, 0):
            e = path[endside]
            best = None
            for x in unvisited:
                if self._free(state, e, x) is None and not self._maker(state, e, x):
                    continue
                # most-threatened first: a vertex short on open links dies
                # if we defer it, a rich one keeps
                score = sum(
                    1
                    for y in self.verts
                    if y != x and self._owner(state, x, y) is None
                )
                if best is None or score < best[0]:
                    best = (score, x)
            if best is not None:
                x = best[1]
                attach = self._free(state, e, x)
                self.path = path + [x] if endside else [x] + path
                if attach is not None:
                    return attach
                # edge was already Maker's: keep going, no claim spent
                return self._phase2(state, depth + 1)
        # stuck: search the rotation space for a shape that can reach
        # an unvisited vertex from one of its ends
        shapes = []
        uv = set(unvisited)
        for shape in self._shapes(state):
            shapes.append(shape)
            for oriented in (shape, shape[::-1]):
                e = oriented[-1]
                if any(
                    self._maker(state, e, x) or self._free(state, e, x) is not None
                    for x in uv
                ):
                    self.path = list(oriented)
                    return self._phase2(state, depth + 1)
        mv = self._free_chord(state, shapes)
        if mv is not None:
            return mv
        # defensive fallback: reinforce an unvisited vertex, path partners
        # first so the link stays spliceable
        for x in unvisited:
            for y in itertools.chain(path, unvisited):
                if y != x:
                    mv = self._free(state, x, y)
                    if mv is not None:
                        return mv
        return None

    def _defend(self, state: GameState, unvisited):
        """Shore up a vertex the opponent is starving of group links.

        Without this a focused attack kills one vertex long before the
        path wants it; matching those claims keeps every vertex
        attachable.
        """
        worst = None
        for x in unvisited:
            mk = 0
            bk = 0
            opens = []
            for y in self.verts:
                if y == x:
                    continue
                own = self._owner(state, x, y)
                if own == MAKER:
                    mk += 1
                elif own == BREAKER:
                    bk += 1
                elif self._free(state, x, y) is not None:
                    opens.append(y)
            if mk >= self.DEFEND_DEG or not opens or mk + len(opens) > self.DEFEND_AT:
                continue
            # only a lopsided count marks a focused attack; ordinary
            # attrition is handled by path extension itself
            if bk < 2 * (mk + len(opens)):
                continue
            key = (mk + len(opens), mk, x)
            if worst is None or key < worst[0]:
                worst = (key, x, opens)
        if worst is None:
            return None
        _, x, opens = worst
        core = set(self.core)
        # favour links outside the clique block: a vertex whose only
        # links are core-internal can never sit on the cycle without
        # splitting the block
        opens.sort(key=lambda y: (y in core, y))
        return self._free(state, x, opens[0])

    def _shapes(self, state: GameState, cap: int = 400):
        """Yield path shapes reachable through Maker-owned chord rotations."""
        start = tuple(self.path)
        seen = {start, start[::-1]}
        order = [start]
        qi = 0
        yield start
        while qi < len(order) and len(order) < cap:
            shape = order[qi]
            qi += 1
            for flip in (False, True):
                cur = shape[::-1] if flip else shape
                e = cur[-1]
                for i in range(len(cur) - 2):
                    if not self._maker(state, e, cur[i]):
                        continue
                    cand = cur[: i + 1] + tuple(reversed(cur[i + 1 :]))
                    if cand in seen or cand[::-1] in seen:
                        continue
                    if not self._contiguous(cand):
                        continue
                    seen.add(cand)
                    order.append(cand)
                    yield cand
                    if len(order) >= cap:
                        return

    def _free_chord(self, state: GameState, shapes):
        """Spend the turn claiming a chord that opens a new shape."""
        for shape in shapes:
            for flip in (False, True):
                cur = shape[::-1] if flip else shape
                e = cur[-1]
                for i in range(len(cur) - 2):
                    mv = self._free(state, e, cur[i])
                    if mv is None:
                        continue
                    cand = list(cur[: i + 1]) + list(reversed(cur[i + 1 :]))
                    if not self._contiguous(cand):
                        continue
                    self.path = cand
                    return mv
        return None

    def _contiguous(self, path) -> bool:
        core = set(self.core)
        pos = [i for i, v in enumerate(path) if v in core]
        return not pos or pos[-1] - pos[0] + 1 == len(pos)

    def _close(self, state: GameState):
        # hunt the rotation space for a shape whose ends already join up
        shapes = []
        for shape in self._shapes(state):
            shapes.append(shape)
            head, tail = shape[0], shape[-1]
            if self._maker(state, head, tail):
                self.path = list(shape)
                self._finish()
                return None
            mv = self._free(state, head, tail)
            if mv is not None:
                self.path = list(shape)
                self._finish()
                return mv
        # nothing closes yet: open fresh shapes with a chord claim
        return self._free_chord(state, shapes)

    def _finish(self) -> None:
        path = self.path
        span = self._core_span()
        lo, hi = span if span is not None else (0, len(self.core) - 1)
        if hi - lo + 1 != len(self.core):
            raise AssertionError("clique block got split during path building")
        order = tuple(path[lo:] + path[:lo])
        self.done = BlobCycle(order, len(self.core))

    def _arbitrary(self, state: GameState):
        for x, y in itertools.combinations(self.verts, 2):
            mv = self._free(state, x, y)
            if mv is not None:
                return mv
        free = state.unclaimed()
        if not free:
            raise ValueError("no free edge to claim")
        return free[0]
