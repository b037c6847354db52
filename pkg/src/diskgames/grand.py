"""Grand Maker strategies: spanning structures from a cellwork of local games.

Given a geometric graph and its dissection, the marking plan carves the
board into many small boards: a bounded-degree tree over the dominant
good cells with two edge pairs reserved per tree edge, a path or
matching game for every obstruction and safe cluster, a handful of
"important" companions for each crucial vertex, relay vertices along
cell paths, and a partition of each cell's unmarked vertices into one
large group and ell satellite groups that host blob-cycle builders.

During play a dispatcher answers every Breaker edge inside exactly one
of these small boards (or by a pairing rule, or by a replacement rule
that keeps marked-to-group and group-to-group link counts high).  Turns
Breaker wastes elsewhere are spent densifying cells and feeding unfinished
builders.  After the last edge is claimed, the stitcher extracts the
local wins and splices them: per cell, singles are absorbed into the
main blob cycle, reserved vertex pairs are pinned as virtual edges,
satellites are merged; cells are then joined across tree edges and the
virtual edges are substituted by the Maker paths they stand for.  The
result is a Hamilton cycle (or, via a saturating matching plus
alternate cycle edges, a perfect matching) of Maker's edges alone.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from diskgames import games
from diskgames.blobs import (
    BlobError,
    adjacency_from_edges,
    blob_absorb_vertex,
    blob_insert_edge_pair,
    blob_merge,
)
from diskgames.dissection import (
    Dissection,
    DissectionParams,
    SAFE,
    bounded_degree_spanning_tree,
)
from diskgames.games import GameState, norm_edge
from diskgames.localgames import (
    ABMatchingStrategy,
    ABPathStrategy,
    BlobBuilderStrategy,
    ab_board_edges,
    verify_ab_matching,
    verify_ab_path,
)
from diskgames.rgg import build_graph


@dataclass(frozen=True)
class GrandParams:
    """Sizes for the marking plan.

    T is the good-cell threshold the dissection ran with; ell satellite
    groups of group_size vertices and one main group of at least
    core_min vertices are carved from each cell.  main_blob and
    sat_blob are the blob sizes the builders aim for; per_crucial is
    how many important companions each crucial vertex reserves.
    """

    T: int = 60
    ell: int = 3
    group_size: int = 12
    core_min: int = 30
    main_blob: int = 15
    sat_blob: int = 5
    per_crucial: int = 4


class PlanError(ValueError):
    """The marking plan's preconditions failed; .failures says where."""

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__("; ".join(self.failures))


class StitchError(RuntimeError):
    """Extraction of the grand structure from Maker's edges failed."""


# |B| needed to win the covering game on A, by |A|
PATH_NEED = {1: 4, 2: 4, 3: 5}
MATCH_NEED = {1: 2, 2: 3, 3: 3}


def path_need(a: int) -> int:
    return PATH_NEED.get(a, 6)


def match_need(a: int) -> int:
    return MATCH_NEED.get(a, 4)


def crucial_requirement(size: int, T: int, goal: str) -> int:
    """How many crucial vertices an obstruction of this size must have."""
    if goal == "hamilton":
        if size == 1:
            return path_need(1)
        return size + 2 if size <= T else 6
    if size <= 2:
        return match_need(size)
    return size if size <= T else 4


@dataclass
class TreeJob:
    """One tree edge between cells, with its two reserved cross pairs.

    marks1/marks2 are the four vertices on each side; couple k pairs the
    cross edges (marks1[2k], marks2[2k]) and (marks1[2k+1], marks2[2k+1]),
    so Maker always wins one edge of each couple with distinct endpoints.
    """

    cells: tuple
    marks1: tuple
    marks2: tuple

    def couples(self):
        for k in (0, 2):
            yield (
                norm_edge(self.marks1[k], self.marks2[k]),
                norm_edge(self.marks1[k + 1], self.marks2[k + 1]),
            )


@dataclass
class ObstructionJob:
    kind: str
    A: tuple
    crucials: tuple               # assigned, in game order
    importants: dict              # crucial -> tuple of companions (hamilton)
    witness: dict                 # crucial -> cell hosting its companions


@dataclass
class ClusterJob:
    cell: int
    A: tuple
    B: tuple


@dataclass
class RouteJob:
    """Relay cells for one obstruction whose endpoints may land in
    different cells; each route cell reserves a pair of relay vertices."""

    cells: tuple
    marks: dict                   # cell -> (relay1, relay2)


@dataclass
class MarkingPlan:
    goal: str
    params: GrandParams
    n: int
    cells: tuple                  # dominant good cells, sorted
    members: dict                 # cell -> tuple of vertex ids
    tree_jobs: list
    obstruction_jobs: list
    cluster_jobs: list
    routes: dict                  # obstruction index -> RouteJob
    groups: dict                  # cell -> tuple of groups, groups[0] main
    marked: dict                  # cell -> tuple of marked vertices
    pairings: dict                # edge -> mate edge (both directions)
    excluded: dict                # cell -> tuple of members covered by jobs

    def summary(self) -> dict:
        """JSON-ready sketch of the plan."""
        return {
            "goal": self.goal,
            "n": self.n,
            "cells": list(self.cells),
            "tree_edges": [list(j.cells) for j in self.tree_jobs],
            "obstructions": [
                {"kind": j.kind, "size": len(j.A), "crucials": len(j.crucials)}
                for j in self.obstruction_jobs
            ],
            "clusters": [
                {"cell": j.cell, "size": len(j.A)} for j in self.cluster_jobs
            ],
            "groups": {
                str(c): [len(g) for g in gs] for c, gs in self.groups.items()
            },
            "marked_per_cell": {
                str(c): len(v) for c, v in self.marked.items()
            },
            "pairings": len(self.pairings) // 2,
        }


def _min_degree(g) -> int:
    return min((len(g.adj[v]) for v in range(g.n)), default=0)


def _min_edge_degree(g) -> int:
    """Least |N(u) u N(v)| - 2 over edges uv."""
    best = math.inf
    for u in range(g.n):
        for v in g.adj[u]:
            if u < v:
                best = min(best, len(g.adj[u] | g.adj[v]) - 2)
    return 0 if best is math.inf else int(best)


def marking_plan(
    g,
    d: Dissection,
    params: GrandParams | None = None,
    goal: str = "hamilton",
    obstructions=None,
) -> MarkingPlan:
    """Build the marking plan, checking every precondition on the way.

    Raises PlanError carrying the full list of structural failures:
    missing structure conditions, underpowered obstructions (too few
    crucial vertices for their covering game), degree shortfalls, and
    cells too small to host their marks and groups.
    """
    if goal not in ("hamilton", "matching"):
        raise ValueError(f"unknown goal {goal!r}")
    params = params or GrandParams()
    failures: list[str] = []

    flags, diag = d.check_str()
    need_flags = range(6) if goal == "hamilton" else range(5)
    for i in need_flags:
        if not flags[i]:
            failures.append(f"structure condition {i + 1} fails")

    mind = _min_degree(g)
    if goal == "hamilton" and mind < 4:
        failures.append(f"minimum degree {mind} below 4")
    if goal == "matching":
        if mind < 2:
            failures.append(f"minimum degree {mind} below 2")
        ed = _min_edge_degree(g)
        if ed < 3:
            failures.append(f"minimum edge degree {ed} below 3")
        if g.n % 2:
            failures.append("odd vertex count")

    adj_cells, comps = d.gamma()
    if not comps:
        raise PlanError(failures or ["no good cells"])
    cells = tuple(comps[0])
    members = {c: tuple(int(v) for v in d.members[c]) for c in cells}
    cellof = {}
    for c in cells:
        for v in members[c]:
            cellof[v] = c

    obs = d.obstructions() if obstructions is None else obstructions
    labels = d.classify()

    used: dict[int, set] = {c: set() for c in cells}
    excluded: dict[int, list] = {c: [] for c in cells}
    for o in obs:
        for v in o.verts:
            c = cellof.get(v)
            if c is not None:
                used[c].add(v)
                excluded[c].append(v)

    # tree over the dominant cells
    idx = {c: k for k, c in enumerate(cells)}
    corners = [d.corner(c) for c in cells]
    tree_cell_edges = [
        (cells[a], cells[b]) for a, b in bounded_degree_spanning_tree(corners)
    ] if len(cells) > 1 else []

    marked: dict[int, list] = {c: [] for c in cells}
    pairings: dict = {}

    def take(c: int, k: int, near=None) -> list:
        """k fresh members of cell c, optionally all within r of near."""
        out = []
        for w in members[c]:
            if w in used[c]:
                continue
            if near is not None and math.dist(d.pts[w], d.pts[near]) > d.r:
                continue
            out.append(w)
            if len(out) == k:
                break
        if len(out) < k:
            raise PlanError(
                failures
                + [f"cell {c} cannot supply {k} fresh marks (got {len(out)})"]
            )
        used[c].update(out)
        marked[c].extend(out)
        return out

    def pair(e1, e2):
        e1, e2 = norm_edge(*e1), norm_edge(*e2)
        pairings[e1] = e2
        pairings[e2] = e1

    tree_jobs = []
    for c1, c2 in tree_cell_edges:
        m1, m2 = take(c1, 4), take(c2, 4)
        job = TreeJob((c1, c2), tuple(m1), tuple(m2))
        for ea, eb in job.couples():
            pair(ea, eb)
        tree_jobs.append(job)

    # obstruction jobs: assign crucials exclusively, then companions
    need_fn = path_need if goal == "hamilton" else match_need
    taken_crucial: set = set()
    obstruction_jobs: list[ObstructionJob] = []
    routes: dict[int, RouteJob] = {}
    for oi, o in enumerate(obs):
        A = tuple(int(v) for v in o.verts)
        cand = [
            v
            for v in d.crucial_vertices(A)
            if v not in taken_crucial
            and (goal == "hamilton" or cellof.get(v) is not None)
        ]
        req = crucial_requirement(len(A), params.T, goal)
        if len(cand) < req:
            failures.append(
                f"obstruction {oi} (size {len(A)}) has {len(cand)} usable "
                f"crucial vertices, needs {req}"
            )
            continue
        chosen = tuple(cand[: need_fn(len(A))])
        taken_crucial.update(chosen)
        importants: dict = {}
        witness: dict = {}
        for v in chosen:
            wc = int(d.safe_cell[v])
            witness[v] = wc
            rc = cellof.get(v)
            if rc is not None:
                used[rc].add(v)
                marked[rc].append(v)
            if goal == "hamilton":
                if wc not in used:
                    failures.append(
                        f"crucial {v} witnesses non-dominant cell {wc}"
                    )
                    continue
                try:
                    imps = d.assign_important(v, used, params.per_crucial)
                except ValueError as err:
                    failures.append(str(err))
                    continue
                marked[wc].extend(imps)
                importants[v] = tuple(imps)
                pair((v, imps[0]), (v, imps[1]))
                pair((v, imps[2]), (v, imps[3]))
        job = ObstructionJob(o.kind, A, chosen, importants, witness)
        obstruction_jobs.append(job)
        if goal == "hamilton":
            wcells = sorted(set(witness.values()))
            if len(wcells) > 1:
                route = _route_cells(adj_cells, wcells)
                rmarks = {}
                for c in route:
                    rmarks[c] = tuple(take(c, 2))
                routes[len(obstruction_jobs) - 1] = RouteJob(
                    tuple(route), rmarks
                )
                for ca, cb in zip(route, route[1:]):
                    u1, u2 = rmarks[ca]
                    v1, v2 = rmarks[cb]
                    pair((u1, v1), (u1, v2))
                    pair((u2, v1), (u2, v2))
                for v in chosen:
                    p1, p2 = rmarks[witness[v]]
                    for im in importants.get(v, ()):
                        pair((im, p1), (im, p2))

    # safe clusters: safe vertices living outside the dominant cells,
    # grouped by witness cell and a half-radius grid, each covered by a
    # game against common neighbours inside the witness cell
    outside = [
        int(v)
        for v in np.nonzero(labels == SAFE)[0]
        if cellof.get(int(v)) is None and int(v) not in taken_crucial
    ]
    cluster_jobs: list[ClusterJob] = []
    boxes: dict = {}
    half = d.r / 2.0
    for v in outside:
        wc = int(d.safe_cell[v])
        bx = (int(d.pts[v][0] // half), int(d.pts[v][1] // half))
        boxes.setdefault((wc, bx), []).append(v)
    for (wc, _), vs in sorted(boxes.items()):
        A = tuple(sorted(vs))
        if len(A) > 7:
            failures.append(
                f"safe cluster of size {len(A)} exceeds the extraction cap"
            )
            continue
        nb = need_fn(len(A))
        common = [
            w
            for w in members[wc]
            if w not in used[wc]
            and all(math.dist(d.pts[w], d.pts[a]) <= d.r for a in A)
        ]
        if len(common) < nb:
            failures.append(
                f"cluster at cell {wc} lacks common companions "
                f"({len(common)} of {nb})"
            )
            continue
        B = tuple(common[:nb])
        used[wc].update(B)
        marked[wc].extend(B)
        cluster_jobs.append(ClusterJob(wc, A, B))

    # groups: one main group plus ell satellites per cell
    p = params
    groups: dict[int, tuple] = {}
    for c in cells:
        free = [w for w in members[c] if w not in used[c]]
        want = p.core_min + p.ell * p.group_size
        if len(free) < want:
            failures.append(
                f"cell {c} has {len(free)} unmarked vertices, "
                f"needs {want} for the groups"
            )
            continue
        sats = [
            tuple(free[p.core_min + k * p.group_size:
                       p.core_min + (k + 1) * p.group_size])
            for k in range(p.ell)
        ]
        main = tuple(free[: p.core_min]) + tuple(
            free[p.core_min + p.ell * p.group_size:]
        )
        groups[c] = (main, *sats)

    # every little board must live on the actual graph
    def on_board(u, v) -> bool:
        return v in g.adj[u]

    for job in obstruction_jobs:
        B = job.crucials
        for e in ab_board_edges(job.A, B):
            if not on_board(*e):
                failures.append(
                    f"obstruction edge {e} is off the graph"
                )
                break
    for cj in cluster_jobs:
        for e in ab_board_edges(cj.A, cj.B):
            if not on_board(*e):
                failures.append(f"cluster edge {e} is off the graph")
                break
    for e in pairings:
        if not on_board(*e):
            failures.append(f"pairing edge {e} is off the graph")
            break

    if failures:
        raise PlanError(failures)
    return MarkingPlan(
        goal=goal,
        params=params,
        n=g.n,
        cells=cells,
        members=members,
        tree_jobs=tree_jobs,
        obstruction_jobs=obstruction_jobs,
        cluster_jobs=cluster_jobs,
        routes=routes,
        groups={c: gs for c, gs in groups.items()},
        marked={c: tuple(v) for c, v in marked.items()},
        pairings=pairings,
        excluded={c: tuple(v) for c, v in excluded.items()},
    )


def _route_cells(adj_cells: dict, wcells: list) -> list:
    """A walk through the dominant component visiting all given cells."""
    route = [wcells[0]]
    for target in wcells[1:]:
        if target in route:
            continue
        # BFS from the route's last cell
        src = route[-1]
        prev = {src: None}
        frontier = [src]
        while frontier and target not in prev:
            nxt = []
            for x in frontier:
                for y in adj_cells[x]:
                    if y not in prev:
                        prev[y] = x
                        nxt.append(y)
            frontier = nxt
        if target not in prev:
            raise PlanError([f"no cell path to {target}"])
        hop = []
        cur = target
        while cur != src:
            hop.append(cur)
            cur = prev[cur]
        route.extend(reversed(hop))
    # drop duplicates, keeping first occurrence; the relay graph walk at
    # stitch time does not need the list to be a simple path
    seen, out = set(), []
    for c in route:
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


class GrandMakerStrategy:
    """Dispatcher that answers each Breaker edge inside one small board.

    Order of rules: pairing mate, the small game owning the edge, the
    marked-to-group and group-to-group replacement rules, then gift
    turns (unfinished builders first, then the cell densification
    queue, then junk edges off every structure).
    """

    def __init__(self, g, plan: MarkingPlan):
        self.g = g
        self.plan = plan
        self.games: list = []
        self.game_of: dict = {}
        self.builders: dict = {}          # (cell, gi) -> strategy
        self._bqueue: deque = deque()
        self.group_of: dict = {}
        self.markcell: dict = {}
        self.cellof: dict = {}

        path_game = plan.goal == "hamilton"
        for job in plan.obstruction_jobs:
            B = job.crucials
            strat = (
                ABPathStrategy(job.A, B)
                if path_game
                else ABMatchingStrategy(job.A, B)
            )
            self._add_game(strat, ab_board_edges(job.A, B))
        for cj in plan.cluster_jobs:
            strat = (
                ABPathStrategy(cj.A, cj.B)
                if path_game
                else ABMatchingStrategy(cj.A, cj.B)
            )
            self._add_game(strat, ab_board_edges(cj.A, cj.B))
        for c in plan.cells:
            for v in plan.members[c]:
                self.cellof[v] = c
            for v in plan.marked[c]:
                self.markcell[v] = c
            for gi, grp in enumerate(plan.groups[c]):
                for v in grp:
                    self.group_of[v] = (c, gi)
                k = plan.params.main_blob if gi == 0 else plan.params.sat_blob
                b = BlobBuilderStrategy(grp, k)
                self.builders[(c, gi)] = b
                self._bqueue.append((c, gi))
                board = [
                    norm_edge(x, y)
                    for i, x in enumerate(grp)
                    for y in grp[i + 1:]
                ]
                self._add_game(b, board)

        self.gifts = self._gift_queue()
        self._gp = 0
        self._targets_added = False
        self._blob_gifts: list = []
        self._bgp = 0
        self.cell_size = {c: len(plan.members[c]) for c in plan.cells}
        self.cdeg_cell: dict = {}   # maker degree inside the own cell
        self.cdeg_cross: dict = {}  # same, counting cross-group edges only

    def _add_game(self, strat, board):
        gi = len(self.games)
        self.games.append(strat)
        for e in board:
            self.game_of[norm_edge(*e)] = gi

    def _gift_queue(self) -> list:
        """In-cell link edges worth claiming on spare turns.

        Tier one links marked vertices to group members (interleaved per
        marked vertex so link counts grow evenly), tier two links the
        satellite groups to the main group, tier three crosses
        satellites.  Cells are interleaved at the top level.
        """
        per_cell = []
        for c in self.plan.cells:
            gs = self.plan.groups[c]
            allgroup = [v for grp in gs for v in grp]
            tiers = []
            rows = [
                [norm_edge(mv, w) for w in allgroup]
                for mv in self.plan.marked[c]
            ]
            tiers.extend(self._interleave(rows))
            rows = [
                [norm_edge(v, w) for w in gs[0]]
                for grp in gs[1:]
                for v in grp
            ]
            tiers.extend(self._interleave(rows))
            rows = [
                [norm_edge(v, w) for w in grp2]
                for i1, grp in enumerate(gs[1:], 1)
                for grp2 in gs[i1 + 1:]
                for v in grp
            ]
            tiers.extend(self._interleave(rows))
            per_cell.append(tiers)
        return self._interleave(per_cell)

    @staticmethod
    def _interleave(rows: list) -> list:
        out = []
        for k in range(max((len(r) for r in rows), default=0)):
            for r in rows:
                if k < len(r):
                    out.append(r[k])
        return out

    def builder_result(self, cell: int, gi: int):
        return self.builders[(cell, gi)].result()

    # -- play

    def respond(self, state: GameState, breaker_edges):
        if len(breaker_edges) != 1:
            raise ValueError("the grand strategies play unbiased games")
        e = norm_edge(*breaker_edges[0])
        mate = self.plan.pairings.get(e)
        if mate is not None and mate not in state.owner:
            return self._account(mate)
        gi = self.game_of.get(e)
        if gi is not None:
            mv = self.games[gi].respond(state, [e])
            if mv is not None:
                mv = norm_edge(*mv)
                if mv not in state.owner and mv in state.board_set:
                    return self._account(mv)
        # the satellite cores become the five merge vertices later; their
        # out-of-group links are the merge currency and get first claim
        mv = self._protect(state, e)
        if mv is not None:
            return self._account(mv)
        # builders come before degree upkeep: an unclosed blob is worth
        # more than one preserved link, and the window for closing cycles
        # is early, while closure edges are still unclaimed
        if self._bqueue:
            mv = self._feed_builders(state)
            if mv is not None:
                return self._account(mv)
        mv = self._blob_gift(state)
        if mv is not None:
            return self._account(mv)
        mv = self._replacement(state, e)
        if mv is not None:
            return self._account(mv)
        return self._account(self._gift(state))

    def _account(self, mv):
        """Track in-cell Maker degrees so replacement rules can stand
        down once an endpoint is safely connected."""
        a, b = mv
        ca, cb = self.cellof.get(a), self.cellof.get(b)
        if ca is not None and ca == cb:
            self.cdeg_cell[a] = self.cdeg_cell.get(a, 0) + 1
            self.cdeg_cell[b] = self.cdeg_cell.get(b, 0) + 1
            ga, gb = self.group_of.get(a), self.group_of.get(b)
            if ga != gb or ga is None:
                self.cdeg_cross[a] = self.cdeg_cross.get(a, 0) + 1
                self.cdeg_cross[b] = self.cdeg_cross.get(b, 0) + 1
        return mv

    def _free(self, state, a, w):
        f = norm_edge(a, w)
        if f in state.board_set and f not in state.owner:
            return f
        return None

    def _replacement(self, state, e):
        u, v = e
        # a marked vertex attacked: keep its in-cell degree high by
        # claiming another link into the cell, main group first (the
        # grown cycle it gets absorbed into lives there)
        for a, b in ((u, v), (v, u)):
            mc = self.markcell.get(a)
            if mc is None:
                continue
            if self.cdeg_cell.get(a, 0) >= self.cell_size[mc] // 2 - 1:
                continue
            grps = self.plan.groups[mc]
            for w in itertools.chain(*grps):
                if w != b:
                    f = self._free(state, a, w)
                    if f:
                        return f
        # a cross-group edge: keep the higher group's endpoint linked to
        # the other group (satellites need cycle degree at merge time)
        ga, gb = self.group_of.get(u), self.group_of.get(v)
        if ga is not None and gb is not None and ga[0] == gb[0] \
                and ga[1] != gb[1]:
            c = ga[0]
            thr = self.cell_size[c] // 2 - 5
            (a, gia), (b, gib) = sorted(
                ((u, ga[1]), (v, gb[1])), key=lambda t: t[1]
            )
            for tgt, src_gi in ((b, gia), (a, gib)):
                if self.cdeg_cross.get(tgt, 0) >= thr:
                    continue
                for w in self.plan.groups[c][src_gi]:
                    if w != tgt:
                        f = self._free(state, tgt, w)
                        if f:
                            return f
        return None

    def _protect(self, state, e):
        """Answer an attack on a satellite core vertex link for link.

        Merging a satellite blob into the grown cycle checks the cycle
        degrees of its first five vertices, which are exactly its core;
        letting those links halve twice loses the merge.
        """
        prot = set()
        for (c, gi), b in self.builders.items():
            if gi >= 1:
                prot.update(b.core)
        for a in e:
            if a not in prot:
                continue
            c = self.cellof.get(a)
            if c is None:
                continue
            if self.cdeg_cross.get(a, 0) >= self.cell_size[c] // 2 - 2:
                continue
            ownset = set(self.plan.groups[c][self.group_of[a][1]])
            # main-group links count toward every merge; others only pay
            # off if that satellite merged earlier
            main = self.plan.groups[c][0]
            rest = [
                w for w in self.plan.members[c]
                if w not in ownset and self.group_of.get(w, (c, 0))[1] != 0
            ]
            for w in itertools.chain(main, rest):
                if w not in ownset:
                    f = self._free(state, a, w)
                    if f:
                        return f
        return None

    def _blob_targets(self) -> list:
        """Once every builder is done, the merge bottleneck is the cycle
        degree of each satellite's five blob vertices; push their links
        to the rest of the cell ahead of everything else."""
        rows = []
        for c in self.plan.cells:
            main = self.plan.groups[c][0]
            rest = [
                w for w in self.plan.members[c]
                if self.group_of.get(w, (c, 0))[1] != 0
            ]
            for gi in range(1, len(self.plan.groups[c])):
                blob = self.builders[(c, gi)].result().order[:5]
                own = set(self.plan.groups[c][gi])
                rows.append(
                    [
                        (norm_edge(v, w), v)
                        for w in itertools.chain(main, rest)
                        for v in blob
                        if w not in own
                    ]
                )
            # marked vertices face the same degree checks when the
            # surgery absorbs them or splices through their pins
            rows.extend(
                [(norm_edge(v, w), v) for w in itertools.chain(main, rest)]
                for v in self.plan.marked[c]
            )
        return self._interleave(rows)

    def _blob_gift(self, state):
        if not self._targets_added:
            if self._bqueue:
                return None
            self._blob_gifts = self._blob_targets()
            self._bgp = 0
            self._targets_added = True
        while self._bgp < len(self._blob_gifts):
            f, v = self._blob_gifts[self._bgp]
            self._bgp += 1
            # a vertex already rich enough for every merge check can wait
            if self.cdeg_cross.get(v, 0) >= self.cell_size[self.cellof[v]] // 2 - 2:
                continue
            if f in state.board_set and f not in state.owner:
                return f
        return None

    def _feed_builders(self, state):
        for _ in range(len(self._bqueue)):
            key = self._bqueue[0]
            b = self.builders[key]
            if b.result() is not None:
                self._bqueue.popleft()
                continue
            self._bqueue.rotate(-1)
            mv = b.respond(state, [])
            if mv is not None:
                mv = norm_edge(*mv)
                grp = set(self.plan.groups[key[0]][key[1]])
                if (
                    mv[0] in grp
                    and mv[1] in grp
                    and mv not in state.owner
                    and mv in state.board_set
                ):
                    return mv
            # builder had nothing useful; let it wait for board traffic
            break
        return None

    def _gift(self, state):
        while self._gp < len(self.gifts):
            f = self.gifts[self._gp]
            self._gp += 1
            if f in state.board_set and f not in state.owner:
                return f
        # junk: any free edge off every structure, else any free edge
        scanned = 0
        fallback = None
        for f in state.free:
            if fallback is None:
                fallback = f
            scanned += 1
            if f not in self.game_of and f not in self.plan.pairings:
                return f
            if scanned >= 50:
                break
        if fallback is None:
            raise ValueError("no free edge to claim")
        return fallback


def maker_hamilton(g, plan: MarkingPlan) -> GrandMakerStrategy:
    """Maker strategy for a spanning cycle under the given plan."""
    if plan.goal != "hamilton":
        raise ValueError("plan was built for a different goal")
    return GrandMakerStrategy(g, plan)


def maker_perfect_matching(g, plan: MarkingPlan) -> GrandMakerStrategy:
    """Maker strategy for a perfect matching under the given plan."""
    if plan.goal != "matching":
        raise ValueError("plan was built for a different goal")
    return GrandMakerStrategy(g, plan)


def maker_connectivity(g):
    """Maker strategy for a spanning tree: two disjoint spanning trees
    must exist, and the classic tree-repair play does the rest."""
    packing = games.two_tree_packing(g.n, list(g.edges()))
    if packing is None:
        raise PlanError(["graph has no two edge-disjoint spanning trees"])
    return games.LehmanMakerStrategy(g.n, list(g.edges()), packing)


# -- stitching


def _maker_set(state: GameState) -> set:
    return {norm_edge(*e) for e in state.maker_edges()}


def _tree_winners(maker: set, job: TreeJob):
    """Maker's cross edge from each couple, as ((c1 end, c2 end), ...)."""
    out = []
    for ea, eb in job.couples():
        win = ea if ea in maker else eb
        if win not in maker:
            raise StitchError(f"no cross edge won for tree job {job.cells}")
        out.append(win)
    return out


def _side_of(edge, marks) -> int:
    return edge[0] if edge[0] in marks else edge[1]


def stitch_hamilton(state: GameState, strategy: GrandMakerStrategy) -> list:
    """Extract a spanning cycle from Maker's edges after a finished game."""
    plan = strategy.plan
    maker = _maker_set(state)
    madj = adjacency_from_edges(maker)
    virtual: dict[int, list] = {c: [] for c in plan.cells}
    interiors: set = set()
    used_marked: set = set()

    # tree couples: a virtual pair on each side of every tree edge
    tree_sub = []
    for job in plan.tree_jobs:
        w1, w2 = _tree_winners(maker, job)
        s1 = set(job.marks1)
        x1, x2 = _side_of(w1, s1), _side_of(w2, s1)
        y1 = w1[0] if w1[1] == x1 else w1[1]
        y2 = w2[0] if w2[1] == x2 else w2[1]
        c1, c2 = job.cells
        virtual[c1].append((x1, x2, None))
        virtual[c2].append((y1, y2, None))
        tree_sub.append(((x1, x2), (y1, y2)))
        used_marked.update((x1, x2, y1, y2))

    # obstruction paths, extended to companions and relayed home
    for oi, job in enumerate(plan.obstruction_jobs):
        paths = verify_ab_path(maker, job.A, job.crucials)
        if paths is None:
            raise StitchError(f"obstruction {oi}: no covering path extracted")
        for pth in paths:
            pth = list(pth)
            ends = []
            for endv in (pth[0], pth[-1]):
                imp = next(
                    (
                        i
                        for i in job.importants[endv]
                        if i not in used_marked
                        and norm_edge(endv, i) in maker
                    ),
                    None,
                )
                if imp is None:
                    raise StitchError(
                        f"obstruction {oi}: no free companion at {endv}"
                    )
                used_marked.add(imp)
                ends.append(imp)
            full = [ends[0]] + pth + [ends[1]]
            ce1 = job.witness[pth[0]]
            ce2 = job.witness[pth[-1]]
            if ce1 != ce2:
                route = plan.routes[oi]
                walk = _relay_walk(
                    maker, plan, route, full[-1], ce1, used_marked | interiors
                )
                if walk is None:
                    raise StitchError(
                        f"obstruction {oi}: relay walk {ce2}->{ce1} failed"
                    )
                full = full + walk[1:]
                used_marked.add(full[-1])
            virtual[ce1].append((full[0], full[-1], tuple(full[1:-1])))
            interiors.update(full[1:-1])
        # crucial vertices the paths skipped ride between two companions
        for v in job.crucials:
            if v in interiors:
                continue
            wins = [
                i
                for i in job.importants[v]
                if i not in used_marked and norm_edge(v, i) in maker
            ]
            if len(wins) < 2:
                raise StitchError(
                    f"obstruction {oi}: spare crucial {v} lacks companions"
                )
            ia, ib = wins[:2]
            used_marked.update((ia, ib))
            interiors.add(v)
            virtual[job.witness[v]].append((ia, ib, (v,)))

    # cluster paths end at companions inside their cell already
    for ci, cj in enumerate(plan.cluster_jobs):
        paths = verify_ab_path(maker, cj.A, cj.B)
        if paths is None:
            raise StitchError(f"cluster {ci}: no covering path extracted")
        for pth in paths:
            virtual[cj.cell].append((pth[0], pth[-1], tuple(pth[1:-1])))
            used_marked.update((pth[0], pth[-1]))
            interiors.update(pth[1:-1])

    cycle_by_cell = _cell_cycles(
        plan, strategy, madj, maker, virtual, interiors, set()
    )
    order = _merge_cells(plan, cycle_by_cell, tree_sub)
    order = _substitute(order, virtual)
    if not games.verify_hamilton_cycle(plan.n, maker, order):
        raise StitchError("assembled cycle fails verification")
    return order


def stitch_perfect_matching(
    state: GameState, strategy: GrandMakerStrategy
) -> list:
    """Extract a perfect matching: saturating matchings from the little
    games, plus alternate edges of a spanning cycle on the rest."""
    plan = strategy.plan
    maker = _maker_set(state)
    madj = adjacency_from_edges(maker)
    m0: list = []
    matched: set = set()

    for oi, job in enumerate(plan.obstruction_jobs):
        mt = verify_ab_matching(maker, job.A, job.crucials)
        if mt is None:
            raise StitchError(f"obstruction {oi}: no saturating matching")
        for a, b in mt:
            m0.append(norm_edge(a, b))
            matched.update((a, b))
    for ci, cj in enumerate(plan.cluster_jobs):
        mt = verify_ab_matching(maker, cj.A, cj.B)
        if mt is None:
            raise StitchError(f"cluster {ci}: no saturating matching")
        for a, b in mt:
            m0.append(norm_edge(a, b))
            matched.update((a, b))

    virtual: dict[int, list] = {c: [] for c in plan.cells}
    tree_sub = []
    for job in plan.tree_jobs:
        w1, w2 = _tree_winners(maker, job)
        s1 = set(job.marks1)
        x1, x2 = _side_of(w1, s1), _side_of(w2, s1)
        y1 = w1[0] if w1[1] == x1 else w1[1]
        y2 = w2[0] if w2[1] == x2 else w2[1]
        if {x1, x2, y1, y2} & matched:
            raise StitchError("tree mark got matched; plan roles collided")
        c1, c2 = job.cells
        virtual[c1].append((x1, x2, None))
        virtual[c2].append((y1, y2, None))
        tree_sub.append(((x1, x2), (y1, y2)))

    cycle_by_cell = _cell_cycles(
        plan, strategy, madj, maker, virtual, set(), matched
    )
    order = _merge_cells(plan, cycle_by_cell, tree_sub)
    if len(order) % 2:
        raise StitchError("cycle on the unmatched vertices has odd length")
    m1 = [norm_edge(order[k], order[k + 1]) for k in range(0, len(order), 2)]
    matching = m0 + m1
    if not games.verify_perfect_matching(plan.n, maker, matching):
        raise StitchError("assembled matching fails verification")
    return matching


def _relay_walk(maker, plan, route: RouteJob, start, target_cell, busy):
    """BFS from a companion through Maker's relay edges into the target
    cell's relay pair; returns the vertex walk or None."""
    goal = set(route.marks[target_cell])
    nodes = {start}
    for c in route.cells:
        nodes.update(route.marks[c])
    prev = {start: None}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            if x in goal and x != start:
                walk = []
                while x is not None:
                    walk.append(x)
                    x = prev[x]
                return walk[::-1]
            for y in nodes:
                if y in prev or y in busy:
                    continue
                if norm_edge(x, y) in maker:
                    prev[y] = x
                    nxt.append(y)
        frontier = nxt
    return None


def _cell_cycles(plan, strategy, madj, maker, virtual, interiors, matched):
    """Per cell: absorb singles, pin virtual pairs, merge satellites."""
    out = {}
    for c in plan.cells:
        gs = plan.groups[c]
        main = strategy.builder_result(c, 0)
        if main is None:
            raise StitchError(f"cell {c}: main builder unfinished")
        sats = []
        for gi in range(1, len(gs)):
            sato = strategy.builder_result(c, gi)
            if sato is None:
                raise StitchError(f"cell {c}: satellite {gi} unfinished")
            sats.append(sato)

        aug = {v: set(s) for v, s in madj.items()}
        pins = []
        for u, v, _ in virtual[c]:
            aug.setdefault(u, set()).add(v)
            aug.setdefault(v, set()).add(u)
            pins.append((u, v))

        pinned_ends = {x for p in pins for x in p}
        singles = [
            v
            for v in plan.marked[c]
            if v not in pinned_ends
            and v not in interiors
            and v not in matched
        ]
        cur = main
        protected: set = set()
        try:
            for v in singles:
                cur = blob_absorb_vertex(
                    cur, v, aug, ell=2, forbidden=protected
                )
            for u, v in pins:
                cur = blob_insert_edge_pair(
                    cur, u, v, aug, forbidden=protected
                )
                protected.add(frozenset((u, v)))
            # merge the weakest satellite that still meets the degree
            # bound first, while the host cycle is smallest
            remaining = list(sats)
            while remaining:
                verts = set(cur.order)
                need = cur.m // 2 - 4
                scored = sorted(
                    (
                        min(len(aug[w] & verts) for w in s_.order[:5]),
                        k,
                    )
                    for k, s_ in enumerate(remaining)
                )
                pick = next((k for dmin, k in scored if dmin >= need),
                            scored[0][1])
                cur = blob_merge(
                    cur, remaining.pop(pick), aug, ell=4, forbidden=protected
                )
        except BlobError as err:
            raise StitchError(f"cell {c}: {err}") from err

        want = {
            v
            for v in plan.members[c]
            if v not in interiors and v not in matched
        }
        got = set(cur.order)
        if got != want:
            raise StitchError(
                f"cell {c}: cycle covers {len(got)} vertices, wants "
                f"{len(want)} (missing {sorted(want - got)[:5]}...)"
            )
        out[c] = cur
    return out


def _merge_cells(plan, cycle_by_cell, tree_sub):
    """Join the per-cell cycles across tree edges into one vertex list.

    Each tree job reserved the pinned pairs (x1,x2) and (y1,y2) on its
    two cycles, with Maker cross edges x1-y1 and x2-y2.  Breaking both
    pins and routing through the cross edges concatenates the cycles.
    """
    lists = {c: list(cycle_by_cell[c].order) for c in plan.cells}

    def locate(pair):
        for key, lst in lists.items():
            k = _adjacent_at(lst, pair)
            if k is not None:
                return key, k
        return None, None

    for job, ((x1, x2), (y1, y2)) in zip(plan.tree_jobs, tree_sub):
        ka_key, ka = locate((x1, x2))
        kb_key, kb = locate((y1, y2))
        if ka is None or kb is None:
            raise StitchError(f"tree pair for {job.cells} not on any cycle")
        if ka_key == kb_key:
            raise StitchError(f"tree pair for {job.cells} landed in one cycle")
        la = lists.pop(ka_key)
        lb = lists.pop(kb_key)
        na, nb = len(la), len(lb)
        a1, a2 = la[ka], la[(ka + 1) % na]
        ja = (ka + 1) % na
        la2 = la[ja:] + la[:ja]                 # starts a2, ends a1
        partner = {x1: y1, x2: y2}
        jb = (kb + 1) % nb
        lb2 = lb[jb:] + lb[:jb]                 # starts one y, ends the other
        if lb2[0] != partner[a1]:
            lb2 = lb2[::-1]
        if lb2[0] != partner[a1] or lb2[-1] != partner[a2]:
            raise StitchError("tree splice misaligned")
        # junction a1 - partner(a1), wrap-around partner(a2) - a2
        lists[ka_key] = la2 + lb2
    remaining = list(lists.values())
    if len(remaining) != 1:
        raise StitchError(f"{len(remaining)} cycles left after tree merges")
    return remaining[0]


def _adjacent_at(lst: list, pair) -> int | None:
    """Index k with {lst[k], lst[k+1]} == pair (cyclically), else None."""
    want = set(pair)
    n = len(lst)
    for k in range(n):
        if {lst[k], lst[(k + 1) % n]} == want:
            return k
    return None


def _substitute(order: list, virtual: dict) -> list:
    """Replace each pinned pair by the Maker path it stands for."""
    subs = {}
    for c, triples in virtual.items():
        for u, v, interior in triples:
            if interior is not None:
                subs[frozenset((u, v))] = (u, v, list(interior))
    out = list(order)
    for key, (u, v, interior) in subs.items():
        k = _adjacent_at(out, (u, v))
        if k is None:
            raise StitchError(f"pinned pair {tuple(key)} lost before substitution")
        n = len(out)
        a, b = out[k], out[(k + 1) % n]
        path = interior if a == u else interior[::-1]
        if (k + 1) % n == 0:
            out = out + path
        else:
            out = out[: k + 1] + path + out[k + 1:]
    return out


# -- synthetic instances


@dataclass
class SyntheticInstance:
    """A dense clustered point set whose dissection satisfies every
    structural precondition by construction."""

    goal: str
    pts: np.ndarray
    r: float
    graph: object
    dissection: Dissection
    plan: MarkingPlan
    seed: int

    @property
    def n(self) -> int:
        return len(self.pts)


def synthetic_instance(
    goal: str = "hamilton",
    m: int = 1,
    seed: int = 0,
    cell_pts: int = 90,
    params: GrandParams | None = None,
) -> SyntheticInstance:
    """Instance generator for end-to-end play: m-by-m cells, each a tight
    cluster of cell_pts points near its centre, radius wide enough that
    adjacent cells see each other whole."""
    params = params or GrandParams()
    rng = np.random.default_rng(seed)
    side = 1.0 / m
    rho = 0.15 * side
    blocks = []
    for iy in range(m):
        for ix in range(m):
            centre = np.array([(ix + 0.5) * side, (iy + 0.5) * side])
            ang = rng.uniform(0, 2 * math.pi, size=cell_pts)
            rad = rho * np.sqrt(rng.uniform(0, 1, size=cell_pts))
            blocks.append(
                centre + np.stack([rad * np.cos(ang), rad * np.sin(ang)], 1)
            )
    pts = np.vstack(blocks)
    r = 1.5 if m == 1 else 2.5 * side
    g = build_graph(pts, r)
    d = Dissection(
        pts,
        r,
        DissectionParams(T=params.T, m_override=m),
    )
    plan = marking_plan(g, d, params, goal=goal)
    return SyntheticInstance(goal, pts, r, g, d, plan, seed)
