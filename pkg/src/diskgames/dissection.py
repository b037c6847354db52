"""Square dissection and the structure theory behind the local game plan.

The unit square is cut into an m-by-m grid of cells sized so that a cell
holds on the order of eta^2 * ln(n) sample points.  Cells with at least T
points are "good".  Good cells whose lower-left corners lie within
r - side*sqrt(2) of each other form the cell graph; its components,
ordered by size, split the board into a dominant region and a handful of
stragglers.  Vertices are then safe (T neighbours inside some dominant
good cell), risky (T neighbours inside a straggler's good cell only) or
dangerous (neither).  Obstructions are the dangerous clusters plus the
straggler components padded with their attached risky vertices; each one
must be covered by enough nearby safe "crucial" vertices for a local game
to absorb it into the global structure.

Everything here is deterministic given the point set: ties are broken by
cell index or vertex index, never by hash order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

SAFE = 0
RISKY = 1
DANGEROUS = 2

_LABEL_NAMES = {SAFE: "safe", RISKY: "risky", DANGEROUS: "dangerous"}


@dataclass(frozen=True)
class DissectionParams:
    """Knobs for the dissection and the structural checks.

    near_factor and sep_factor are the two distance scales of the
    structure conditions: obstruction diameters must stay below
    near_factor * r while distinct obstructions must sit at least
    sep_factor * r apart.  str6_gap and str6_hops bound how far apart
    (in units of r) two dominant cells may be while still requiring a
    short cell-graph path between them.  m_override pins the grid size
    for synthetic fixtures.
    """

    eta: float = 0.05
    T: int = 10
    near_factor: float = 0.01
    sep_factor: float = 1e10
    str1_frac: float = 0.99
    str6_gap: float = 10.0
    str6_hops: int = 100_000
    m_override: int | None = None


def cell_count(n: int, eta: float) -> int:
    """Grid dimension m = ceil(sqrt(n / (eta^2 ln n)))."""
    if n < 3:
        raise ValueError("need at least 3 points for a meaningful grid")
    return math.ceil(math.sqrt(n / (eta * eta * math.log(n))))


@dataclass(frozen=True)
class Obstruction:
    """A dangerous cluster or a straggler component plus its risky hangers-on.

    kind is "dangerous" or "component"; comp is the cell-graph component
    index for the latter.  verts is sorted.
    """

    kind: str
    verts: tuple
    comp: int | None = None
    cells: tuple = ()

    @property
    def size(self) -> int:
        return len(self.verts)


@dataclass
class ABCPair:
    """A very close pair u,v with its annulus/far/core point counts.

    z is the pair distance.  a counts points in B(u, r-z) \\ B(u, z),
    b counts points in (B(u,r) u B(v,r)) \\ B(u, r-z), and c counts
    points in B(u, z); u and v themselves are never counted.
    """

    u: int
    v: int
    z: float
    a: int
    b: int
    c: int


class Dissection:
    """Grid decomposition of a point set at radius r.

    Cell ids are iy * m + ix (row-major from the bottom-left), which is
    also the tie-break order everywhere a "smallest cell" is needed.
    """

    def __init__(self, pts, r: float, params: DissectionParams | None = None):
        self.pts = np.asarray(pts, dtype=float)
        if self.pts.ndim != 2 or self.pts.shape[1] != 2:
            raise ValueError("expected an (n, 2) point array")
        self.n = len(self.pts)
        self.r = float(r)
        self.params = params or DissectionParams()
        p = self.params
        self.m = p.m_override if p.m_override else cell_count(self.n, p.eta)
        self.side = 1.0 / self.m

        ix = np.minimum((self.pts[:, 0] // self.side).astype(int), self.m - 1)
        iy = np.minimum((self.pts[:, 1] // self.side).astype(int), self.m - 1)
        self.cell_of = iy * self.m + ix
        order = np.argsort(self.cell_of, kind="stable")
        cells, starts = np.unique(self.cell_of[order], return_index=True)
        self.members: dict[int, np.ndarray] = {}
        for k, c in enumerate(cells):
            hi = starts[k + 1] if k + 1 < len(starts) else self.n
            self.members[int(c)] = np.sort(order[starts[k]:hi])
        self.good = sorted(
            c for c, mem in self.members.items() if len(mem) >= p.T
        )
        self.good_fraction = len(self.good) / (self.m * self.m)

        self._gamma: tuple[dict, list] | None = None
        self._labels: np.ndarray | None = None
        self._tree_all: cKDTree | None = None

    # -- basic geometry helpers

    def corner(self, c: int):
        """Lower-left corner of cell c."""
        return ((c % self.m) * self.side, (c // self.m) * self.side)

    def _kdtree(self) -> cKDTree:
        if self._tree_all is None:
            self._tree_all = cKDTree(self.pts)
        return self._tree_all

    # -- cell graph

    def gamma(self) -> tuple[dict, list]:
        """Adjacency and components of the good-cell graph.

        Two good cells are adjacent when their lower-left corners are
        within r - side*sqrt(2), so that any point of one is within r of
        any point of the other.  Components are sorted largest first,
        ties by smallest member cell id.
        """
        if self._gamma is not None:
            return self._gamma
        thr = self.r - self.side * math.sqrt(2.0)
        adj: dict[int, list] = {c: [] for c in self.good}
        if thr > 0 and self.good:
            goodset = set(self.good)
            reach = int(thr / self.side) + 1
            for c in self.good:
                cx, cy = c % self.m, c // self.m
                for dy in range(-reach, reach + 1):
                    ny = cy + dy
                    if ny < 0 or ny >= self.m:
                        continue
                    for dx in range(-reach, reach + 1):
                        if dx == 0 and dy == 0:
                            continue
                        nx = cx + dx
                        if nx < 0 or nx >= self.m:
                            continue
                        c2 = ny * self.m + nx
                        if c2 in goodset and self.side * math.hypot(dx, dy) <= thr:
                            adj[c].append(c2)
            for c in adj:
                adj[c].sort()
        comps = []
        seen: set[int] = set()
        for c in self.good:
            if c in seen:
                continue
            comp = []
            stack = [c]
            seen.add(c)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            comps.append(sorted(comp))
        comps.sort(key=lambda comp: (-len(comp), comp[0]))
        self._gamma = (adj, comps)
        return self._gamma

    # -- vertex classification

    def classify(self) -> np.ndarray:
        """Label every vertex safe / risky / dangerous.

        A vertex is safe when it has at least T neighbours inside a cell
        of the largest component, risky when the witness cell lies in a
        smaller component only, dangerous otherwise.  Witness cells and
        components are the first qualifying ones in component order, so
        downstream assignments are deterministic.
        """
        if self._labels is not None:
            return self._labels
        p = self.params
        labels = np.full(self.n, DANGEROUS, dtype=int)
        self.safe_cell = np.full(self.n, -1, dtype=int)
        self.risky_comp = np.full(self.n, -1, dtype=int)
        self.risky_cell = np.full(self.n, -1, dtype=int)
        _, comps = self.gamma()
        if not comps:
            self._labels = labels
            return labels

        reach = int(self.r / self.side) + 1
        for ci, comp in enumerate(comps):
            for c in comp:
                mem = self.members[c]
                tree = cKDTree(self.pts[mem])
                cand = self._window_vertices(c, reach)
                counts = tree.query_ball_point(
                    self.pts[cand], self.r, return_length=True
                )
                # a member of c is within r of itself; drop the self-count
                inc = np.isin(cand, mem, assume_unique=True)
                counts = counts - inc.astype(int)
                hit = cand[counts >= p.T]
                if ci == 0:
                    fresh = hit[self.safe_cell[hit] < 0]
                    labels[fresh] = SAFE
                    self.safe_cell[fresh] = c
                else:
                    fresh = hit[
                        (self.safe_cell[hit] < 0) & (self.risky_comp[hit] < 0)
                    ]
                    labels[fresh] = RISKY
                    self.risky_comp[fresh] = ci
                    self.risky_cell[fresh] = c
        # a vertex that qualified for the main component may have been
        # tagged risky by an earlier small component pass; component 0
        # runs first so that cannot happen, but keep the invariant explicit
        labels[self.safe_cell >= 0] = SAFE
        self._labels = labels
        return labels

    def _window_vertices(self, c: int, reach: int) -> np.ndarray:
        """Vertex ids in cells within `reach` grid steps of cell c."""
        cx, cy = c % self.m, c // self.m
        out = []
        for ny in range(max(0, cy - reach), min(self.m, cy + reach + 1)):
            base = ny * self.m
            for nx in range(max(0, cx - reach), min(self.m, cx + reach + 1)):
                mem = self.members.get(base + nx)
                if mem is not None:
                    out.append(mem)
        if not out:
            return np.empty(0, dtype=int)
        return np.concatenate(out)

    def gamma_plus(self, i: int) -> np.ndarray:
        """Vertices of component i's cells plus its attached risky vertices."""
        _, comps = self.gamma()
        if not 1 <= i < len(comps):
            raise ValueError("gamma_plus wants a non-dominant component index")
        self.classify()
        parts = [self.members[c] for c in comps[i]]
        attached = np.nonzero(self.risky_comp == i)[0]
        merged = np.unique(np.concatenate(parts + [attached]))
        return merged

    # -- obstructions

    def dangerous_clusters(self) -> list[np.ndarray]:
        """Group dangerous vertices into clusters.

        Clusters are the components of the proximity graph at threshold
        sep_factor * r.  When that threshold exceeds the square diagonal
        every dangerous vertex lands in one cluster, no pair scan needed.
        """
        labels = self.classify()
        dang = np.nonzero(labels == DANGEROUS)[0]
        if len(dang) == 0:
            return []
        thr = self.params.sep_factor * self.r
        if thr >= math.sqrt(2.0):
            return [dang]
        tree = cKDTree(self.pts[dang])
        pairs = tree.query_pairs(thr, output_type="ndarray")
        parent = list(range(len(dang)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in pairs:
            ra, rb = find(int(a)), find(int(b))
            if ra != rb:
                parent[rb] = ra
        groups: dict[int, list] = {}
        for k in range(len(dang)):
            groups.setdefault(find(k), []).append(int(dang[k]))
        out = [np.array(sorted(g)) for g in groups.values()]
        out.sort(key=lambda g: int(g[0]))
        return out

    def obstructions(self) -> list[Obstruction]:
        """Dangerous clusters first (by least vertex), then the padded
        straggler components in component order."""
        obs = [
            Obstruction("dangerous", tuple(int(v) for v in g))
            for g in self.dangerous_clusters()
        ]
        _, comps = self.gamma()
        for i in range(1, len(comps)):
            verts = self.gamma_plus(i)
            obs.append(
                Obstruction(
                    "component",
                    tuple(int(v) for v in verts),
                    comp=i,
                    cells=tuple(comps[i]),
                )
            )
        return obs

    # -- crucial vertices and their important companions

    def crucial_vertices(self, verts) -> list[int]:
        """Safe vertices whose radius-r ball covers every vertex given."""
        labels = self.classify()
        pv = self.pts[np.asarray(verts, dtype=int)]
        cand = self._kdtree().query_ball_point(pv[0], self.r)
        out = []
        for v in cand:
            if labels[v] != SAFE:
                continue
            d = np.hypot(*(self.pts[v] - pv).T)
            if np.all(d <= self.r):
                out.append(int(v))
        return sorted(out)

    def assign_important(
        self, crucial: int, used: dict[int, set], k: int = 4
    ) -> list[int]:
        """Pick k unused neighbours of a safe vertex inside its witness cell.

        `used` maps cell id to the set of members already spoken for;
        the picks are recorded there.  Raises ValueError with the cell
        and shortfall when the cell cannot supply k fresh neighbours.
        """
        self.classify()
        c = int(self.safe_cell[crucial])
        if c < 0:
            raise ValueError(f"vertex {crucial} is not safe")
        taken = used.setdefault(c, set())
        picks = []
        for w in self.members[c]:
            w = int(w)
            if w == crucial or w in taken:
                continue
            if np.hypot(*(self.pts[w] - self.pts[crucial])) <= self.r:
                picks.append(w)
                if len(picks) == k:
                    break
        if len(picks) < k:
            raise ValueError(
                f"insufficient crucial vertices: cell {c} has only "
                f"{len(picks)} fresh neighbours of {crucial}, need {k}"
            )
        taken.update(picks)
        return picks

    # -- structural conditions

    def _set_dist(self, a: np.ndarray, b: np.ndarray) -> float:
        """Least distance between two vertex sets (brute force)."""
        pa, pb = self.pts[a], self.pts[b]
        best = math.inf
        for q in pa:
            d = np.hypot(*(pb - q).T).min()
            if d < best:
                best = d
        return best

    def _diam(self, verts: np.ndarray) -> float:
        ps = self.pts[verts]
        lo, hi = ps.min(axis=0), ps.max(axis=0)
        box = math.hypot(*(hi - lo))
        if len(ps) > 2000:
            return box  # upper bound; callers compare against near*r
        best = 0.0
        for k in range(len(ps) - 1):
            d = np.hypot(*(ps[k + 1:] - ps[k]).T).max()
            if d > best:
                best = d
        return best

    def check_str(self) -> tuple[list[bool], dict]:
        """The six structural conditions, plus diagnostics.

        1. the dominant component holds more than str1_frac of the good cells
        2. every padded straggler component has diameter below near*r
        3. dangerous vertices pair up closer than near*r or farther than sep*r
        4. distinct padded components sit at least sep*r apart
        5. dangerous clusters sit at least sep*r from every padded component
        6. dominant cells within str6_gap*r are joined by a cell-graph path
           of at most str6_hops edges
        """
        p = self.params
        near = p.near_factor * self.r
        sep = p.sep_factor * self.r
        adj, comps = self.gamma()
        diag: dict = {"n_good": len(self.good), "n_components": len(comps)}

        if comps:
            s1 = len(comps[0]) > p.str1_frac * len(self.good)
        else:
            s1 = False
        diag["gamma_max_cells"] = len(comps[0]) if comps else 0

        plus = [self.gamma_plus(i) for i in range(1, len(comps))]
        s2 = all(self._diam(g) < near for g in plus)

        clusters = self.dangerous_clusters()
        diag["n_dangerous"] = int(np.count_nonzero(self.classify() == DANGEROUS))
        diag["n_clusters"] = len(clusters)
        s3 = all(self._diam(g) < near for g in clusters)
        # inter-cluster distances exceed sep by construction unless the
        # single-cluster shortcut fired, in which case there are no pairs

        s4 = True
        for i in range(len(plus)):
            for j in range(i + 1, len(plus)):
                if self._set_dist(plus[i], plus[j]) < sep:
                    s4 = False
        s5 = all(
            self._set_dist(g, gp) >= sep for g in clusters for gp in plus
        )

        s6 = True
        if comps:
            dominant = comps[0]
            gap = p.str6_gap * self.r
            corners = {c: self.corner(c) for c in dominant}
            hops = self._hop_counts(adj, dominant)
            for a in range(len(dominant)):
                ca = dominant[a]
                for b in range(a + 1, len(dominant)):
                    cb = dominant[b]
                    if math.dist(corners[ca], corners[cb]) > gap:
                        continue
                    if hops[ca].get(cb, math.inf) > p.str6_hops:
                        s6 = False
        flags = [bool(s1), bool(s2), bool(s3), bool(s4), bool(s5), bool(s6)]
        diag["str"] = flags
        return flags, diag

    @staticmethod
    def _hop_counts(adj: dict, cells: list) -> dict:
        """BFS hop counts between the given cells in the cell graph."""
        out: dict[int, dict] = {}
        want = set(cells)
        for s in cells:
            dist = {s: 0}
            frontier = [s]
            while frontier:
                nxt = []
                for x in frontier:
                    for y in adj[x]:
                        if y not in dist:
                            dist[y] = dist[x] + 1
                            nxt.append(y)
                frontier = nxt
            out[s] = {t: d for t, d in dist.items() if t in want}
        return out

    # -- close pairs

    def scan_abc_pairs(self) -> list[ABCPair]:
        """Annulus/far/core counts for every pair closer than near*r.

        For a pair u,v at distance z: a counts points of B(u, r-z)
        outside B(u, z), b counts points of B(u,r) u B(v,r) outside
        B(u, r-z), c counts points of B(u, z).  u and v are excluded
        from all three.
        """
        near = self.params.near_factor * self.r
        tree = self._kdtree()
        pairs = tree.query_pairs(near, output_type="ndarray")
        out = []
        order = np.lexsort((pairs[:, 1], pairs[:, 0])) if len(pairs) else []
        for k in order:
            u, v = int(pairs[k, 0]), int(pairs[k, 1])
            z = math.dist(self.pts[u], self.pts[v])
            ball_u_r = set(tree.query_ball_point(self.pts[u], self.r))
            ball_v_r = set(tree.query_ball_point(self.pts[v], self.r))
            ball_mid = set(tree.query_ball_point(self.pts[u], self.r - z))
            ball_z = set(tree.query_ball_point(self.pts[u], z))
            drop = {u, v}
            a = len(ball_mid - ball_z - drop)
            b = len((ball_u_r | ball_v_r) - ball_mid - drop)
            c = len(ball_z - drop)
            out.append(ABCPair(u, v, z, a, b, c))
        return out

    # -- summary

    def report(self) -> dict:
        """JSON-ready summary of the dissection structure."""
        _, comps = self.gamma()
        obs = self.obstructions()
        flags, _ = self.check_str()
        return {
            "m": self.m,
            "good_fraction": self.good_fraction,
            "components": [len(c) for c in comps],
            "obstructions": [
                {
                    "kind": o.kind,
                    "size": o.size,
                    "crucial_count": len(self.crucial_vertices(o.verts)),
                }
                for o in obs
            ],
            "str": flags,
        }


def bounded_degree_spanning_tree(points) -> list[tuple[int, int]]:
    """Spanning tree with maximum degree at most 5 on points in the plane.

    Start from the minimum-total-length spanning tree (Kruskal with
    (length, u, v) tie-breaks), whose degrees never exceed 6.  While some
    vertex v has degree 6, two of its neighbours u, w subtend at most 60
    degrees at v, so |uw| <= max(|vu|, |vw|): swap the longer spoke for
    the chord uw.  Each swap drops deg(v) without raising the total
    length, and the loop is capped defensively at 10 * n iterations.
    """
    pts = np.asarray(points, dtype=float)
    k = len(pts)
    if k <= 1:
        return []
    cand = sorted(
        (math.dist(pts[u], pts[v]), u, v)
        for u in range(k)
        for v in range(u + 1, k)
    )
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    adj: dict[int, set] = {v: set() for v in range(k)}
    got = 0
    for _, u, v in cand:
        ru, rv = find(u), find(v)
        if ru == rv:
            continue
        parent[ru] = rv
        adj[u].add(v)
        adj[v].add(u)
        got += 1
        if got == k - 1:
            break
    if got != k - 1:
        raise ValueError("points do not span a connected tree (duplicates?)")

    for _ in range(10 * k):
        busy = [v for v in range(k) if len(adj[v]) >= 6]
        if not busy:
            break
        v0 = max(busy, key=lambda v: (len(adj[v]), pts[v, 0], pts[v, 1], v))
        nbrs = sorted(
            adj[v0],
            key=lambda u: math.atan2(pts[u, 1] - pts[v0, 1], pts[u, 0] - pts[v0, 0]),
        )
        best = None
        for i in range(len(nbrs)):
            u, w = nbrs[i], nbrs[(i + 1) % len(nbrs)]
            au = math.atan2(pts[u, 1] - pts[v0, 1], pts[u, 0] - pts[v0, 0])
            aw = math.atan2(pts[w, 1] - pts[v0, 1], pts[w, 0] - pts[v0, 0])
            span = (aw - au) % (2 * math.pi)
            key = (span, min(u, w), max(u, w))
            if best is None or key < best[0]:
                best = (key, u, w)
        _, u, w = best
        far = u if math.dist(pts[v0], pts[u]) >= math.dist(pts[v0], pts[w]) else w
        adj[v0].discard(far)
        adj[far].discard(v0)
        adj[u].add(w)
        adj[w].add(u)
    peak = max(len(adj[v]) for v in range(k))
    if peak > 5:
        raise AssertionError(f"degree reduction stalled at max degree {peak}")
    return sorted(
        (v, u) if v < u else (u, v)
        for v in range(k)
        for u in adj[v]
        if v < u
    )
