"""The random geometric graph process and its hitting radii.

Points are sampled in the unit square (binomial or Poissonized counts), the
graph at radius r joins every pair at distance <= r, and the edge process
orders all candidate edges by length so that hitting radii -- the first
radius at which a monotone or near-monotone property holds -- can be read
off a single incremental scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from diskgames import graphs


@dataclass
class PointSet:
    """Points in the unit square plus how they were generated."""

    coords: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.coords = np.asarray(self.coords, dtype=float)
        if self.coords.ndim != 2 or self.coords.shape[1] != 2:
            raise ValueError("coords must be an (n, 2) array")

    def __len__(self) -> int:
        return len(self.coords)

    def save(self, path):
        prov = self.provenance
        header = "# n={} seed={} model={}".format(
            prov.get("n", len(self)), prov.get("seed", ""), prov.get("model", "")
        )
        with open(path, "w") as fh:
            fh.write(header + "\n")
            for x, y in self.coords:
                fh.write(f"{x!r} {y!r}\n")

    @classmethod
    def load(cls, path) -> "PointSet":
        prov = {}
        rows = []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    for tok in line[1:].split():
                        if "=" in tok:
                            key, val = tok.split("=", 1)
                            prov[key] = val
                    continue
                x, y = line.split()
                rows.append((float(x), float(y)))
        if "n" in prov:
            prov["n"] = int(prov["n"])
        if prov.get("seed", "") != "":
            prov["seed"] = int(prov["seed"])
        return cls(np.array(rows).reshape(-1, 2), prov)


def sample(model: str, n: int, seed: int) -> PointSet:
    """Sample a point set: `binomial` takes exactly n points, `poisson`
    takes Po(n) many.  Both are uniform on the unit square."""
    rng = np.random.default_rng(seed)
    if model == "binomial":
        count = n
    elif model == "poisson":
        count = int(rng.poisson(n))
    else:
        raise ValueError(f"unknown model {model!r}")
    pts = rng.random((count, 2))
    return PointSet(pts, {"model": model, "n": n, "seed": seed})


def _candidate_pairs(pts: np.ndarray, r: float):
    """All index pairs at distance <= r, via a bucket grid.

    Returns (us, vs, d2) arrays with us < vs.  Exact: the grid only prunes,
    every surviving pair is distance-checked.
    """
    n = len(pts)
    if n < 2:
        return (
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=float),
        )
    ncells = max(1, int(1.0 / r)) if r > 0 else 1
    ncells = min(ncells, 4096)
    cx = np.minimum((pts[:, 0] * ncells).astype(np.int64), ncells - 1)
    cy = np.minimum((pts[:, 1] * ncells).astype(np.int64), ncells - 1)
    cid = cx * ncells + cy
    order = np.argsort(cid, kind="stable")
    sorted_cid = cid[order]
    uniq, starts = np.unique(sorted_cid, return_index=True)
    starts = np.append(starts, n)
    blocks = {int(c): order[starts[i] : starts[i + 1]] for i, c in enumerate(uniq)}

    r2 = r * r
    us_out, vs_out, d2_out = [], [], []
    offsets = ((0, 0), (0, 1), (1, -1), (1, 0), (1, 1))
    for c, idx_a in blocks.items():
        ax, ay = divmod(c, ncells)
        pa = pts[idx_a]
        for dx, dy in offsets:
            bx, by = ax + dx, ay + dy
            if not (0 <= bx < ncells and 0 <= by < ncells):
                continue
            if dx == 0 and dy == 0:
                if len(idx_a) < 2:
                    continue
                diff = pa[:, None, :] - pa[None, :, :]
                d2 = (diff * diff).sum(axis=2)
                ii, jj = np.triu_indices(len(idx_a), k=1)
                keep = d2[ii, jj] <= r2
                if keep.any():
                    us_out.append(idx_a[ii[keep]])
                    vs_out.append(idx_a[jj[keep]])
                    d2_out.append(d2[ii[keep], jj[keep]])
            else:
                idx_b = blocks.get(bx * ncells + by)
                if idx_b is None:
                    continue
                pb = pts[idx_b]
                diff = pa[:, None, :] - pb[None, :, :]
                d2 = (diff * diff).sum(axis=2)
                ii, jj = np.nonzero(d2 <= r2)
                if len(ii):
                    us_out.append(idx_a[ii])
                    vs_out.append(idx_b[jj])
                    d2_out.append(d2[ii, jj])
    if not us_out:
        return (
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=float),
        )
    us = np.concatenate(us_out)
    vs = np.concatenate(vs_out)
    d2 = np.concatenate(d2_out)
    swap = us > vs
    us[swap], vs[swap] = vs[swap], us[swap]
    return us, vs, d2


class GeometricGraph:
    """Geometric graph at a fixed radius, with set-based adjacency."""

    def __init__(self, n: int, r: float, adj, points=None):
        self.n = n
        self.r = r
        self.adj = adj
        self.points = points

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self):
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.adj], dtype=np.int64)

    def components(self) -> list[list[int]]:
        return graphs.connected_components(self.adj)

    def save_edges(self, path):
        with open(path, "w") as fh:
            for u, v in self.edges():
                if self.points is not None:
                    d = math.dist(self.points[u], self.points[v])
                    fh.write(f"{u} {v} {d!r}\n")
                else:
                    fh.write(f"{u} {v}\n")


def build_graph(points, r: float, method: str = "grid") -> GeometricGraph:
    """Graph with an edge for every pair at distance <= r.

    `grid` buckets points into cells of side >= r and only compares 3x3
    neighborhoods; `brute` compares all pairs and exists as the oracle the
    grid is tested against.
    """
    pts = points.coords if isinstance(points, PointSet) else np.asarray(points, float)
    n = len(pts)
    if method == "grid":
        us, vs, _ = _candidate_pairs(pts, r)
    elif method == "brute":
        diff = pts[:, None, :] - pts[None, :, :]
        d2 = (diff * diff).sum(axis=2)
        us, vs = np.nonzero(np.triu(d2 <= r * r, k=1))
    else:
        raise ValueError(f"unknown method {method!r}")
    adj = [set() for _ in range(n)]
    for u, v in zip(us.tolist(), vs.tolist()):
        adj[u].add(v)
        adj[v].add(u)
    return GeometricGraph(n, r, adj, pts)


def degrees_at(points, r: float) -> np.ndarray:
    """Vertex degrees at radius r without building adjacency sets."""
    pts = points.coords if isinstance(points, PointSet) else np.asarray(points, float)
    us, vs, _ = _candidate_pairs(pts, r)
    deg = np.zeros(len(pts), dtype=np.int64)
    np.add.at(deg, us, 1)
    np.add.at(deg, vs, 1)
    return deg


def default_r_cap(n: int) -> float:
    """Radius comfortably above every threshold studied here."""
    n = max(n, 3)
    return 2.0 * math.sqrt((math.log(n) + 10.0) / (math.pi * n))


@dataclass
class EdgeProcess:
    """All candidate edges up to r_cap, sorted by length with (u, v) ties."""

    points: np.ndarray
    us: np.ndarray
    vs: np.ndarray
    lengths: np.ndarray
    r_cap: float

    def __len__(self) -> int:
        return len(self.lengths)

    def graph_at_index(self, k: int, r: float | None = None) -> GeometricGraph:
        """Graph spanned by the first k edges of the process."""
        adj = [set() for _ in range(len(self.points))]
        for u, v in zip(self.us[:k].tolist(), self.vs[:k].tolist()):
            adj[u].add(v)
            adj[v].add(u)
        if r is None:
            r = float(self.lengths[k - 1]) if k else 0.0
        return GeometricGraph(len(self.points), r, adj, self.points)

    def group_ends(self) -> np.ndarray:
        """Indices after each maximal run of equal lengths."""
        if len(self.lengths) == 0:
            return np.empty(0, dtype=np.int64)
        change = np.nonzero(np.diff(self.lengths) > 0)[0] + 1
        return np.append(change, len(self.lengths))


def edge_process(points, r_cap: float | None = None) -> EdgeProcess:
    pts = points.coords if isinstance(points, PointSet) else np.asarray(points, float)
    if r_cap is None:
        r_cap = default_r_cap(len(pts))
    us, vs, d2 = _candidate_pairs(pts, r_cap)
    lengths = np.sqrt(d2)
    order = np.lexsort((vs, us, lengths))
    return EdgeProcess(pts, us[order], vs[order], lengths[order], r_cap)


def min_deg_at_least(G: GeometricGraph, k: int) -> bool:
    if G.n == 0:
        return True
    return all(len(a) >= k for a in G.adj)


def edge_degrees(G: GeometricGraph) -> dict[tuple[int, int], int]:
    """Edge-degree of every edge: distinct outside neighbors of its ends.

    d(uv) = |(N(u) ∪ N(v)) \\ {u, v}|, so a shared neighbor counts once.
    """
    out = {}
    for u, v in G.edges():
        out[(u, v)] = len((G.adj[u] | G.adj[v]) - {u, v})
    return out


def _low_edge_degree_edges(G: GeometricGraph, threshold: int) -> list[tuple[int, int]]:
    """Edges with edge-degree <= threshold.

    Only edges whose endpoints both have degree <= threshold + 1 can
    qualify, since d(uv) >= max(deg u, deg v) - 1.
    """
    deg = G.degrees()
    out = []
    cap = threshold + 1
    for u in range(G.n):
        if deg[u] > cap:
            continue
        for v in G.adj[u]:
            if v <= u or deg[v] > cap:
                continue
            if len((G.adj[u] | G.adj[v]) - {u, v}) <= threshold:
                out.append((u, v))
    return out


def pm_necessary(G: GeometricGraph) -> bool:
    """Necessary conditions for the perfect matching game: minimum degree
    at least two and minimum edge-degree at least three."""
    if G.n == 0:
        return True
    if any(len(a) < 2 for a in G.adj):
        return False
    return not _low_edge_degree_edges(G, 2)


def two_disjoint_spanning_trees(G: GeometricGraph) -> bool:
    from diskgames.games import two_tree_packing

    return two_tree_packing(G.n, list(G.edges())) is not None


def count_low_structures(G: GeometricGraph) -> int:
    """Number of degree-<=1 vertices plus edge-degree-<=2 edges.

    This is the count whose vanishing is exactly `pm_necessary`; its mean
    under the Poisson model has the closed-form limit used by the harness.
    """
    deg = G.degrees()
    return int((deg <= 1).sum()) + len(_low_edge_degree_edges(G, 2))


@dataclass
class FamilyScan:
    found: bool
    witness: dict | None
    member_index: int | None
    component: list[int] | None
    aborted: bool
    oversize: int | None


def contains_family_member(G: GeometricGraph, family, guard: int | None = None) -> FamilyScan:
    """Scan components for a subgraph copy of any family member.

    family: list of (k, edges) graphs, all on k vertices.  Components
    larger than `guard` (default 3k) abort the scan: in the sparse regimes
    this detector is designed for they indicate the radius is far past the
    interesting range, and an exhaustive search there could be huge.
    """
    if not family:
        return FamilyScan(False, None, None, None, False, None)
    k = family[0][0]
    if any(kk != k for kk, _ in family):
        raise ValueError("family members must share a vertex count")
    if guard is None:
        guard = 3 * k
    for comp in G.components():
        if len(comp) > guard:
            return FamilyScan(False, None, None, comp, True, len(comp))
        if len(comp) < k:
            continue
        for idx, (kk, pedges) in enumerate(family):
            found = graphs.contains_subgraph(G.adj, comp, kk, pedges)
            if found is not None:
                return FamilyScan(True, found, idx, comp, False, None)
    return FamilyScan(False, None, None, None, False, None)


def count_induced(G: GeometricGraph, k: int, pattern_edges) -> int:
    """Count k-subsets whose induced subgraph is isomorphic to the pattern.

    Supports connected patterns with 2 <= k <= 4.  Enumeration is per
    component, which keeps this linear in practice on the sparse graphs it
    is meant for.
    """
    from itertools import combinations

    from diskgames.geometry import _connected

    if not 2 <= k <= 4:
        raise ValueError(f"supported sizes are 2 <= k <= 4, got {k}")
    eset = frozenset(graphs.norm_edge(u, v) for u, v in pattern_edges)
    if not _connected(k, eset):
        raise ValueError("count_induced only handles connected patterns")
    target = graphs.canonical_form(k, eset)
    total = 0
    for comp in G.components():
        if len(comp) < k:
            continue
        if math.comb(len(comp), k) > 2_000_000:
            raise ValueError(
                f"component of size {len(comp)} too large for induced count"
            )
        for subset in combinations(comp, k):
            sub = graphs.induced_edges(G.adj, subset)
            if len(sub) != len(eset):
                continue
            if graphs.canonical_form(k, sub) == target:
                total += 1
    return total


@dataclass
class HittingResult:
    satisfied: bool
    radius: float | None
    n_edges: int | None
    violations: list
    doublings: int
    aborted: bool = False

    def __bool__(self) -> bool:
        return self.satisfied


class _MinDegTracker:
    def __init__(self, n: int, k: int):
        self.deg = np.zeros(n, dtype=np.int64)
        self.k = k
        self.deficient = n if k > 0 else 0

    def add(self, u: int, v: int):
        for w in (u, v):
            self.deg[w] += 1
            if self.deg[w] == self.k:
                self.deficient -= 1

    def ok(self) -> bool:
        return self.deficient == 0


class _PmTracker:
    """Incremental min-degree-2 plus min-edge-degree-3 tracking."""

    def __init__(self, n: int):
        self.adj = [set() for _ in range(n)]
        self.low_deg = n
        self.bad_edges: set[tuple[int, int]] = set()

    def _edge_deg(self, a: int, b: int) -> int:
        return len((self.adj[a] | self.adj[b]) - {a, b})

    def add(self, u: int, v: int):
        for w in (u, v):
            if len(self.adj[w]) == 1:
                self.low_deg -= 1
        self.adj[u].add(v)
        self.adj[v].add(u)
        for a in (u, v):
            for b in self.adj[a]:
                e = graphs.norm_edge(a, b)
                if self._edge_deg(a, b) <= 2:
                    self.bad_edges.add(e)
                else:
                    self.bad_edges.discard(e)

    def ok(self) -> bool:
        return self.low_deg == 0 and not self.bad_edges


def hitting_radius(
    points,
    prop,
    r_cap: float | None = None,
    max_doublings: int = 3,
    audit: bool = True,
) -> HittingResult:
    """First radius of the edge process at which `prop` holds.

    prop is one of
      ("min_deg", k)           -- minimum degree at least k
      "pm_necessary"           -- min degree >= 2 and min edge-degree >= 3
      "two_trees"              -- two edge-disjoint spanning trees exist
      ("family", family, guard)-- some component contains a family member
      callable(G) -> bool      -- generic, evaluated per length group

    Ties in edge length enter the graph together: the radius reported is a
    realized edge length, and the property is evaluated only at complete
    length groups.  The property need not be monotone: the scan records the
    first satisfaction and then (audit=True) keeps scanning, recording any
    later group where the property fails again.
    """
    pts = points.coords if isinstance(points, PointSet) else np.asarray(points, float)
    n = len(pts)
    cap = r_cap if r_cap is not None else default_r_cap(n)

    for doubling in range(max_doublings + 1):
        proc = edge_process(pts, cap)
        result = _scan(proc, prop, audit)
        if result is not None:
            result.doublings = doubling
            return result
        cap *= 2
        if cap > 2 * math.sqrt(2):
            break
    return HittingResult(False, None, None, [], max_doublings)


def _scan(proc: EdgeProcess, prop, audit: bool) -> HittingResult | None:
    n = len(proc.points)

    if isinstance(prop, tuple) and prop and prop[0] == "min_deg":
        tracker = _MinDegTracker(n, prop[1])
        return _scan_tracker(proc, tracker, audit)
    if prop == "pm_necessary":
        return _scan_tracker(proc, _PmTracker(n), audit)
    if prop == "two_trees":
        return _scan_two_trees(proc)
    if isinstance(prop, tuple) and prop and prop[0] == "family":
        family = prop[1]
        guard = prop[2] if len(prop) > 2 else None
        return _scan_family(proc, family, guard)
    if callable(prop):
        return _scan_callable(proc, prop, audit)
    raise ValueError(f"unknown property {prop!r}")


def _scan_tracker(proc: EdgeProcess, tracker, audit: bool) -> HittingResult | None:
    if tracker.ok():
        return HittingResult(True, 0.0, 0, [], 0)
    first = None
    violations = []
    prev = 0
    for end in proc.group_ends():
        for i in range(prev, end):
            tracker.add(int(proc.us[i]), int(proc.vs[i]))
        prev = end
        good = tracker.ok()
        if first is None and good:
            first = (float(proc.lengths[end - 1]), int(end))
            if not audit:
                break
        elif first is not None and not good:
            violations.append(float(proc.lengths[end - 1]))
    if first is None:
        return None
    return HittingResult(True, first[0], first[1], violations, 0)


def _scan_two_trees(proc: EdgeProcess) -> HittingResult | None:
    from diskgames.games import TwoTreePackingTracker

    tracker = TwoTreePackingTracker(len(proc.points))
    if tracker.ok():
        return HittingResult(True, 0.0, 0, [], 0)
    prev = 0
    for end in proc.group_ends():
        for i in range(prev, end):
            tracker.add(int(proc.us[i]), int(proc.vs[i]))
        prev = end
        if tracker.ok():
            # packing existence is monotone in the edge set, so there is
            # nothing to audit past the hit
            return HittingResult(True, float(proc.lengths[end - 1]), int(end), [], 0)
    return None


def _scan_family(proc: EdgeProcess, family, guard) -> HittingResult | None:
    n = len(proc.points)
    adj = [set() for _ in range(n)]
    G = GeometricGraph(n, 0.0, adj, proc.points)
    prev = 0
    for end in proc.group_ends():
        for i in range(prev, end):
            u, v = int(proc.us[i]), int(proc.vs[i])
            adj[u].add(v)
            adj[v].add(u)
        prev = end
        scan = contains_family_member(G, family, guard)
        if scan.aborted:
            res = HittingResult(False, float(proc.lengths[end - 1]), int(end), [], 0)
            res.aborted = True
            return res
        if scan.found:
            return HittingResult(True, float(proc.lengths[end - 1]), int(end), [], 0)
    return None


def _scan_callable(proc: EdgeProcess, prop, audit: bool) -> HittingResult | None:
    n = len(proc.points)
    adj = [set() for _ in range(n)]
    G = GeometricGraph(n, 0.0, adj, proc.points)
    if prop(G):
        return HittingResult(True, 0.0, 0, [], 0)
    first = None
    violations = []
    prev = 0
    for end in proc.group_ends():
        for i in range(prev, end):
            u, v = int(proc.us[i]), int(proc.vs[i])
            adj[u].add(v)
            adj[v].add(u)
        prev = end
        G.r = float(proc.lengths[end - 1])
        good = prop(G)
        if first is None and good:
            first = (float(proc.lengths[end - 1]), int(end))
            if not audit:
                break
        elif first is not None and not good:
            violations.append(float(proc.lengths[end - 1]))
    if first is None:
        return None
    return HittingResult(True, first[0], first[1], violations, 0)
