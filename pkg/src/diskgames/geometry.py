"""Exact and approximate areas for disks meeting the unit square.

Everything here is deterministic plane geometry plus two probabilistic
utilities (a Monte Carlo area estimator and the scaling constant of small
unit-disk graphs).  The closed forms are used by the harness to predict
hitting probabilities; the Monte Carlo estimator doubles as an independent
oracle for them in the test suite.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate


def dist(p, q) -> float:
    """Euclidean distance between two points given as (x, y) pairs."""
    return math.hypot(p[0] - q[0], p[1] - q[1])


def disk_diff_area(d: float, r: float) -> float:
    """Area of B(x;r) \\ B(y;r) for two centers at distance d.

    Requires 0 <= d <= 2r and r > 0.  For d >= 2r the disks are disjoint
    and the answer would be the full disk; we treat that as out of scope.
    """
    if r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    if d < 0 or d > 2 * r:
        raise ValueError(f"need 0 <= d <= 2r, got d={d}, r={r}")
    u = d / (2 * r)
    return math.pi * r * r - 2 * r * r * math.acos(u) + d * r * math.sqrt(1 - u * u)


def disk_diff_bounds(d: float, r: float) -> tuple[float, float]:
    """Linear envelope d*r <= disk_diff_area(d, r) <= 4*d*r."""
    if r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    if d < 0 or d > 2 * r:
        raise ValueError(f"need 0 <= d <= 2r, got d={d}, r={r}")
    return d * r, 4 * d * r


def disk_square_area(h: float, r: float) -> float:
    """Area of B(x;r) intersected with the unit square.

    The center x sits at distance h from one side of the square and at
    distance more than r from the other three, so only one side cuts the
    disk.  Requires 0 <= h < r < 1/2.
    """
    if not 0 <= h < r < 0.5:
        raise ValueError(f"need 0 <= h < r < 1/2, got h={h}, r={r}")
    u = h / r
    return math.pi * r * r - r * r * math.acos(u) + h * r * math.sqrt(1 - u * u)


def disk_square_bounds(h: float, r: float) -> tuple[float, float]:
    """Linear envelope pi r^2/2 + hr <= disk_square_area <= pi r^2/2 + 2hr."""
    if not 0 <= h < r < 0.5:
        raise ValueError(f"need 0 <= h < r < 1/2, got h={h}, r={r}")
    half = math.pi * r * r / 2
    return half + h * r, half + 2 * h * r


@dataclass(frozen=True)
class DiskPairFrame:
    """Two disk centers near a vertical boundary of the unit square.

    The boundary is the line x = 0.  The first center sits at (h, 0); the
    second at (h + d cos(alpha), d sin(alpha)), i.e. at distance d in a
    direction making angle alpha with the inward normal.  Both centers are
    assumed far from the other three sides, so only x = 0 clips the disks.

    d : float      distance between the centers, 0 < d <= r
    h : float      distance from the first center to the boundary, 0 <= h < r
    alpha : float  direction angle in [-pi/2, pi/2] (second center inward)
    r : float      disk radius, 0 < r < 1/4
    """

    d: float
    h: float
    alpha: float
    r: float

    def __post_init__(self):
        if not 0 < self.r < 0.25:
            raise ValueError(f"need 0 < r < 1/4, got r={self.r}")
        if not 0 <= self.h < self.r:
            raise ValueError(f"need 0 <= h < r, got h={self.h}, r={self.r}")
        if not 0 < self.d <= self.r:
            raise ValueError(f"need 0 < d <= r, got d={self.d}, r={self.r}")
        if not -math.pi / 2 <= self.alpha <= math.pi / 2:
            raise ValueError(f"need |alpha| <= pi/2, got {self.alpha}")

    @property
    def x(self) -> tuple[float, float]:
        return (self.h, 0.0)

    @property
    def y(self) -> tuple[float, float]:
        return (self.h + self.d * math.cos(self.alpha), self.d * math.sin(self.alpha))


@dataclass(frozen=True)
class BoundaryAreas:
    """Exact and first-order areas for a DiskPairFrame.

    union_exact  : |square ∩ (B(x;r) ∪ B(y;r))|
    union_approx : pi r^2/2 + 2hr + (1+cos alpha) dr
    diff_exact   : |square ∩ (B(y;r) \\ B(x;r))|
    diff_approx  : (1+cos alpha) dr

    The approximants carry an O((d+h)^2) error, which the tests check by
    order: halving d and h shrinks the observed error by roughly four.
    """

    union_exact: float
    union_approx: float
    diff_exact: float
    diff_approx: float


def _slice(cx: float, cy: float, r: float, t: float) -> tuple[float, float] | None:
    """Vertical chord of the disk centered at (cx, cy) at abscissa t."""
    w = r * r - (t - cx) * (t - cx)
    if w <= 0:
        return None
    s = math.sqrt(w)
    return (cy - s, cy + s)


def _interval_union_len(a, b) -> float:
    if a is None:
        return 0.0 if b is None else b[1] - b[0]
    if b is None:
        return a[1] - a[0]
    total = (a[1] - a[0]) + (b[1] - b[0])
    overlap = max(0.0, min(a[1], b[1]) - max(a[0], b[0]))
    return total - overlap


def _interval_diff_len(b, a) -> float:
    """Length of interval b minus interval a."""
    if b is None:
        return 0.0
    if a is None:
        return b[1] - b[0]
    covered = max(0.0, min(a[1], b[1]) - max(a[0], b[0]))
    return (b[1] - b[0]) - covered


def union_near_boundary_areas(frame: DiskPairFrame) -> BoundaryAreas:
    """Exact (adaptive quadrature) and first-order areas near the boundary."""
    xc, yc = frame.x, frame.y
    r = frame.r

    breaks = sorted(
        {
            max(0.0, xc[0] - r),
            max(0.0, yc[0] - r),
            xc[0] + r,
            yc[0] + r,
            0.0,
        }
    )
    lo = 0.0
    hi = max(xc[0] + r, yc[0] + r)
    breaks = [lo] + [t for t in breaks if lo < t < hi] + [hi]

    def union_len(t):
        return _interval_union_len(_slice(*xc, r, t), _slice(*yc, r, t))

    def diff_len(t):
        return _interval_diff_len(_slice(*yc, r, t), _slice(*xc, r, t))

    union_exact = 0.0
    diff_exact = 0.0
    for a, b in itertools.pairwise(breaks):
        if b - a < 1e-15:
            continue
        union_exact += integrate.quad(union_len, a, b, limit=200)[0]
        diff_exact += integrate.quad(diff_len, a, b, limit=200)[0]

    lead = (1 + math.cos(frame.alpha)) * frame.d * r
    union_approx = math.pi * r * r / 2 + 2 * frame.h * r + lead
    return BoundaryAreas(
        union_exact=union_exact,
        union_approx=union_approx,
        diff_exact=diff_exact,
        diff_approx=lead,
    )


def mc_area(region, box, samples: int, seed: int) -> tuple[float, float]:
    """Monte Carlo estimate of the area of `region` within `box`.

    region : callable mapping an (m, 2) array of points to a boolean array
    box    : ((xmin, xmax), (ymin, ymax))
    Returns (estimate, standard error).
    """
    (x0, x1), (y0, y1) = box
    if not (x1 > x0 and y1 > y0):
        raise ValueError(f"degenerate box {box}")
    if samples <= 0:
        raise ValueError("samples must be positive")
    rng = np.random.default_rng(seed)
    pts = rng.random((samples, 2))
    pts[:, 0] = x0 + (x1 - x0) * pts[:, 0]
    pts[:, 1] = y0 + (y1 - y0) * pts[:, 1]
    inside = np.asarray(region(pts), dtype=bool)
    if inside.shape != (samples,):
        raise ValueError("region must return one boolean per point")
    vol = (x1 - x0) * (y1 - y0)
    p = inside.mean()
    est = vol * p
    se = vol * math.sqrt(p * (1 - p) / samples)
    return est, se


def _orient(p, q, s) -> float:
    return (q[0] - p[0]) * (s[1] - p[1]) - (q[1] - p[1]) * (s[0] - p[0])


def segments_cross(p1, q1, p2, q2) -> tuple[bool, bool]:
    """Whether the open segments [p1,q1] and [p2,q2] properly cross.

    Returns (crossing, degenerate).  Degenerate configurations, meaning any
    collinear triple among the four endpoints (this covers shared endpoints,
    touching interiors and zero-length segments), are reported as
    non-crossing with the flag set; callers decide how to treat them.
    """
    d1 = _orient(p2, q2, p1)
    d2 = _orient(p2, q2, q1)
    d3 = _orient(p1, q1, p2)
    d4 = _orient(p1, q1, q2)
    if d1 == 0 or d2 == 0 or d3 == 0 or d4 == 0:
        return False, True
    crossing = (d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0)
    return crossing, False


def chernoff_rate(x: float) -> float:
    """Large deviations rate H(x) = x ln x - x + 1, with H(0) = 1."""
    if x < 0:
        raise ValueError(f"rate function needs x >= 0, got {x}")
    if x == 0:
        return 1.0
    return x * math.log(x) - x + 1


def chernoff_tail(mu: float, k: float) -> float:
    """Chernoff bound exp(-mu H(k/mu)) for the Poisson/binomial tail at k.

    For k >= mu this bounds P(Z >= k); for k <= mu it bounds P(Z <= k).
    Either way the value dominates the corresponding exact tail.
    """
    if mu <= 0:
        raise ValueError(f"mean must be positive, got {mu}")
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    return math.exp(-mu * chernoff_rate(k / mu))


def _edge_bit(i: int, j: int, k: int) -> int:
    """Bit position of pair (i, j), i < j, among the C(k,2) vertex pairs."""
    idx = 0
    for a in range(k):
        for b in range(a + 1, k):
            if (a, b) == (i, j):
                return idx
            idx += 1
    raise ValueError((i, j))


def _iso_masks(k: int, edges: frozenset) -> set[int]:
    """All edge-set bitmasks on k labelled vertices isomorphic to H."""
    pairs = list(itertools.combinations(range(k), 2))
    target = set()
    for perm in itertools.permutations(range(k)):
        mask = 0
        for bit, (a, b) in enumerate(pairs):
            u, v = perm[a], perm[b]
            if (min(u, v), max(u, v)) in edges:
                mask |= 1 << bit
        target.add(mask)
    return target


def _connected(k: int, edges: frozenset) -> bool:
    seen = {0}
    stack = [0]
    adj = {i: set() for i in range(k)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == k


def mu_H(
    k: int,
    edges,
    samples: int = 1_000_000,
    seed: int = 0,
    batch: int = 500_000,
) -> tuple[float, float]:
    """Monte Carlo estimate of the small-graph intensity constant mu(H).

    H is the graph on vertices 0..k-1 with the given edge pairs.  The
    constant is the integral, over k-1 points in the box [-(k-1), k-1]^2,
    of the indicator that the unit-disk graph on the origin plus those
    points is isomorphic to H, divided by k!.

    Supports 2 <= k <= 5 (k = 1 returns exactly (1, 0) by convention).
    Disconnected graphs are rejected: their constant plays no role in the
    component scan and asking for it is almost surely a bug.

    Returns (estimate, standard error).
    """
    if k == 1:
        if edges:
            raise ValueError("a single vertex admits no edges")
        return 1.0, 0.0
    if not 2 <= k <= 5:
        raise ValueError(f"supported sizes are 1 <= k <= 5, got {k}")
    eset = frozenset((min(u, v), max(u, v)) for u, v in edges)
    for u, v in eset:
        if not (0 <= u < k and 0 <= v < k and u != v):
            raise ValueError(f"bad edge ({u}, {v}) for k={k}")
    if not _connected(k, eset):
        raise ValueError("mu(H) is only defined here for connected H")

    targets = _iso_masks(k, eset)
    pairs = list(itertools.combinations(range(k), 2))
    side = 2.0 * (k - 1)
    vol = side ** (2 * (k - 1))
    rng = np.random.default_rng(seed)

    hits = 0
    done = 0
    while done < samples:
        m = min(batch, samples - done)
        pts = rng.uniform(-(k - 1), k - 1, size=(m, k - 1, 2))
        full = np.concatenate([np.zeros((m, 1, 2)), pts], axis=1)
        masks = np.zeros(m, dtype=np.int64)
        for bit, (a, b) in enumerate(pairs):
            diff = full[:, a, :] - full[:, b, :]
            close = (diff * diff).sum(axis=1) <= 1.0
            masks |= close.astype(np.int64) << bit
        hits += int(np.isin(masks, list(targets)).sum())
        done += m

    p = hits / samples
    scale = vol / math.factorial(k)
    est = scale * p
    se = scale * math.sqrt(p * (1 - p) / samples)
    return est, se
