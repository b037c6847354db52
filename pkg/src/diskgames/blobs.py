"""Blob cycles and the surgeries that grow them.

A blob cycle is a cycle together with a clique on s consecutive cycle
vertices (the blob).  The blob's two border vertices are pinned by their
cycle edges to the outside, but the s-2 interior vertices can be permuted
freely, since every adjacency they need is a clique edge.  The surgeries
below exploit that freedom to splice new material into a cycle while
keeping most of the blob intact:

* insert a pinned edge u-v as a new pair of consecutive cycle vertices,
* absorb one outside vertex,
* merge a whole second blob cycle through a Hamilton path of it,
* conglomerate: run the three in sequence to swallow a family of
  satellite cycles, pinned edges and stray vertices.

Each surgery first validates the preconditions that make its splice
search provably succeed and raises BlobError naming the failed check
otherwise.  Margins come in two modes.  "strict" uses the comfortable
blob floor 100*(l+1) for slack l; "tight" uses 2*l+7, the least floor
for which the pigeonhole in the splice search closes at every parity
(2*l+5 already fails: with m even and s odd a vertex can have the
required degree yet hit no consecutive free pair).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from diskgames.graphs import norm_edge

MODES = ("tight", "strict")


class BlobError(ValueError):
    """A surgery precondition failed or a splice search came up empty."""

    def __init__(self, step: str, reason: str):
        self.step = step
        self.reason = reason
        super().__init__(f"{step}: {reason}")


def blob_floor(ell: int, mode: str = "tight") -> int:
    """Minimum blob size for absorb/merge surgeries with slack ell."""
    if mode == "tight":
        return 2 * ell + 7
    if mode == "strict":
        return 100 * (ell + 1)
    raise ValueError(f"unknown mode {mode!r}")


def conglomerate_floor(l1: int, l2: int, mode: str = "tight") -> int:
    """Minimum starting blob size for a conglomerate with l1 satellite
    cycles and l2 stray vertices."""
    inner = max(blob_floor(2 * l2, mode), blob_floor(2 * l1 + 3 * l2, mode))
    return inner + 2 * l1 + 2 * l2


@dataclass(frozen=True)
class BlobCycle:
    """Cycle `order` (in cyclic order) whose first `s` vertices form the
    blob clique."""

    order: tuple
    s: int

    def __post_init__(self):
        if len(self.order) < 3:
            raise ValueError("a blob cycle needs at least 3 vertices")
        if len(set(self.order)) != len(self.order):
            raise ValueError("cycle vertices must be distinct")
        if not 2 <= self.s <= len(self.order):
            raise ValueError("blob size out of range")
        object.__setattr__(self, "order", tuple(self.order))

    @property
    def m(self) -> int:
        return len(self.order)

    @property
    def blob(self) -> tuple:
        return self.order[: self.s]

    def cycle_edges(self) -> list:
        o, m = self.order, len(self.order)
        return [norm_edge(o[i], o[(i + 1) % m]) for i in range(m)]

    def clique_edges(self) -> list:
        return [norm_edge(a, b) for a, b in itertools.combinations(self.blob, 2)]

    def required_edges(self) -> set:
        return set(self.cycle_edges()) | set(self.clique_edges())

    def rotated_to(self, start_index: int, s: int) -> "BlobCycle":
        o = self.order
        return BlobCycle(o[start_index:] + o[:start_index], s)


def adjacency_from_edges(edges) -> dict:
    adj: dict = {}
    for u, v in edges:
        if u == v:
            raise ValueError(f"self loop at {u}")
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return adj


def blob_cycle_violations(cycle: BlobCycle, adj) -> list[str]:
    """Independent validity check: every cycle edge and every blob clique
    edge must be present in the host adjacency.  Returns human-readable
    violations, empty when the structure is sound."""
    out = []
    for u, v in cycle.cycle_edges():
        if v not in adj.get(u, ()):
            out.append(f"missing cycle edge {u}-{v}")
    for u, v in cycle.clique_edges():
        if v not in adj.get(u, ()):
            out.append(f"missing blob clique edge {u}-{v}")
    return out


def assert_blob_cycle(cycle: BlobCycle, adj, step: str = "check") -> None:
    bad = blob_cycle_violations(cycle, adj)
    if bad:
        raise BlobError(step, "; ".join(bad[:5]))


def _deg_on(adj, v, vertices) -> int:
    return len(adj.get(v, set()) & vertices)


def _find_splice(cycle: BlobCycle, attach, adj, forbidden):
    """Best splice of a segment into the cycle.

    `attach` lists (left, right, seg) options: seg is the vertex sequence
    to insert, beginning with left and ending with right, so the splice
    needs host edges a-left and right-b around the chosen gap.  Gaps are
    tried best first: a cycle edge outside the blob keeps s; a gap at the
    blob border costs 1; a gap between two blob interior vertices (which
    interior permutation can always create) costs 2.  `forbidden` is a set
    of frozensets naming vertex pairs whose cycle edge must survive.

    Returns the new BlobCycle or None.
    """
    o, m, s = cycle.order, cycle.m, cycle.s

    def ok(a, L, R, b) -> bool:
        if frozenset((a, b)) in forbidden:
            return False
        return a in adj.get(L, ()) and b in adj.get(R, ())

    # rank 0: gaps on the path part (slots s-1 .. m-1), blob untouched
    for i in range(s - 1, m):
        a, b = o[i], o[(i + 1) % m]
        for L, R, seg in attach:
            if ok(a, L, R, b):
                new = o[: i + 1] + tuple(seg) + o[i + 1 :]
                return BlobCycle(new, s)

    interior = list(o[1 : s - 1])
    rest = lambda x: [w for w in interior if w != x]

    # rank 1: gap at a blob border, one border vertex leaves the blob
    for L, R, seg in attach:
        for x in interior:
            if ok(o[0], L, R, x):
                new = (o[0],) + tuple(seg) + (x, *rest(x), *o[s - 1 :])
                start = 1 + len(seg)
                return BlobCycle(new[start:] + new[:start], s - 1)
            if ok(x, L, R, o[s - 1]):
                new = (o[0], *rest(x), x) + tuple(seg) + o[s - 1 :]
                return BlobCycle(new, s - 1)

    # rank 2: gap between two interior vertices after permuting them adjacent
    for L, R, seg in attach:
        for x in interior:
            if x not in adj.get(L, ()):
                continue
            for y in interior:
                if y == x or y not in adj.get(R, ()):
                    continue
                others = [w for w in interior if w not in (x, y)]
                new = (o[0], x) + tuple(seg) + (y, *others, *o[s - 1 :])
                start = 2 + len(seg)
                return BlobCycle(new[start:] + new[:start], s - 2)
    return None


def blob_insert_edge_pair(cycle: BlobCycle, u, v, adj, forbidden=frozenset()) -> BlobCycle:
    """Splice the host edge u-v into the cycle as two new consecutive
    vertices.  Needs deg(u)+deg(v) on the cycle at least m+1, one more
    than the textbook bound for both parities: with that sum some gap has
    u adjacent to its left end and v to its right end, or the mirror.
    The blob loses at most 2 and u-v becomes a cycle edge."""
    step = "insert_edge_pair"
    if cycle.s < 3:
        raise BlobError(step, "needs blob size at least 3")
    if u == v or u in cycle.order or v in cycle.order:
        raise BlobError(step, "u, v must be two fresh vertices")
    if v not in adj.get(u, ()):
        raise BlobError(step, f"host edge {u}-{v} missing")
    verts = set(cycle.order)
    du, dv = _deg_on(adj, u, verts), _deg_on(adj, v, verts)
    if du + dv < cycle.m + 1:
        raise BlobError(step, f"cycle degrees {du}+{dv} below {cycle.m + 1}")
    out = _find_splice(cycle, [(u, v, (u, v)), (v, u, (v, u))], adj, forbidden)
    if out is None:
        raise BlobError(step, "no feasible gap despite degree bound")
    return out


def blob_absorb_vertex(cycle: BlobCycle, v, adj, ell: int, mode: str = "tight",
                       forbidden=frozenset()) -> BlobCycle:
    """Insert the outside vertex v into the cycle.  Needs cycle degree at
    least m/2 - ell and blob size at least blob_floor(ell, mode); the blob
    loses at most 2."""
    step = "absorb_vertex"
    if v in cycle.order:
        raise BlobError(step, f"{v} is already on the cycle")
    floor = blob_floor(ell, mode)
    if cycle.s < floor:
        raise BlobError(step, f"blob size {cycle.s} below floor {floor} for slack {ell}")
    deg = _deg_on(adj, v, set(cycle.order))
    if 2 * deg < cycle.m - 2 * ell:
        raise BlobError(step, f"cycle degree {deg} below (m - 2*ell)/2 = {(cycle.m - 2 * ell) / 2}")
    out = _find_splice(cycle, [(v, v, (v,))], adj, forbidden)
    if out is None:
        raise BlobError(step, "no feasible gap despite degree bound")
    return out


def _five_blob_paths(c2: BlobCycle):
    """Hamilton paths of c2 between two of its 2nd..4th blob vertices.

    Viewing c2 as a 5-blob cycle (its first five blob vertices), for any
    ordered pair v_i, v_k among positions 1..3 the walk
    v_i, (the third one), v_4, v_5, ..., v_{m-1}, v_0, v_k
    uses only clique and cycle edges and visits every vertex once.
    """
    o = c2.order
    tail = o[4:] + (o[0],)
    for i, k in itertools.permutations((1, 2, 3), 2):
        j = ({1, 2, 3} - {i, k}).pop()
        yield o[i], o[k], (o[i], o[j]) + tail + (o[k],)


def blob_merge(c1: BlobCycle, c2: BlobCycle, adj, ell: int, mode: str = "tight",
               forbidden=frozenset()) -> BlobCycle:
    """Merge c2 (blob size at least 5) into c1 through a Hamilton path of
    c2 spliced into one gap of c1.  Every blob vertex of c2 needs cycle
    degree at least floor(m1/2) - ell on c1, and c1's blob at least
    blob_floor(ell, mode); c1's blob loses at most 2.  Cycle edges of c2
    outside its first five blob vertices, the pinned u-v edges included,
    survive into the merged cycle."""
    step = "merge"
    if c2.s < 5:
        raise BlobError(step, "second cycle needs blob size at least 5")
    if set(c1.order) & set(c2.order):
        raise BlobError(step, "cycles must be vertex-disjoint")
    floor = blob_floor(ell, mode)
    if c1.s < floor:
        raise BlobError(step, f"blob size {c1.s} below floor {floor} for slack {ell}")
    verts = set(c1.order)
    need = c1.m // 2 - ell
    for w in c2.order[:5]:
        deg = _deg_on(adj, w, verts)
        if deg < need:
            raise BlobError(step, f"blob vertex {w} has cycle degree {deg} below {need}")
    assert_blob_cycle(c2, adj, step="merge: second cycle")
    out = _find_splice(c1, list(_five_blob_paths(c2)), adj, forbidden)
    if out is None:
        raise BlobError(step, "no feasible gap despite degree bounds")
    return out


def blob_conglomerate(cycle: BlobCycle, triples, singles, adj, mode: str = "tight",
                      forbidden=frozenset()) -> BlobCycle:
    """Swallow l1 satellite blob cycles with their pinned edges and l2
    stray vertices into one blob cycle.

    `triples` lists (u, v, sat): sat a blob cycle of blob size at least
    10, u-v a host edge of two fresh vertices, each with cycle degree at
    least ceil((m_sat+1)/2) on sat.  `singles` lists stray vertices with
    cycle degree at least floor(m/2) on `cycle`.  Every blob vertex of a
    satellite needs cycle degree at least floor(m/2) on `cycle`, and the
    starting blob at least conglomerate_floor(l1, l2, mode).

    The construction pins u-v into its satellite, absorbs the strays, then
    merges the satellites one by one, protecting already-pinned edges.
    Degree requirements of the later steps refer to the grown cycle, so a
    step can still fail when satellites are large relative to `cycle`;
    such a failure propagates as a BlobError naming the step.

    Returns the final cycle: blob size at least s - 2*l1 - 2*l2, blob
    within the original blob, every pinned edge a cycle edge.  Pairs in
    `forbidden` are cycle edges no splice may consume, so chained calls
    can keep pinned edges from earlier calls intact.
    """
    l1, l2 = len(triples), len(singles)
    named: list = []
    for u, v, sat in triples:
        named.extend((u, v))
    named.extend(singles)

    # bullet checks, first failure named
    seen: set = set(cycle.order)
    for x in named:
        if x in seen:
            raise BlobError("bullet: distinct vertices", f"{x} appears twice")
        seen.add(x)
    for idx, (u, v, sat) in enumerate(triples):
        if set(sat.order) & seen:
            raise BlobError("bullet: disjoint cycles", f"satellite {idx} overlaps")
        seen |= set(sat.order)
    for idx, (u, v, sat) in enumerate(triples):
        if v not in adj.get(u, ()):
            raise BlobError("bullet: pinned edge", f"{u}-{v} missing for satellite {idx}")
        if sat.s < 10:
            raise BlobError("bullet: satellite blob size", f"satellite {idx} has s={sat.s} < 10")
        assert_blob_cycle(sat, adj, step=f"bullet: satellite {idx} structure")
        sverts = set(sat.order)
        du, dv = _deg_on(adj, u, sverts), _deg_on(adj, v, sverts)
        if du + dv < sat.m + 1:
            raise BlobError("bullet: pinned-edge degrees",
                            f"satellite {idx}: {du}+{dv} below {sat.m + 1}")
    s_req = conglomerate_floor(l1, l2, mode)
    if cycle.s < s_req:
        raise BlobError("bullet: blob size", f"s={cycle.s} below {s_req} for l1={l1}, l2={l2}")
    cverts = set(cycle.order)
    for w in singles:
        deg = _deg_on(adj, w, cverts)
        if deg < cycle.m // 2:
            raise BlobError("bullet: stray degree", f"{w} has cycle degree {deg} below {cycle.m // 2}")
    for idx, (u, v, sat) in enumerate(triples):
        for w in sat.blob:
            deg = _deg_on(adj, w, cverts)
            if deg < cycle.m // 2:
                raise BlobError("bullet: satellite blob degree",
                                f"satellite {idx} vertex {w} has degree {deg} below {cycle.m // 2}")

    pinned = []
    prepared = []
    for idx, (u, v, sat) in enumerate(triples):
        try:
            prepared.append(blob_insert_edge_pair(sat, u, v, adj))
        except BlobError as err:
            raise BlobError(f"step insert[{idx}]", err.reason) from err
        pinned.append(frozenset((u, v)))

    cur = cycle
    protected: set = {frozenset(p) for p in forbidden}
    for j, w in enumerate(singles):
        try:
            cur = blob_absorb_vertex(cur, w, adj, ell=2 * l2, mode=mode, forbidden=protected)
        except BlobError as err:
            raise BlobError(f"step absorb[{j}]", err.reason) from err
    for idx, sat in enumerate(prepared):
        try:
            cur = blob_merge(cur, sat, adj, ell=2 * l1 + 3 * l2, mode=mode, forbidden=protected)
        except BlobError as err:
            raise BlobError(f"step merge[{idx}]", err.reason) from err
        protected.add(pinned[idx])

    floor_final = cycle.s - 2 * l1 - 2 * l2
    if cur.s < floor_final:
        raise BlobError("final: blob floor", f"got s={cur.s}, needed {floor_final}")
    if not set(cur.blob) <= set(cycle.blob):
        raise BlobError("final: blob containment", "new blob leaks outside the original")
    cyc_pairs = {frozenset(e) for e in cur.cycle_edges()}
    for idx, pair in enumerate(pinned):
        if pair not in cyc_pairs:
            raise BlobError("final: pinned edge", f"satellite {idx} pinned edge lost")
    return cur
