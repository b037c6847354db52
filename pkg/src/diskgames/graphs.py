"""Small shared graph utilities on plain adjacency lists.

Vertices are integers 0..n-1, edges are (u, v) pairs with no self loops.
These helpers back the game boards, the geometric detectors and the
structure scans; they are deliberately free of any geometry.
"""

from __future__ import annotations

import itertools


def norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def adjacency(n: int, edges) -> list[set[int]]:
    adj = [set() for _ in range(n)]
    for u, v in edges:
        if u == v:
            raise ValueError(f"self loop at {u}")
        adj[u].add(v)
        adj[v].add(u)
    return adj


def connected_components(adj, vertices=None) -> list[list[int]]:
    """Components as sorted vertex lists, largest first, ties by smallest vertex."""
    if vertices is None:
        vertices = range(len(adj))
    seen = set()
    comps = []
    for s in vertices:
        if s in seen:
            continue
        seen.add(s)
        stack = [s]
        comp = [s]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comp.sort()
        comps.append(comp)
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps


def is_connected(n: int, adj) -> bool:
    if n == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def is_spanning_tree(n: int, tree_edges) -> bool:
    edges = list(tree_edges)
    if len(edges) != n - 1:
        return False
    return is_connected(n, adjacency(n, edges))


def contains_subgraph(host_adj, host_vertices, k: int, pattern_edges):
    """Find the pattern as a (not necessarily induced) subgraph.

    Returns a dict mapping pattern vertex -> host vertex, or None.  The
    pattern lives on vertices 0..k-1.  host_vertices restricts the search,
    e.g. to one component.
    """
    p_adj = adjacency(k, pattern_edges)
    hosts = list(host_vertices)
    if len(hosts) < k:
        return None
    # assign high-degree pattern vertices first; they fail fastest
    order = sorted(range(k), key=lambda v: -len(p_adj[v]))
    pos = {v: i for i, v in enumerate(order)}
    assign: dict[int, int] = {}
    used: set[int] = set()

    def backtrack(i: int):
        if i == k:
            return True
        pv = order[i]
        earlier = [q for q in p_adj[pv] if pos[q] < i]
        if earlier:
            cands = set(host_adj[assign[earlier[0]]])
            for q in earlier[1:]:
                cands &= host_adj[assign[q]]
            cands = [h for h in cands if h not in used]
        else:
            cands = [h for h in hosts if h not in used]
        for h in cands:
            assign[pv] = h
            used.add(h)
            if backtrack(i + 1):
                return True
            used.remove(h)
            del assign[pv]
        return False

    return dict(assign) if backtrack(0) else None


def canonical_form(k: int, edges) -> tuple:
    """Isomorphism-invariant encoding: min over vertex permutations.

    Fine for k <= 7; everything in this package that needs it is smaller.
    """
    eset = {norm_edge(u, v) for u, v in edges}
    best = None
    for perm in itertools.permutations(range(k)):
        img = tuple(sorted(norm_edge(perm[u], perm[v]) for u, v in eset))
        if best is None or img < best:
            best = img
    return (k, best)


def induced_edges(adj, vertices) -> list[tuple[int, int]]:
    vs = list(vertices)
    idx = {v: i for i, v in enumerate(vs)}
    out = []
    for i, v in enumerate(vs):
        for w in adj[v]:
            j = idx.get(w)
            if j is not None and j > i:
                out.append((i, j))
    return out


class UnionFind:
    """Disjoint sets with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def together(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)
