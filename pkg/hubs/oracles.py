"""
Brute-force reference answers used by the tests and the replay harness.

Nothing in the library proper calls into this module.
"""
from __future__ import annotations

import heapq
import math
from typing import Iterable, Optional, Sequence

import networkx as nx

from .blockers import RootedTree
from .graph import INF, view_to_networkx

RATIO_TOLERANCE = 1e-9


def oracle_dist(g, weighted: Optional[bool] = None) -> list[list[float]]:
    """Exact all-pairs distances (BFS or Dijkstra) as an n x n matrix."""
    n = g.n
    G = view_to_networkx(g)
    if weighted is None:
        weighted = any(w != 1 for _, _, w in g.edges())
    if weighted:
        lengths = nx.all_pairs_dijkstra_path_length(G, weight="weight")
    else:
        lengths = nx.all_pairs_shortest_path_length(G)
    dist = [[INF] * n for _ in range(n)]
    for s, row in lengths:
        for v, d in row.items():
            dist[s][v] = d
    return dist


def oracle_hop_dist(g, k: int, sources: Optional[Iterable[int]] = None):
    """
    delta^k: shortest lengths over paths of at most k edges, by k rounds of
    Bellman-Ford. Returns an n x n matrix, or {source: row} when `sources` is given.
    """
    n = g.n
    edges = list(g.edges())
    picked = range(n) if sources is None else list(sources)
    rows = {}
    for s in picked:
        dist = [INF] * n
        dist[s] = 0
        for _ in range(k):
            nxt = list(dist)
            for u, v, w in edges:
                if dist[u] + w < nxt[v]:
                    nxt[v] = dist[u] + w
            if nxt == dist:
                break
            dist = nxt
        rows[s] = dist
    if sources is None:
        return [rows[s] for s in range(n)]
    return rows


def oracle_is_blocker(trees: Iterable[RootedTree], B: Iterable[int], d: int) -> bool:
    """
    Naive ancestor walk: every vertex at depth kd (k >= 1) needs a member of B
    among itself and its ancestors down to depth (k-1)d.
    """
    B = set(B)
    for t in trees:
        for v, h in t.depths().items():
            if h < d or h % d:
                continue
            if not any(x in B for x in t.path_to(v)[-(d + 1):]):
                return False
    return True


def hub_oracle_exact(g, H: Iterable[int], d: int) -> bool:
    """
    Does every reachable pair have an (H, d)-covered shortest path? DP over the
    BFS DAG of each source; f(v) is the fewest hops since the start of the
    current segment over all shortest s -> v paths.
    """
    H = set(H)
    G = view_to_networkx(g)
    for s in range(g.n):
        dist = nx.single_source_shortest_path_length(G, s)
        f = {s: 0}
        for v in sorted(dist, key=dist.get):
            if v == s:
                continue
            best = math.inf
            for p in G.predecessors(v):
                if dist.get(p) != dist[v] - 1 or f[p] > d:
                    continue
                if p in H:
                    best = min(best, 1)
                elif f[p] <= d - 1:
                    best = min(best, f[p] + 1)
            if best > d:
                return False
            f[v] = best
    return True


def hub_oracle_approx(g, H: Iterable[int], d: int, ratio: float) -> bool:
    """
    Does every reachable pair have an (H, d)-covered path no longer than
    ratio * distance? Dijkstra over (vertex, hops in current segment) states.
    """
    H = set(H)
    n = g.n
    G = view_to_networkx(g)
    out = [list(g.out_edges(u)) for u in range(n)]
    for s in range(n):
        dist = nx.single_source_dijkstra_path_length(G, s, weight="weight")
        best = [INF] * n
        seen = set()
        heap = [(0.0, s, 0)]
        while heap:
            length, x, j = heapq.heappop(heap)
            if (x, j) in seen:
                continue
            seen.add((x, j))
            best[x] = min(best[x], length)
            nxt = 1 if (x in H or (x == s and j == 0)) else j + 1
            if nxt > d:
                continue
            for y, w in out[x]:
                if (y, nxt) not in seen:
                    heapq.heappush(heap, (length + w, y, nxt))
        for v, dv in dist.items():
            if v != s and best[v] > ratio * dv * (1 + RATIO_TOLERANCE):
                return False
    return True


def within_ratio(estimate: float, exact: float, ratio: float) -> bool:
    """exact <= estimate <= ratio * exact, with float slack; infinities must agree."""
    if exact == INF or estimate == INF:
        return exact == estimate
    slack = RATIO_TOLERANCE * max(1.0, exact)
    return exact - slack <= estimate <= ratio * exact + slack


def tree_path_length(g, parent: Sequence, v: int) -> float:
    """Sum of edge weights along parent pointers from v up to its root."""
    total = 0.0
    steps = 0
    while parent[v] is not None:
        p = parent[v]
        total += g.weight(p, v)
        v = p
        steps += 1
        if steps > g.n:
            raise ValueError("parent pointers contain a cycle")
    return total
