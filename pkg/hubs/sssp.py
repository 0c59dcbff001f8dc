"""
Partially-dynamic single-source shortest-path trees with a hop/depth bound.

EsTree is the exact Even-Shiloach tree for unweighted graphs: levels equal
BFS distances up to depth d, infinity beyond.

Hsssp gives (1+eps)-approximate hop-bounded distances on weighted graphs.
For every scale bucket k it rounds weights up to integer multiples of
eps*2^k/h and keeps an h-round layered Bellman-Ford table over the rounded
weights, capped at about 2^(k+1)*(1+eps). The combined estimate is the best
bucket; the combined tree takes each vertex's predecessor in its winning
bucket, which strictly decreases the estimate toward the source.

Both structures run on any graph view exposing n, mode, weight, out_edges and
in_edges; the caller applies an update to the view first and then tells the
structure which edge changed.
"""
from __future__ import annotations

import heapq
import logging
import math
from collections import deque
from typing import Iterator, Optional

from .blockers import RootedTree
from .errors import InvalidParameter, WeightedGraph
from .graph import INF, Mode, UpdateOp

logger = logging.getLogger(__name__)


class _ChangeLog:
    """Collapses repeated changes of one vertex to (first old value, current value)."""

    def __init__(self, enabled: bool):
        self.enabled = enabled
        self._values: dict[int, float] = {}
        self._parents: dict[int, Optional[int]] = {}

    def value(self, v: int, old) -> None:
        if self.enabled and v not in self._values:
            self._values[v] = old

    def parent(self, v: int, old: Optional[int]) -> None:
        if self.enabled and v not in self._parents:
            self._parents[v] = old

    def drain_values(self, current: list) -> Iterator[tuple[int, float, float]]:
        pending, self._values = self._values, {}
        for v, old in pending.items():
            if old != current[v]:
                yield v, old, current[v]

    def drain_parents(self, current: list) -> Iterator[tuple[int, Optional[int], Optional[int]]]:
        pending, self._parents = self._parents, {}
        for v, old in pending.items():
            if old != current[v]:
                yield v, old, current[v]


class EsTree:
    def __init__(self, graph, source: int, depth: int, track_changes: bool = True):
        for u, v, w in graph.edges():
            if w != 1:
                raise WeightedGraph(f"edge ({u},{v}) has weight {w}")
        self.graph = graph
        self.source = source
        self.depth = depth
        self.level: list[float] = [INF] * graph.n
        self.parent: list[Optional[int]] = [None] * graph.n
        self.work = 0
        self._log = _ChangeLog(track_changes)
        self._build()

    @property
    def estimate(self) -> list[float]:
        return self.level

    def _build(self) -> None:
        self.level[self.source] = 0
        queue = deque([self.source])
        while queue:
            x = queue.popleft()
            if self.level[x] >= self.depth:
                continue
            for y, _ in self.graph.out_edges(x):
                self.work += 1
                if self.level[y] == INF:
                    self.level[y] = self.level[x] + 1
                    self.parent[y] = x
                    queue.append(y)

    def apply_update(self, op: UpdateOp) -> None:
        self.edge_changed(op.u, op.v)

    def edge_changed(self, u: int, v: int) -> None:
        w = self.graph.weight(u, v)
        if w == INF:
            if self.parent[v] == u:
                self._rescan(v)
        elif w != 1:
            raise WeightedGraph(f"edge ({u},{v}) now has weight {w}")
        elif self.level[u] + 1 < self.level[v] and self.level[u] + 1 <= self.depth:
            self._set(v, self.level[u] + 1, u)
            self._lower_from(v)

    def _set(self, v: int, level: float, parent: Optional[int]) -> None:
        if level != self.level[v]:
            self._log.value(v, self.level[v])
            self.level[v] = level
        if parent != self.parent[v]:
            self._log.parent(v, self.parent[v])
            self.parent[v] = parent

    def _lower_from(self, start: int) -> None:
        queue = deque([start])
        while queue:
            x = queue.popleft()
            nxt = self.level[x] + 1
            if nxt > self.depth:
                continue
            for y, _ in self.graph.out_edges(x):
                self.work += 1
                if nxt < self.level[y]:
                    self._set(y, nxt, x)
                    queue.append(y)

    def _rescan(self, start: int) -> None:
        """Repair levels after tree edge into `start` disappeared; levels only grow."""
        heap = [(self.level[start], start)]
        queued = {start}
        while heap:
            key, x = heapq.heappop(heap)
            queued.discard(x)
            if key != self.level[x]:
                continue
            best, arg = INF, None
            keep = self.parent[x]
            for p, _ in self.graph.in_edges(x):
                self.work += 1
                cand = self.level[p] + 1
                if cand < best or (cand == best and p == keep):
                    best, arg = cand, p
            if best > self.depth:
                best, arg = INF, None
            grew = best != self.level[x]
            self._set(x, best, arg)
            if not grew:
                continue
            for y, _ in self.graph.out_edges(x):
                if self.parent[y] == x and y not in queued:
                    heapq.heappush(heap, (self.level[y], y))
                    queued.add(y)

    def drain_changes(self) -> list[tuple[int, float, float]]:
        return list(self._log.drain_values(self.level))

    def drain_tree_changes(self) -> list[tuple[int, Optional[int], Optional[int]]]:
        return list(self._log.drain_parents(self.parent))

    def tree(self, max_depth: Optional[int] = None) -> RootedTree:
        limit = self.depth if max_depth is None else max_depth
        parents = {
            v: p for v, p in enumerate(self.parent) if p is not None and self.level[v] <= limit
        }
        return RootedTree(self.source, parents)

    def __repr__(self) -> str:
        reached = sum(1 for x in self.level if x != INF)
        return f"EsTree(source={self.source}, depth={self.depth}, reached={reached})"


class Hsssp:
    def __init__(
        self,
        graph,
        source: int,
        hops: int,
        eps: float,
        max_distance: Optional[float] = None,
        track_changes: bool = True,
    ):
        if hops < 1:
            raise InvalidParameter(f"hop bound must be positive, got {hops}")
        if not 0 < eps < 1:
            raise InvalidParameter(f"eps must lie in (0, 1), got {eps}")
        n = graph.n
        self.graph = graph
        self.source = source
        self.hops = hops
        self.eps = eps
        self.rounds = max(1, min(hops, n - 1))
        if max_distance is None:
            max_distance = n * graph.W
        self.max_distance = max(1.0, float(max_distance))
        self.buckets = int(math.floor(math.log2(self.max_distance))) + 1
        self.cap_units = math.floor(2 * self.rounds * (1 + eps) / eps)
        self._unit = [eps * 2**k / self.rounds for k in range(self.buckets)]
        self.work = 0

        self._dist: list[list[list[float]]] = []
        self._pred: list[list[list[Optional[int]]]] = []
        for _ in range(self.buckets):
            first = [INF] * n
            first[source] = 0
            self._dist.append([first])
            self._pred.append([[None] * n])

        self.estimate: list[float] = [INF] * n
        self.parent: list[Optional[int]] = [None] * n
        self._winner: list[Optional[int]] = [None] * n
        self._log = _ChangeLog(track_changes)
        self._build()

    def _units(self, w: float, k: int) -> float:
        if w == INF:
            return INF
        units = math.ceil(w / self._unit[k])
        return units if units <= self.cap_units else INF

    def _build(self) -> None:
        n = self.graph.n
        for k in range(self.buckets):
            for j in range(1, self.rounds + 1):
                self._dist[k].append(list(self._dist[k][j - 1]))
                self._pred[k].append(list(self._pred[k][j - 1]))
                for x in range(n):
                    if x != self.source:
                        self._dist[k][j][x], self._pred[k][j][x] = self._recompute(k, j, x)
        self.estimate[self.source] = 0
        for x in range(n):
            if x != self.source:
                self._combine(x)

    def _recompute(self, k: int, j: int, x: int) -> tuple[float, Optional[int]]:
        prev = self._dist[k][j - 1]
        best, arg = prev[x], self._pred[k][j - 1][x]
        for p, w in self.graph.in_edges(x):
            self.work += 1
            d = prev[p]
            if d == INF:
                continue
            cand = d + self._units(w, k)
            if cand < best:
                best, arg = cand, p
        if best > self.cap_units:
            return INF, None
        return best, arg

    def _combine(self, x: int) -> None:
        best, win = INF, None
        for k in range(self.buckets):
            d = self._dist[k][self.rounds][x]
            if d != INF and d * self._unit[k] < best:
                best, win = d * self._unit[k], k
        parent = self._pred[win][self.rounds][x] if win is not None else None
        if best != self.estimate[x]:
            self._log.value(x, self.estimate[x])
            self.estimate[x] = best
        if parent != self.parent[x]:
            self._log.parent(x, self.parent[x])
            self.parent[x] = parent
        self._winner[x] = win

    def apply_update(self, op: UpdateOp) -> None:
        self.edge_changed(op.u, op.v)

    def edge_changed(self, u: int, v: int) -> None:
        """Re-examine edge (u, v) of the view after its weight changed."""
        if v == self.source:
            return
        touched: set[int] = set()
        for k in range(self.buckets):
            if self.graph.mode is Mode.INCREMENTAL:
                touched |= self._relax_bucket(k, u, v)
            else:
                touched |= self._recompute_bucket(k, u, v)
        for x in touched:
            self._combine(x)

    def _relax_bucket(self, k: int, u: int, v: int) -> set[int]:
        """Decrease-only propagation; exact because every lowered entry is re-relaxed."""
        dist, pred = self._dist[k], self._pred[k]
        cap = self.cap_units
        changed: set[int] = set()
        for j in range(1, self.rounds + 1):
            prev, cur = dist[j - 1], dist[j]
            now: set[int] = set()
            for x in changed:
                if prev[x] < cur[x]:
                    cur[x] = prev[x]
                    pred[j][x] = pred[j - 1][x]
                    now.add(x)
                for y, w in self.graph.out_edges(x):
                    self.work += 1
                    cand = prev[x] + self._units(w, k)
                    if cand <= cap and cand < cur[y]:
                        cur[y] = cand
                        pred[j][y] = x
                        now.add(y)
            if prev[u] != INF:
                cand = prev[u] + self._units(self.graph.weight(u, v), k)
                if cand <= cap and cand < cur[v]:
                    cur[v] = cand
                    pred[j][v] = u
                    now.add(v)
            changed = now
        return changed

    def _recompute_bucket(self, k: int, u: int, v: int) -> set[int]:
        dist, pred = self._dist[k], self._pred[k]
        changed: set[int] = set()
        moved: set[int] = set()
        for j in range(1, self.rounds + 1):
            dirty = {v} | changed | moved
            for x in changed:
                dirty.update(y for y, _ in self.graph.out_edges(x))
            dirty.discard(self.source)
            changed, moved = set(), set()
            for x in dirty:
                best, arg = self._recompute(k, j, x)
                if best != dist[j][x]:
                    changed.add(x)
                elif arg != pred[j][x]:
                    moved.add(x)
                dist[j][x], pred[j][x] = best, arg
        return changed | moved

    def tree_parent(self, v: int) -> Optional[tuple[int, float]]:
        p = self.parent[v]
        if p is None:
            return None
        return p, self.graph.weight(p, v)

    def tree(self, max_depth: Optional[int] = None) -> RootedTree:
        """Combined tree, optionally cut at hop depth `max_depth`."""
        parents = {v: p for v, p in enumerate(self.parent) if p is not None}
        tree = RootedTree(self.source, parents)
        return tree if max_depth is None else tree.truncate(max_depth)

    def drain_changes(self) -> list[tuple[int, float, float]]:
        return list(self._log.drain_values(self.estimate))

    def drain_tree_changes(self) -> list[tuple[int, Optional[int], Optional[int]]]:
        return list(self._log.drain_parents(self.parent))

    def __repr__(self) -> str:
        return f"Hsssp(source={self.source}, hops={self.hops}, eps={self.eps:g}, buckets={self.buckets})"
