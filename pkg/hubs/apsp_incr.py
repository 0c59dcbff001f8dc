"""
Incremental all-pairs shortest paths.

DenseIncrApsp stacks ceil(log2 n) layers of 2-hop h-SSSP structures, each
layer running on the complete graph of the previous layer's estimates.

SparseIncrApsp is the hub-phase pipeline: exact (or approximate) tree banks
feed a hub set, the hub graph A over that set runs a dense instance, and its
estimates become shortcut edges S_u on rev(G). Bounded-hop structures D_u on
rev(G) + S_u produce estimates that become shortcut edges R_u on G, and the
final structures D'_u on G + R_u answer queries. Every component graph only
ever gets cheaper, so the whole pipeline stays incremental.

RelaxIncrApsp is the simple matrix algorithm: estimates rounded to powers of
(1+eps1), relaxed over triples after every insertion.
"""
from __future__ import annotations

import logging
import math
import random
from typing import Callable, Iterable, Optional

from .blockers import decompose_depth, forest_from_tree, las_vegas_blocker
from .errors import BadD, ModeViolation
from .graph import INF, DynamicDigraph, EstimateView, Mode, OpKind, ShortcutView, UpdateOp, expround
from .hub_sets import (
    HubSet,
    approx_hub_exponent,
    approx_tree_bank,
    exact_tree_bank,
    extend_on_insert,
    hubs_from_approx_trees,
    hubs_from_exact_trees,
)
from .sssp import Hsssp

logger = logging.getLogger(__name__)

DEFAULT_EPS = 0.5
DEFAULT_C = 3.0


class EstimateMatrix:
    """n x n distance estimates with a change log of (u, v, first old value)."""

    def __init__(self, n: int):
        self.n = n
        self._rows = [[INF] * n for _ in range(n)]
        for v in range(n):
            self._rows[v][v] = 0
        self._log: dict[tuple[int, int], float] = {}

    def get(self, u: int, v: int) -> float:
        return self._rows[u][v]

    def row(self, u: int) -> list[float]:
        return self._rows[u]

    def set(self, u: int, v: int, value: float) -> bool:
        old = self._rows[u][v]
        if old == value:
            return False
        self._log.setdefault((u, v), old)
        self._rows[u][v] = value
        return True

    def lower(self, u: int, v: int, value: float) -> bool:
        return value < self._rows[u][v] and self.set(u, v, value)

    def drain_changes(self) -> list[tuple[int, int, float, float]]:
        pending, self._log = self._log, {}
        return [(u, v, old, self._rows[u][v]) for (u, v), old in pending.items() if old != self._rows[u][v]]

    def as_rows(self) -> list[list[float]]:
        return [list(r) for r in self._rows]


def _require_incremental(op: UpdateOp) -> None:
    if op.kind is OpKind.DELETE:
        raise ModeViolation(f"delete ({op.u},{op.v}) on an incremental pipeline")


def _layer_estimate(layer: list[Hsssp]) -> Callable[[int, int], float]:
    return lambda u, v: layer[u].estimate[v]


class DenseIncrApsp:
    def __init__(
        self,
        n: int,
        eps: float = DEFAULT_EPS,
        W: float = 1.0,
        graph: Optional[DynamicDigraph] = None,
        max_distance: Optional[float] = None,
    ):
        self.graph = graph if graph is not None else DynamicDigraph(n, Mode.INCREMENTAL, W)
        if self.graph.mode is not Mode.INCREMENTAL:
            raise ModeViolation("dense incremental pipeline needs an incremental graph")
        n = self.graph.n
        self.n = n
        self.eps = eps
        self.depth = max(1, math.ceil(math.log2(n))) if n > 1 else 1
        self.eps1 = eps / (4 * self.depth)
        self.max_distance = max_distance if max_distance is not None else 2 * n * self.graph.W

        self.layers: list[list[Hsssp]] = []
        view = self.graph
        for _ in range(self.depth):
            layer = [Hsssp(view, v, 2, self.eps1, max_distance=self.max_distance) for v in range(n)]
            self.layers.append(layer)
            view = EstimateView(n, _layer_estimate(layer), Mode.INCREMENTAL)

        self._pending: dict[tuple[int, int], float] = {}
        for layer in self.layers[:-1]:
            for t in layer:
                t.drain_changes()
        self._collect(self.layers[-1])

    def _collect(self, layer: list[Hsssp]) -> dict[tuple[int, int], float]:
        changed = {}
        for t in layer:
            for x, old, _ in t.drain_changes():
                changed[(t.source, x)] = old
        if layer is self.layers[-1]:
            for pair, old in changed.items():
                self._pending.setdefault(pair, old)
        return changed

    def insert(self, op: UpdateOp) -> bool:
        _require_incremental(op)
        if not self.graph.apply_update(op):
            return False
        self.after_updates([(op.u, op.v)])
        return True

    def after_update(self, u: int, v: int) -> None:
        self.after_updates([(u, v)])

    def after_updates(self, edges: Iterable[tuple[int, int]]) -> None:
        """Propagate edges of the base graph that just got cheaper through every layer."""
        touched = list(edges)
        for layer in self.layers:
            for t in layer:
                for u, v in touched:
                    t.edge_changed(u, v)
            touched = list(self._collect(layer))
            if not touched:
                break

    def estimate(self, u: int, v: int) -> float:
        if u == v:
            return 0
        return self.layers[-1][u].estimate[v]

    def layer_estimate(self, i: int, u: int, v: int) -> float:
        """Estimate of layer i, counting layers from 1."""
        return 0 if u == v else self.layers[i - 1][u].estimate[v]

    def drain_changes(self) -> list[tuple[int, int, float, float]]:
        pending, self._pending = self._pending, {}
        out = []
        for (u, v), old in pending.items():
            new = self.estimate(u, v)
            if new != old:
                out.append((u, v, old, new))
        return out

    def __repr__(self) -> str:
        return f"DenseIncrApsp(n={self.n}, eps={self.eps:g}, layers={self.depth})"


def auto_hop_parameter(n: int) -> int:
    """d = n^(1/3) * (ln n)^(4/3) rounded to an even number in [2, n)."""
    if n < 3:
        return 2
    raw = n ** (1 / 3) * math.log(n) ** (4 / 3)
    d = max(2, 2 * round(raw / 2))
    if d >= n:
        d = n - 1 if (n - 1) % 2 == 0 else n - 2
    return max(2, d)


class SparseIncrApsp:
    def __init__(
        self,
        n: int,
        d: Optional[int] = None,
        eps: float = DEFAULT_EPS,
        weighted: bool = False,
        W: float = 1.0,
        use_las_vegas: bool = False,
        c: float = DEFAULT_C,
        rng: Optional[random.Random] = None,
    ):
        d = auto_hop_parameter(n) if d is None else d
        if d % 2 or not 2 <= d < n:
            raise BadD(f"hop parameter d={d} must be even with 2 <= d < n={n}")
        self.n = n
        self.d = d
        self.eps = eps
        self.weighted = weighted
        self.use_las_vegas = use_las_vegas
        self.c = c
        self.rng = rng if rng is not None else random.Random(0)

        self.graph = DynamicDigraph(n, Mode.INCREMENTAL, W)
        self._rev = self.graph.reverse()
        self.p = approx_hub_exponent(n)
        self.eps1 = eps / (2 * self.p + 8) if weighted else eps / 6
        self.hub_hops = 2 * d * self.p if weighted else d
        self.phase_length = max(1, math.ceil(n / d * math.log(n)))
        self.max_distance = 2 * n * self.graph.W

        if weighted:
            self.from_bank, self.to_bank = approx_tree_bank(self.graph, 3 * d, self.eps1)
            self.pair_bank = [Hsssp(self._rev, v, self.hub_hops, self.eps1) for v in range(n)]
        else:
            self.from_bank, self.to_bank = exact_tree_bank(self.graph, d)
            self.pair_bank = self.to_bank

        h = self.hub_hops + 1
        self.S = [ShortcutView(self._rev, u) for u in range(n)]
        self.R = [ShortcutView(self.graph, u) for u in range(n)]
        self.D = [Hsssp(self.S[u], u, h, self.eps1, self.max_distance) for u in range(n)]
        self.D_final = [Hsssp(self.R[u], u, h, self.eps1, self.max_distance) for u in range(n)]

        self.phase_inserts = 0
        self.rollovers = 0
        self.hubs: HubSet = HubSet(frozenset(), self.hub_hops)
        self.hub_ids: list[int] = []
        self._index: dict[int, int] = {}
        self._changes: dict[tuple[int, int], float] = {}
        self._start_phase()

    # -- hubs and the hub graph -----------------------------------------

    def _compute_hubs(self) -> HubSet:
        half = self.d // 2
        bank = self.from_bank + self.to_bank
        if self.weighted:
            trees = [t.tree() for t in bank]
            if not self.use_las_vegas:
                return hubs_from_approx_trees(trees, self.d, self.eps1, self.n)
            pieces = [piece for t in trees for piece in decompose_depth(t, half)]
            ratio = (1 + self.eps1) ** self.p
        else:
            pieces = [t.tree(max_depth=half) for t in bank]
            if not self.use_las_vegas:
                return hubs_from_exact_trees(pieces, half)
            ratio = 1.0
        forests = [forest_from_tree(piece, self.n) for piece in pieces if piece.depth() >= half]
        blocker, trials = las_vegas_blocker(forests, self.n, half, self.c, self.rng)
        logger.debug("hub sample accepted after %d trial(s)", trials)
        return HubSet(blocker.members, self.hub_hops, ratio)

    def _label(self, u: int, v: int) -> float:
        """Hub-graph weight of u -> v: the (approximate) distance from u to v in rev(G)."""
        return self.pair_bank[u].estimate[v]

    def _start_phase(self) -> list[tuple[int, int]]:
        self.hubs = self._compute_hubs()
        self.hub_ids = sorted(self.hubs.members)
        self._index = {x: i for i, x in enumerate(self.hub_ids)}
        capacity = max(1, min(self.n, len(self.hub_ids) + 2 * self.phase_length))
        edges = []
        for a in self.hub_ids:
            for b in self.hub_ids:
                if a != b and self._label(a, b) < INF:
                    edges.append((self._index[a], self._index[b], self._label(a, b)))
        self.hub_graph = DynamicDigraph.from_edges(capacity, edges, mode=Mode.INCREMENTAL, W=self.max_distance)
        self.hub_apsp = DenseIncrApsp(capacity, self.eps1, graph=self.hub_graph, max_distance=self.max_distance)
        logger.debug(
            "phase start: |H|=%d, hub graph capacity %d with %d edges",
            len(self.hub_ids), capacity, len(edges),
        )
        return self._push_hub_estimates()

    def _join(self, x: int) -> bool:
        if x in self._index:
            return True
        if len(self.hub_ids) >= self.hub_graph.n:
            return False
        self._index[x] = len(self.hub_ids)
        self.hub_ids.append(x)
        return True

    def _refresh_hub_graph(self, label_changes: list[tuple[int, int]], joined: list[int]) -> None:
        candidates = set()
        for x in joined:
            for y in self.hub_ids:
                if y != x:
                    candidates.add((x, y))
                    candidates.add((y, x))
        for u, v in label_changes:
            if u in self._index and v in self._index:
                candidates.add((u, v))
        touched = []
        for u, v in sorted(candidates):
            w = self._label(u, v)
            iu, iv = self._index[u], self._index[v]
            if w < self.hub_graph.weight(iu, iv):
                self.hub_graph.apply_update(UpdateOp.insert(iu, iv, w))
                touched.append((iu, iv))
        if touched:
            self.hub_apsp.after_updates(touched)

    def _push_hub_estimates(self) -> list[tuple[int, int]]:
        """Lower S_u shortcuts from the hub-graph estimates that changed."""
        lowered = []
        for a, b, _, new in self.hub_apsp.drain_changes():
            u, v = self.hub_ids[a], self.hub_ids[b]
            if self.S[u].shortcut[v] > new:
                self.S[u].set_shortcut(v, new)
                lowered.append((u, v))
        return lowered

    # -- updates ---------------------------------------------------------

    def insert(self, op: UpdateOp) -> bool:
        _require_incremental(op)
        if not self.graph.apply_update(op):
            return False
        reverse_op = op.reversed()

        for t in self.from_bank:
            t.apply_update(op)
        for t in self.to_bank:
            t.apply_update(reverse_op)
        if self.weighted:
            for t in self.pair_bank:
                t.apply_update(reverse_op)
        label_changes = [(t.source, v) for t in self.pair_bank for v, _, _ in t.drain_changes()]

        self.hubs = extend_on_insert(self.hubs, op.u, op.v)
        self.phase_inserts += 1
        joined = [x for x in (op.u, op.v) if x not in self._index]
        fits = all(self._join(x) for x in joined)
        if self.phase_inserts >= self.phase_length or not fits:
            lowered = self._rollover()
        else:
            self._refresh_hub_graph(label_changes, joined)
            lowered = self._push_hub_estimates()

        for t in self.D:
            t.edge_changed(op.v, op.u)
        for u, v in lowered:
            self.D[u].edge_changed(u, v)

        r_lowered = []
        for x, t in enumerate(self.D):
            for y, _, new in t.drain_changes():
                if new < self.R[y].shortcut[x]:
                    self.R[y].set_shortcut(x, new)
                    r_lowered.append((y, x))

        for t in self.D_final:
            t.edge_changed(op.u, op.v)
        for y, x in r_lowered:
            self.D_final[y].edge_changed(y, x)
        for t in self.D_final:
            for v, old, _ in t.drain_changes():
                self._changes.setdefault((t.source, v), old)
        return True

    def _rollover(self) -> list[tuple[int, int]]:
        self.rollovers += 1
        self.phase_inserts = 0
        logger.info("phase %d complete after %d inserts, recomputing hubs", self.rollovers, self.phase_length)
        return self._start_phase()

    def estimate(self, u: int, v: int) -> float:
        if u == v:
            return 0
        return self.D_final[u].estimate[v]

    def drain_changes(self) -> list[tuple[int, int, float, float]]:
        pending, self._changes = self._changes, {}
        return [(u, v, old, self.estimate(u, v)) for (u, v), old in pending.items() if old != self.estimate(u, v)]

    def hub_estimate(self, a: int, b: int) -> float:
        """Hub-graph estimate from hub a to hub b, a distance in rev(G)."""
        return self.hub_apsp.estimate(self._index[a], self._index[b])

    @property
    def hub_count(self) -> int:
        return len(self.hubs)

    def __repr__(self) -> str:
        return (
            f"SparseIncrApsp(n={self.n}, d={self.d}, eps={self.eps:g}, weighted={self.weighted}, "
            f"|H|={self.hub_count}, phase {self.phase_inserts}/{self.phase_length})"
        )


class RelaxIncrApsp:
    """
    Keeps delta'(x, z) <= expround(delta'(x, y) + delta'(y, z)) for all triples
    and delta'(u, v) <= w(uv); estimates are hop-sensitive, which with
    eps1 = eps / (2 ceil(log2 n)) gives a (1+eps) approximation.
    """

    def __init__(self, n: int, eps: float = DEFAULT_EPS, W: float = 1.0):
        self.n = n
        self.eps = eps
        self.graph = DynamicDigraph(n, Mode.INCREMENTAL, W)
        self.eps1 = eps / (2 * max(1, math.ceil(math.log2(n)) if n > 1 else 1))
        self.base = 1 + self.eps1
        self.matrix = EstimateMatrix(n)
        self.propagations = 0

    def _rounded(self, x: float) -> float:
        return INF if x == INF else expround(x, self.base)[1]

    def _relax(self, x: int, y: int, z: int) -> bool:
        m = self.matrix
        via = m.get(x, y) + m.get(y, z)
        if via == INF:
            return False
        return m.lower(x, z, self._rounded(via))

    def insert(self, op: UpdateOp) -> bool:
        _require_incremental(op)
        if not self.graph.apply_update(op):
            return False
        if self.matrix.lower(op.u, op.v, self.graph.weight(op.u, op.v)):
            self._propagate(op.u, op.v)
        return True

    def _propagate(self, u: int, v: int) -> None:
        stack = [(u, v)]
        while stack:
            a, b = stack.pop()
            self.propagations += 1
            for t in range(self.n):
                if t == a or t == b:
                    continue
                if self._relax(a, b, t):
                    stack.append((a, t))
                if self._relax(t, a, b):
                    stack.append((t, b))

    def estimate(self, u: int, v: int) -> float:
        return self.matrix.get(u, v)

    def drain_changes(self) -> list[tuple[int, int, float, float]]:
        return self.matrix.drain_changes()
