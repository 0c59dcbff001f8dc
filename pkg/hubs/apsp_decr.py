"""
Decremental all-pairs shortest paths on top of a leveled hub family.

ExactDecrApsp (unweighted): level i keeps ES trees up to depth t_(i+1) from
and to every a in A_i and the matrix min_a(to_a(u) + from_a(v)); level i is
exact for pairs whose distance lies in (t_i, t_(i+1)].

ApproxDecrApsp: level i keeps bounded-hop h-SSSP structures from and to every
member of A_i on G plus shortcut edges to A_(i+1) weighted by level i+1
estimates. Levels are refreshed top-down after every deletion.

LasVegasDecrApsp runs the hub-family monitor beside either pipeline and
rebuilds everything from a fresh family whenever the monitor alarms.
"""
from __future__ import annotations

import logging
import random
from typing import Optional

from .apsp_incr import DEFAULT_EPS, EstimateMatrix
from .errors import ModeViolation, TrialLimitExceeded
from .graph import INF, DynamicDigraph, Mode, OpKind, ShortcutView, UpdateOp
from .hub_sets import DEFAULT_Z, HubFamily, HubFamilyMonitor
from .sssp import EsTree, Hsssp

logger = logging.getLogger(__name__)


def _require_decremental(g: DynamicDigraph, op: UpdateOp) -> None:
    if g.mode is not Mode.DECREMENTAL or op.kind is OpKind.INSERT:
        raise ModeViolation(f"{op.kind.name.lower()} ({op.u},{op.v}) on a decremental pipeline")


class ExactDecrApsp:
    def __init__(self, g: DynamicDigraph, family: HubFamily):
        if g.mode is not Mode.DECREMENTAL:
            raise ModeViolation("exact decremental pipeline needs a decremental graph")
        n = g.n
        self.g = g
        self.family = family
        q = family.q
        self.thresholds = [-1] + [min(family.hops[i], n - 1) for i in range(1, q + 1)] + [n - 1]
        rev = g.reverse()
        self._trees: list[list[tuple[EsTree, EsTree]]] = []
        self._est: list[EstimateMatrix] = []
        for i in range(q + 1):
            depth = self.thresholds[i + 1]
            bank = [(EsTree(rev, a, depth), EsTree(g, a, depth)) for a in sorted(family.level(i))]
            self._trees.append(bank)
            est = EstimateMatrix(n)
            for u in range(n):
                for v in range(n):
                    if u != v:
                        est.set(u, v, self._witness_min(bank, u, v))
            est.drain_changes()
            self._est.append(est)

    @staticmethod
    def _witness_min(bank: list[tuple[EsTree, EsTree]], u: int, v: int) -> float:
        best = INF
        for to_tree, from_tree in bank:
            s = to_tree.level[u] + from_tree.level[v]
            if s < best:
                best = s
        return best

    def delete(self, op: UpdateOp) -> bool:
        _require_decremental(self.g, op)
        if not self.g.apply_update(op):
            return False
        self.after_update(op)
        return True

    def after_update(self, op: UpdateOp) -> None:
        """Refresh every level after `op` was applied to the graph."""
        reverse_op = op.reversed()
        n = self.g.n
        for bank, est in zip(self._trees, self._est):
            for to_tree, from_tree in bank:
                to_tree.apply_update(reverse_op)
                from_tree.apply_update(op)
            marked: set[tuple[int, int]] = set()
            for to_tree, from_tree in bank:
                old_to = {u: old for u, old, _ in to_tree.drain_changes()}
                old_from = {v: old for v, old, _ in from_tree.drain_changes()}
                # a cell needs a recompute when this tree pair witnessed it and its sum grew
                for u, before in old_to.items():
                    row = est.row(u)
                    for v in range(n):
                        if u == v:
                            continue
                        was = before + old_from.get(v, from_tree.level[v])
                        if was == row[v] and to_tree.level[u] + from_tree.level[v] > was:
                            marked.add((u, v))
                for v, before in old_from.items():
                    for u in range(n):
                        if u == v or u in old_to:
                            continue
                        was = to_tree.level[u] + before
                        if was == est.get(u, v) and to_tree.level[u] + from_tree.level[v] > was:
                            marked.add((u, v))
            for u, v in marked:
                est.set(u, v, self._witness_min(bank, u, v))
            est.drain_changes()

    def level_estimate(self, i: int, u: int, v: int) -> float:
        return 0 if u == v else self._est[i].get(u, v)

    def distance(self, u: int, v: int) -> float:
        if u == v:
            return 0
        return min(est.get(u, v) for est in self._est)

    estimate = distance

    def __repr__(self) -> str:
        return f"ExactDecrApsp(n={self.g.n}, levels={len(self._est)}, thresholds={self.thresholds})"


class ApproxDecrApsp:
    def __init__(self, g: DynamicDigraph, family: HubFamily, eps: float = DEFAULT_EPS):
        if g.mode is not Mode.DECREMENTAL:
            raise ModeViolation("approximate decremental pipeline needs a decremental graph")
        n = g.n
        q = family.q
        self.g = g
        self.family = family
        self.eps = eps
        self.eps_level = eps / (2 * (q + 1))
        rev = g.reverse()
        self.max_distance = 2 * n * g.W
        self._from: list[dict[int, Hsssp]] = [dict() for _ in range(q + 1)]
        self._to: list[dict[int, Hsssp]] = [dict() for _ in range(q + 1)]

        for a in sorted(family.level(q)):
            self._from[q][a] = Hsssp(g, a, max(1, n - 1), self.eps_level, self.max_distance)
            self._to[q][a] = Hsssp(rev, a, max(1, n - 1), self.eps_level, self.max_distance)
        for i in range(q - 1, -1, -1):
            hops = family.hops[i + 1] + 1
            upper = family.level(i + 1)
            for u in sorted(family.level(i)):
                out_view = ShortcutView(g, u)
                in_view = ShortcutView(rev, u)
                for v in upper:
                    out_view.set_shortcut(v, self.estimate_at(i + 1, u, v))
                    in_view.set_shortcut(v, self.estimate_at(i + 1, v, u))
                self._from[i][u] = Hsssp(out_view, u, hops, self.eps_level, self.max_distance)
                self._to[i][u] = Hsssp(in_view, u, hops, self.eps_level, self.max_distance)
        for level in self._from + self._to:
            for t in level.values():
                t.drain_changes()

    def estimate_at(self, i: int, x: int, y: int) -> float:
        """Level-i estimate, defined for pairs with an endpoint in A_i."""
        if x == y:
            return 0
        best = INF
        t = self._from[i].get(x)
        if t is not None:
            best = t.estimate[y]
        t = self._to[i].get(y)
        if t is not None and t.estimate[x] < best:
            best = t.estimate[x]
        return best

    def delete(self, op: UpdateOp) -> bool:
        _require_decremental(self.g, op)
        if not self.g.apply_update(op):
            return False
        self.after_update(op)
        return True

    def after_update(self, op: UpdateOp) -> None:
        reverse_op = op.reversed()
        changed_above: set[tuple[int, int]] = set()
        for i in range(self.family.q, -1, -1):
            for t in self._from[i].values():
                t.apply_update(op)
            for t in self._to[i].values():
                t.apply_update(reverse_op)
            if i < self.family.q:
                upper = self.family.level(i + 1)
                for x, y in sorted(changed_above):
                    t = self._from[i].get(x)
                    if t is not None and y in upper and t.graph.set_shortcut(y, self.estimate_at(i + 1, x, y)):
                        t.edge_changed(x, y)
                    t = self._to[i].get(y)
                    if t is not None and x in upper and t.graph.set_shortcut(x, self.estimate_at(i + 1, x, y)):
                        t.edge_changed(y, x)
            changed_above = set()
            for x, t in self._from[i].items():
                changed_above.update((x, v) for v, _, _ in t.drain_changes())
            for y, t in self._to[i].items():
                changed_above.update((v, y) for v, _, _ in t.drain_changes())

    def estimate(self, u: int, v: int) -> float:
        return self.estimate_at(0, u, v)

    def __repr__(self) -> str:
        return f"ApproxDecrApsp(n={self.g.n}, q={self.family.q}, eps={self.eps:g})"


class LasVegasDecrApsp:
    """
    Decremental APSP whose hub family is sampled, checked by the hub-family
    monitor after every deletion, and resampled from scratch on an alarm.
    Answers always carry the inner pipeline's contract.
    """

    def __init__(
        self,
        g: DynamicDigraph,
        eps: float = DEFAULT_EPS,
        z: float = DEFAULT_Z,
        rng: Optional[random.Random] = None,
        approximate: bool = False,
        max_restarts: Optional[int] = None,
    ):
        self.g = g
        self.eps = eps
        self.z = z
        self.rng = rng if rng is not None else random.Random()
        self.approximate = approximate
        self.max_restarts = max_restarts
        self._restarts = 0
        self._build(HubFamily.sample(g.n, z, self.rng))
        self._settle()

    def _build(self, family: HubFamily) -> None:
        self.family = family
        self.monitor = HubFamilyMonitor(self.g, family)
        if self.approximate:
            self.pipeline = ApproxDecrApsp(self.g, family, self.eps)
        else:
            self.pipeline = ExactDecrApsp(self.g, family)

    def _settle(self) -> None:
        while self.monitor.alarm():
            if self.max_restarts is not None and self._restarts >= self.max_restarts:
                raise TrialLimitExceeded(f"hub family still invalid after {self._restarts} restarts", self._restarts)
            self._restarts += 1
            logger.info(
                "hub family alarm on levels %s, restart #%d with a fresh family",
                self.monitor.failing_levels(), self._restarts,
            )
            self._build(HubFamily.sample(self.g.n, self.z, self.rng))

    def delete(self, op: UpdateOp) -> bool:
        _require_decremental(self.g, op)
        if not self.g.apply_update(op):
            return False
        self.monitor.on_update(op)
        if self.monitor.alarm():
            self._settle()
        else:
            self.pipeline.after_update(op)
        return True

    def estimate(self, u: int, v: int) -> float:
        return self.pipeline.estimate(u, v)

    def alarm(self) -> bool:
        return self.monitor.alarm()

    def restarts(self) -> int:
        return self._restarts

    def inject_fault(self, level: int, keep: int) -> bool:
        """Shrink A_level in place and rebuild on the damaged family; returns whether it alarmed."""
        self.family.shrink(level, keep)
        self._build(self.family)
        fired = self.monitor.alarm()
        self._settle()
        return fired

    def __repr__(self) -> str:
        kind = "approx" if self.approximate else "exact"
        return f"LasVegasDecrApsp(n={self.g.n}, {kind}, restarts={self._restarts})"
