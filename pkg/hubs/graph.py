"""
Dynamic directed graph under a partially-dynamic update stream.

A graph is either incremental (edge insertions and weight decreases) or
decremental (edge deletions and weight increases). Weights are reals in
[1, W]; no parallel edges, no self-loops. Every accepted update must actually
change the graph, which is what bounds the total number of updates once
weights are restricted to powers of (1 + eps/4).

Besides the graph itself this module holds the read-only views the
shortest-path structures run on: the reverse view, a base graph plus a star
of shortcut edges, and a complete graph whose weights come from another
structure's estimates.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Iterator, Optional

import networkx as nx

from .errors import InvalidEdge, InvalidParameter, ModeViolation, UnknownEdge

logger = logging.getLogger(__name__)

INF = math.inf


class Mode(str, enum.Enum):
    INCREMENTAL = "incremental"
    DECREMENTAL = "decremental"


class OpKind(str, enum.Enum):
    INSERT = "i"
    DELETE = "d"
    SET_WEIGHT = "w"


@dataclass(frozen=True)
class UpdateOp:
    """One update. `w` is absent for deletions; `exponent` is set on restricted weights."""

    kind: OpKind
    u: int
    v: int
    w: Optional[float] = None
    exponent: Optional[int] = None

    @classmethod
    def insert(cls, u: int, v: int, w: float = 1.0) -> "UpdateOp":
        return cls(OpKind.INSERT, u, v, float(w))

    @classmethod
    def delete(cls, u: int, v: int) -> "UpdateOp":
        return cls(OpKind.DELETE, u, v)

    @classmethod
    def set_weight(cls, u: int, v: int, w: float) -> "UpdateOp":
        return cls(OpKind.SET_WEIGHT, u, v, float(w))

    def reversed(self) -> "UpdateOp":
        return replace(self, u=self.v, v=self.u)

    @property
    def structural(self) -> bool:
        return self.kind is not OpKind.SET_WEIGHT


@dataclass
class UpdateStream:
    """A replayable update sequence; `initial` is the starting edge list of a decremental run."""

    mode: Mode
    n: int
    W: float = 1.0
    initial: list[tuple[int, int, float]] = field(default_factory=list)
    ops: list[UpdateOp] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self) -> Iterator[UpdateOp]:
        return iter(self.ops)

    def build_graph(self) -> "DynamicDigraph":
        return DynamicDigraph.from_edges(self.n, self.initial, mode=self.mode, W=self.W)


class DynamicDigraph:
    def __init__(self, n: int, mode: Mode = Mode.INCREMENTAL, W: float = 1.0):
        if n < 1:
            raise InvalidEdge(f"graph needs at least one vertex, got n={n}")
        if W < 1:
            raise InvalidEdge(f"weight bound W must be >= 1, got {W}")
        self.n = n
        self.mode = Mode(mode)
        self.W = float(W)
        self._out: list[dict[int, float]] = [{} for _ in range(n)]
        self._in: list[dict[int, float]] = [{} for _ in range(n)]
        # (u, v) -> i for edges whose weight came from a restricted op, w = base**i
        self._exponent: dict[tuple[int, int], int] = {}
        self.update_count = 0

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int, float]],
        mode: Mode = Mode.DECREMENTAL,
        W: float = 1.0,
    ) -> "DynamicDigraph":
        """Build a starting graph; the initial edges are not counted as updates."""
        g = cls(n, mode=mode, W=W)
        for u, v, w in edges:
            g._check_endpoints(u, v)
            g._store(u, v, g._check_weight(w))
        return g

    # -- queries ---------------------------------------------------------

    def weight(self, u: int, v: int) -> float:
        return self._out[u].get(v, INF)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._out[u]

    def weight_exponent(self, u: int, v: int) -> Optional[int]:
        """Exponent of a restricted weight, or None when the weight was set unrounded."""
        return self._exponent.get((u, v))

    def out_edges(self, u: int) -> Iterable[tuple[int, float]]:
        return self._out[u].items()

    def in_edges(self, v: int) -> Iterable[tuple[int, float]]:
        return self._in[v].items()

    def edges(self) -> Iterator[tuple[int, int, float]]:
        for u in range(self.n):
            for v, w in self._out[u].items():
                yield u, v, w

    @property
    def edge_count(self) -> int:
        return sum(len(adj) for adj in self._out)

    def is_unweighted(self) -> bool:
        return all(w == 1 for _, _, w in self.edges())

    def reverse(self) -> "ReverseView":
        return ReverseView(self)

    def copy(self) -> "DynamicDigraph":
        g = DynamicDigraph.from_edges(self.n, self.edges(), mode=self.mode, W=self.W)
        g._exponent = dict(self._exponent)
        g.update_count = self.update_count
        return g

    def to_networkx(self) -> nx.DiGraph:
        return view_to_networkx(self)

    # -- updates ---------------------------------------------------------

    def apply_update(self, op: UpdateOp) -> bool:
        """Apply `op`; returns whether the graph changed."""
        u, v = op.u, op.v
        self._check_endpoints(u, v)
        current = self._out[u].get(v)

        if self.mode is Mode.INCREMENTAL:
            if op.kind is OpKind.DELETE:
                raise ModeViolation(f"delete ({u},{v}) on an incremental graph")
            w = self._check_weight(op.w)
            if current is None:
                if op.kind is OpKind.SET_WEIGHT:
                    raise UnknownEdge(f"set weight on absent edge ({u},{v})")
            else:
                step = self._step(u, v, op, w, current)
                if step > 0:
                    raise ModeViolation(f"weight increase ({u},{v}) {current} -> {w} on an incremental graph")
                if step == 0:
                    return False
            self._store(u, v, w, op.exponent)
        else:
            if op.kind is OpKind.INSERT:
                raise ModeViolation(f"insert ({u},{v}) on a decremental graph")
            if current is None:
                raise UnknownEdge(f"edge ({u},{v}) is not in the graph")
            if op.kind is OpKind.DELETE:
                del self._out[u][v]
                del self._in[v][u]
                self._exponent.pop((u, v), None)
            else:
                w = self._check_weight(op.w)
                step = self._step(u, v, op, w, current)
                if step < 0:
                    raise ModeViolation(f"weight decrease ({u},{v}) {current} -> {w} on a decremental graph")
                if step == 0:
                    return False
                self._store(u, v, w, op.exponent)

        self.update_count += 1
        return True

    def audit(self) -> list[str]:
        """Structural self-check; returns a list of problems, empty when consistent."""
        problems = []
        for u in range(self.n):
            for v, w in self._out[u].items():
                if u == v:
                    problems.append(f"self-loop at {u}")
                if self._in[v].get(u) != w:
                    problems.append(f"in/out mismatch on ({u},{v})")
                if not 1 <= w <= self.W:
                    problems.append(f"weight {w} of ({u},{v}) outside [1, {self.W}]")
        in_total = sum(len(adj) for adj in self._in)
        if in_total != self.edge_count:
            problems.append(f"in-degree sum {in_total} != out-degree sum {self.edge_count}")
        return problems

    def _step(self, u: int, v: int, op: UpdateOp, w: float, current: float) -> int:
        """Sign of the weight change; two restricted weights compare on their exponents."""
        known = self._exponent.get((u, v))
        if op.exponent is not None and known is not None:
            return (op.exponent > known) - (op.exponent < known)
        return (w > current) - (w < current)

    def _store(self, u: int, v: int, w: float, exponent: Optional[int] = None) -> None:
        self._out[u][v] = w
        self._in[v][u] = w
        if exponent is None:
            self._exponent.pop((u, v), None)
        else:
            self._exponent[(u, v)] = exponent

    def _check_endpoints(self, u: int, v: int) -> None:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise InvalidEdge(f"edge ({u},{v}) has an endpoint outside [0, {self.n})")
        if u == v:
            raise InvalidEdge(f"self-loop at {u}")

    def _check_weight(self, w: Optional[float]) -> float:
        if w is None or not 1 <= w <= self.W:
            raise InvalidEdge(f"weight {w} outside [1, {self.W}]")
        return float(w)

    def __repr__(self) -> str:
        return f"DynamicDigraph(n={self.n}, m={self.edge_count}, mode={self.mode.value}, W={self.W:g})"


class ReverseView:
    """rev(G): every edge flipped, weights kept. Shares state with the base graph."""

    def __init__(self, base: DynamicDigraph):
        self.base = base

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def mode(self) -> Mode:
        return self.base.mode

    @property
    def W(self) -> float:
        return self.base.W

    @property
    def update_count(self) -> int:
        return self.base.update_count

    def weight(self, u: int, v: int) -> float:
        return self.base.weight(v, u)

    def has_edge(self, u: int, v: int) -> bool:
        return self.base.has_edge(v, u)

    def out_edges(self, u: int) -> Iterable[tuple[int, float]]:
        return self.base.in_edges(u)

    def in_edges(self, v: int) -> Iterable[tuple[int, float]]:
        return self.base.out_edges(v)

    def edges(self) -> Iterator[tuple[int, int, float]]:
        for u, v, w in self.base.edges():
            yield v, u, w

    def is_unweighted(self) -> bool:
        return self.base.is_unweighted()

    def reverse(self) -> DynamicDigraph:
        return self.base

    def apply_update(self, op: UpdateOp) -> bool:
        return self.base.apply_update(op.reversed())


def reverse_view(g: DynamicDigraph) -> ReverseView:
    return ReverseView(g)


class ShortcutView:
    """
    A base graph plus n shortcut edges center -> v.

    Shortcut weights start infinite; parallel edges collapse to the smaller
    weight. Callers keep the shortcut weights monotone in the base graph's mode.
    """

    def __init__(self, base, center: int):
        self.base = base
        self.center = center
        self.shortcut = [INF] * base.n

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def mode(self) -> Mode:
        return self.base.mode

    @property
    def W(self) -> float:
        return self.base.W

    def set_shortcut(self, v: int, w: float) -> bool:
        if v == self.center or self.shortcut[v] == w:
            return False
        self.shortcut[v] = w
        return True

    def weight(self, u: int, v: int) -> float:
        w = self.base.weight(u, v)
        if u == self.center:
            w = min(w, self.shortcut[v])
        return w

    def out_edges(self, u: int) -> Iterable[tuple[int, float]]:
        if u != self.center:
            return self.base.out_edges(u)
        best = dict(self.base.out_edges(u))
        for v, w in enumerate(self.shortcut):
            if w < best.get(v, INF):
                best[v] = w
        return best.items()

    def in_edges(self, v: int) -> Iterable[tuple[int, float]]:
        s = self.shortcut[v]
        if s == INF:
            return self.base.in_edges(v)
        merged = dict(self.base.in_edges(v))
        merged[self.center] = min(merged.get(self.center, INF), s)
        return merged.items()

    def edges(self) -> Iterator[tuple[int, int, float]]:
        for u in range(self.n):
            for v, w in self.out_edges(u):
                yield u, v, w


class EstimateView:
    """Complete graph on n vertices with w(u, v) = estimate(u, v); infinite entries are absent edges."""

    def __init__(self, n: int, estimate: Callable[[int, int], float], mode: Mode = Mode.INCREMENTAL):
        self.n = n
        self.mode = mode
        self._estimate = estimate

    def weight(self, u: int, v: int) -> float:
        return INF if u == v else self._estimate(u, v)

    def out_edges(self, u: int) -> Iterator[tuple[int, float]]:
        for v in range(self.n):
            if v != u:
                w = self._estimate(u, v)
                if w < INF:
                    yield v, w

    def in_edges(self, v: int) -> Iterator[tuple[int, float]]:
        for u in range(self.n):
            if u != v:
                w = self._estimate(u, v)
                if w < INF:
                    yield u, w

    def edges(self) -> Iterator[tuple[int, int, float]]:
        for u in range(self.n):
            for v, w in self.out_edges(u):
                yield u, v, w


def view_to_networkx(view) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(range(view.n))
    g.add_weighted_edges_from(view.edges())
    return g


# -- restricted weights ------------------------------------------------------


def expround(x: float, base: float) -> tuple[int, float]:
    """Round x >= 1 up to the nearest power of `base`; returns (exponent, power)."""
    if x <= 1:
        return 0, 1.0
    i = math.ceil(math.log(x) / math.log(base))
    # float log can land one off either way
    while base**i < x:
        i += 1
    while i > 0 and base ** (i - 1) >= x:
        i -= 1
    return i, base**i


def round_weights_restricted(stream: UpdateStream, eps: float) -> UpdateStream:
    """
    Restrict a stream to weights (1+eps/4)^i, rounding every weight up.

    Ops whose rounded weight equals the edge's current rounded weight are
    dropped, so every surviving op changes the rounded graph.
    """
    if not 0 < eps < 1:
        raise InvalidParameter(f"eps must lie in (0, 1), got {eps}")
    base = 1 + eps / 4
    current: dict[tuple[int, int], int] = {}

    initial = []
    for u, v, w in stream.initial:
        i, rounded = expround(w, base)
        current[(u, v)] = i
        initial.append((u, v, rounded))

    ops = []
    for op in stream.ops:
        key = (op.u, op.v)
        if op.kind is OpKind.DELETE:
            current.pop(key, None)
            ops.append(op)
            continue
        i, rounded = expround(op.w, base)
        if current.get(key) == i:
            continue
        current[key] = i
        ops.append(replace(op, w=rounded, exponent=i))

    _, bound = expround(stream.W, base)
    dropped = len(stream.ops) - len(ops)
    if dropped:
        logger.debug("restricted rounding dropped %d of %d ops", dropped, len(stream.ops))
    return UpdateStream(stream.mode, stream.n, bound, initial, ops)
