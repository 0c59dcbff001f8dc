"""
Hub sets: covered paths, hub construction from shortest-path trees, and the
leveled hub family used by the decremental pipelines.

A path is (B, d)-covered when it splits into segments of at most d hops with
every segment but the first starting in B. H is a d-hub set of G when every
finite-distance pair has a (H, d)-covered shortest path; an approximate hub
set only needs a covered path within a ratio of the distance.
"""
from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .blockers import BlockerMonitor, RootedTree, decompose_depth, greedy_blocker
from .errors import NotAHub, OddD, UncoveredPath
from .graph import DynamicDigraph, UpdateOp
from .sssp import EsTree, Hsssp

logger = logging.getLogger(__name__)

DEFAULT_Z = 4.0


@dataclass(frozen=True)
class HubSet:
    members: frozenset[int]
    d: int
    ratio: float = 1.0

    def __contains__(self, v: int) -> bool:
        return v in self.members

    def __len__(self) -> int:
        return len(self.members)


# -- covered paths -----------------------------------------------------------


def covering_split(path: Sequence[int], B: Iterable[int], d: int) -> Optional[list[int]]:
    """
    Greedy left-to-right split of a vertex sequence; returns the segment start
    indices, or None when the path is not (B, d)-covered. Cutting at the latest
    hub when a segment would exceed d hops is optimal.
    """
    B = set(B)
    starts = [0]
    latest_hub = None
    for i in range(1, len(path)):
        if i - starts[-1] > d:
            if latest_hub is None or latest_hub <= starts[-1]:
                return None
            starts.append(latest_hub)
        if path[i] in B:
            latest_hub = i
    return starts


def is_covered(path: Sequence[int], B: Iterable[int], d: int) -> bool:
    return covering_split(path, B, d) is not None


def split_segments(path: Sequence[int], B: Iterable[int], d: int) -> list[tuple[int, int]]:
    """
    Split a (B, d)-covered path of at least d hops into blocks (start, end) of
    d..3d hops each, every block but the first starting in B.
    """
    starts = covering_split(path, B, d)
    if starts is None:
        raise UncoveredPath(f"path is not ({d})-covered by the given set")
    hops = len(path) - 1
    if hops < d:
        return [(0, hops)]
    bounds = starts[1:] + [hops]
    blocks: list[tuple[int, int]] = []
    begin = 0
    for end in bounds:
        if end - begin >= d:
            blocks.append((begin, end))
            begin = end
    if begin < hops:
        # short tail joins the previous block: < 2d + d hops
        first, _ = blocks.pop()
        blocks.append((first, hops))
    return blocks


def extend_on_insert(H: HubSet, x: int, y: int) -> HubSet:
    if x in H.members and y in H.members:
        return H
    return HubSet(H.members | {x, y}, H.d, H.ratio)


# -- hubs from trees ---------------------------------------------------------


def exact_tree_bank(g: DynamicDigraph, d: int) -> tuple[list[EsTree], list[EsTree]]:
    """ES trees up to depth d from and to every vertex."""
    rev = g.reverse()
    from_trees = [EsTree(g, v, d) for v in range(g.n)]
    to_trees = [EsTree(rev, v, d) for v in range(g.n)]
    return from_trees, to_trees


def approx_tree_bank(g: DynamicDigraph, h: int, eps: float) -> tuple[list[Hsssp], list[Hsssp]]:
    rev = g.reverse()
    from_trees = [Hsssp(g, v, h, eps) for v in range(g.n)]
    to_trees = [Hsssp(rev, v, h, eps) for v in range(g.n)]
    return from_trees, to_trees


def hubs_from_exact_trees(trees: Iterable[RootedTree], d: int) -> HubSet:
    """A blocker of exact depth-d trees from and to every vertex is a 2d-hub set."""
    blocker = greedy_blocker(trees, d)
    return HubSet(blocker.members, 2 * d)


def hubs_from_hub_trees(H: HubSet, trees: Iterable[RootedTree], d: int) -> HubSet:
    """A blocker of depth-d trees from and to the members of a d-hub set is a 6d-hub set."""
    trees = list(trees)
    stray = [t.root for t in trees if t.root not in H.members]
    if stray:
        raise NotAHub(f"tree roots {stray[:5]} are not members of the hub set")
    blocker = greedy_blocker(trees, d)
    return HubSet(blocker.members, 6 * d)


def approx_hub_exponent(n: int) -> int:
    return math.ceil(math.log2(n)) + 1 if n > 1 else 1


def hubs_from_approx_trees(trees: Iterable[RootedTree], d: int, eps: float, n: int) -> HubSet:
    """
    Blocker with parameter d/2 over the depth-d/2 pieces of approximate trees;
    the result is a (1+eps)^p-approximate 2dp-hub set, p = ceil(log2 n) + 1.
    """
    if d % 2:
        raise OddD(f"hop parameter must be even, got {d}")
    half = d // 2
    pieces = [piece for t in trees for piece in decompose_depth(t, half)]
    blocker = greedy_blocker(pieces, half)
    p = approx_hub_exponent(n)
    return HubSet(blocker.members, 2 * d * p, (1 + eps) ** p)


# -- leveled hub family ------------------------------------------------------


@dataclass
class HubFamily:
    """
    Nested levels A_0 = V ⊇ A_1 ⊇ ... ⊇ A_q, each a prefix of one random
    permutation, with |A_i| = min(6^(q-i), n) and hop parameters d_i.
    """

    n: int
    z: float
    order: list[int]
    sizes: list[int]
    hops: list[int]
    _levels: list[frozenset[int]] = field(default=None, init=False, repr=False)

    @property
    def q(self) -> int:
        return len(self.sizes) - 1

    @classmethod
    def sample(cls, n: int, z: float = DEFAULT_Z, rng: Optional[random.Random] = None) -> "HubFamily":
        rng = rng if rng is not None else random.Random()
        order = list(range(n))
        rng.shuffle(order)
        q = math.ceil(math.log(n, 6) - 1e-12) if n > 1 else 0
        sizes = [min(6 ** (q - i), n) for i in range(q + 1)]
        if q == 0:
            hops = [max(1, n - 1)]
        else:
            base = math.ceil(z * (n / sizes[1]) * math.ceil(math.log(n)))
            hops = [max(1, min(6**i * base, n - 1)) for i in range(q + 1)]
        logger.debug("hub family n=%d z=%g sizes=%s hops=%s", n, z, sizes, hops)
        return cls(n, z, order, sizes, hops)

    def level(self, i: int) -> frozenset[int]:
        if self._levels is None:
            self._levels = [frozenset(self.order[:a]) for a in self.sizes]
        return self._levels[i]

    @property
    def levels(self) -> list[frozenset[int]]:
        return [self.level(i) for i in range(self.q + 1)]

    def shrink(self, level: int, keep: int) -> None:
        """Cut A_level (and every deeper level) down to `keep` vertices."""
        for i in range(level, self.q + 1):
            self.sizes[i] = min(self.sizes[i], keep)
        self._levels = None

    def trivially_valid(self, i: int) -> bool:
        """A hop parameter of n-1 admits every simple path as a single segment."""
        return self.hops[i] >= self.n - 1


class HubFamilyMonitor:
    """
    Watches a hub family on a decremental unweighted graph. For each level
    i >= 1, ES trees up to depth d_(i-1) from and to every member of A_(i-1)
    are mirrored into blocker monitors with B = A_i. While no monitor reports
    a violation, every A_i is a d_i-hub set of G and of rev(G).
    """

    def __init__(self, g: DynamicDigraph, family: HubFamily):
        self.g = g
        self.family = family
        rev = g.reverse()
        self._levels: list[tuple[int, list[tuple[EsTree, EsTree, BlockerMonitor, BlockerMonitor]]]] = []
        for i in range(1, family.q + 1):
            if family.trivially_valid(i):
                continue
            depth = family.hops[i - 1]
            blockers = family.level(i)
            bank = []
            for a in sorted(family.level(i - 1)):
                out_tree = EsTree(g, a, depth)
                in_tree = EsTree(rev, a, depth)
                bank.append(
                    (
                        out_tree,
                        in_tree,
                        BlockerMonitor(g.n, out_tree.parent, blockers, depth),
                        BlockerMonitor(g.n, in_tree.parent, blockers, depth),
                    )
                )
            self._levels.append((i, bank))
        logger.debug("hub family monitor watching levels %s", [i for i, _ in self._levels])

    def on_update(self, op: UpdateOp) -> None:
        """Feed an update already applied to the graph."""
        reverse_op = op.reversed()
        for _, bank in self._levels:
            for out_tree, in_tree, out_mon, in_mon in bank:
                out_tree.apply_update(op)
                out_mon.apply_parent_changes(out_tree.drain_tree_changes())
                in_tree.apply_update(reverse_op)
                in_mon.apply_parent_changes(in_tree.drain_tree_changes())

    def failing_levels(self) -> list[int]:
        failing = []
        for i, bank in self._levels:
            if any(not (om.is_blocker() and im.is_blocker()) for _, _, om, im in bank):
                failing.append(i)
        return failing

    def alarm(self) -> bool:
        return bool(self.failing_levels())

    @property
    def watched_levels(self) -> list[int]:
        return [i for i, _ in self._levels]


def hub_family_monitor(g: DynamicDigraph, z: float = DEFAULT_Z, rng: Optional[random.Random] = None) -> HubFamilyMonitor:
    return HubFamilyMonitor(g, HubFamily.sample(g.n, z, rng))
