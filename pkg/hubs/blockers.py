"""
Blocker sets of rooted tree collections.

A set B blocks a tree T at depth d when every vertex at depth exactly d has
itself or an ancestor in B. Deep trees are first cut into pieces of depth at
most d (decompose_depth) and B must block every piece.

This module computes blockers greedily, samples and verifies them (Las Vegas),
and monitors a fixed B while the underlying forest changes.
"""
from __future__ import annotations

import heapq
import logging
import math
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .dyntree import EtForest
from .errors import DepthExceeded, InvalidParameter, TrialLimitExceeded

logger = logging.getLogger(__name__)

DEFAULT_MAX_TRIALS = 64


@dataclass(frozen=True)
class RootedTree:
    """An out-tree given by parent pointers; every non-root vertex maps to its parent."""

    root: int
    parent: dict[int, int]
    _children: dict[int, list[int]] = field(default=None, init=False, repr=False, compare=False)
    _depths: dict[int, int] = field(default=None, init=False, repr=False, compare=False)

    @property
    def vertices(self) -> list[int]:
        return [self.root, *self.parent]

    def __len__(self) -> int:
        return 1 + len(self.parent)

    def __contains__(self, v: int) -> bool:
        return v == self.root or v in self.parent

    def children(self) -> dict[int, list[int]]:
        if self._children is None:
            kids: dict[int, list[int]] = {v: [] for v in self.vertices}
            for v, p in self.parent.items():
                kids[p].append(v)
            object.__setattr__(self, "_children", kids)
        return self._children

    def depths(self) -> dict[int, int]:
        """Hop depth of every vertex reachable from the root through `parent`."""
        if self._depths is None:
            kids = self.children()
            depth = {self.root: 0}
            queue = deque([self.root])
            while queue:
                x = queue.popleft()
                for y in kids[x]:
                    depth[y] = depth[x] + 1
                    queue.append(y)
            object.__setattr__(self, "_depths", depth)
        return self._depths

    def depth(self) -> int:
        return max(self.depths().values())

    def subtree(self, v: int) -> Iterator[int]:
        kids = self.children()
        stack = [v]
        while stack:
            x = stack.pop()
            yield x
            stack.extend(kids[x])

    def path_to(self, v: int) -> list[int]:
        """Root-to-v vertex sequence."""
        path = [v]
        while path[-1] != self.root:
            path.append(self.parent[path[-1]])
        path.reverse()
        return path

    def truncate(self, max_depth: int) -> "RootedTree":
        depth = self.depths()
        return RootedTree(self.root, {v: p for v, p in self.parent.items() if depth.get(v, max_depth + 1) <= max_depth})


@dataclass(frozen=True)
class BlockerSet:
    members: frozenset[int]
    d: int

    def __contains__(self, v: int) -> bool:
        return v in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))


def size_bound(n: int, d: int) -> float:
    """Empirical greedy size ceiling 4*(n/d)*ln n + 1."""
    return 4 * (n / d) * math.log(n) + 1 if n > 1 else 1


def greedy_blocker(trees: Iterable[RootedTree], d: int) -> BlockerSet:
    """
    Greedy (T, d)-blocker: repeatedly take the vertex above the most uncovered
    depth-d vertices, summed over all trees; ties go to the lowest vertex id.
    """
    trees = list(trees)
    score: dict[int, int] = {}
    alive: list[set[int]] = []
    for t in trees:
        depth = t.depths()
        deepest = max(depth.values())
        if deepest > d:
            raise DepthExceeded(f"tree rooted at {t.root} has depth {deepest} > {d}")
        targets = {v for v, h in depth.items() if h == d}
        alive.append(targets)
        for x in targets:
            for a in t.path_to(x):
                score[a] = score.get(a, 0) + 1

    heap = [(-s, v) for v, s in score.items()]
    heapq.heapify(heap)
    chosen: set[int] = set()
    while heap:
        neg, v = heapq.heappop(heap)
        if -neg != score.get(v, 0) or v in chosen:
            continue
        if score[v] == 0:
            break
        chosen.add(v)
        touched: set[int] = set()
        for t, targets in zip(trees, alive):
            if v not in t or not targets:
                continue
            for x in t.subtree(v):
                if x not in targets:
                    continue
                targets.discard(x)
                for a in t.path_to(x):
                    score[a] -= 1
                    touched.add(a)
        for a in touched:
            if score[a] > 0 and a not in chosen:
                heapq.heappush(heap, (-score[a], a))

    logger.debug("greedy blocker: %d trees, d=%d, |B|=%d", len(trees), d, len(chosen))
    return BlockerSet(frozenset(chosen), d)


def decompose_depth(tree: RootedTree, d: int) -> list[RootedTree]:
    """
    Cut `tree` into pieces of depth <= d rooted at the root and at every
    non-leaf vertex whose depth is a multiple of d.
    """
    depth = tree.depths()
    kids = tree.children()
    roots = [tree.root] + [x for x, h in depth.items() if x != tree.root and h % d == 0 and kids[x]]
    pieces = []
    for r in roots:
        base = depth[r]
        parents = {}
        stack = [r]
        while stack:
            x = stack.pop()
            if depth[x] - base == d:
                continue
            for y in kids[x]:
                parents[y] = x
                stack.append(y)
        pieces.append(RootedTree(r, parents))
    return pieces


def sample_candidate(n: int, d: int, c: float, rng: random.Random) -> frozenset[int]:
    """Uniform subset of size min(ceil(c*(n/d)*ln n), n)."""
    if c <= 1:
        raise InvalidParameter(f"sampling constant c must exceed 1, got {c}")
    size = min(math.ceil(c * n / d * math.log(n)), n) if n > 1 else 0
    return frozenset(rng.sample(range(n), size))


@dataclass
class ForestTree:
    """One tree stored in its own EtForest."""

    forest: EtForest
    root: int


def forest_from_tree(tree: RootedTree, n: int, rng: Optional[random.Random] = None) -> ForestTree:
    forest = EtForest(n, rng=rng)
    for v, p in tree.parent.items():
        forest.link(v, p)
    return ForestTree(forest, tree.root)


def verify_blocker(forest_trees: Sequence[ForestTree], B: Iterable[int], d: int) -> bool:
    """
    Check B against trees of depth <= d: detach every member of B from the
    tree, test that the root's remaining tree is shallower than d, reattach.
    """
    members = sorted(set(B))
    for ft in forest_trees:
        if ft.root in members:
            continue
        forest = ft.forest
        detached = []
        for b in members:
            p = forest.parent(b)
            if p is not None and forest.same_tree(b, ft.root):
                forest.cut(b)
                detached.append((b, p))
        ok = forest.depth(ft.root) < d
        for b, p in reversed(detached):
            forest.link(b, p)
        if not ok:
            return False
    return True


def las_vegas_blocker(
    forest_trees: Sequence[ForestTree],
    n: int,
    d: int,
    c: float,
    rng: random.Random,
    max_trials: Optional[int] = DEFAULT_MAX_TRIALS,
) -> tuple[BlockerSet, int]:
    """Sample candidates until one verifies; returns the blocker and the trial count."""
    trials = 0
    while max_trials is None or trials < max_trials:
        trials += 1
        candidate = sample_candidate(n, d, c, rng)
        if verify_blocker(forest_trees, candidate, d):
            logger.debug("las vegas blocker accepted after %d trial(s), |B|=%d", trials, len(candidate))
            return BlockerSet(candidate, d), trials
        logger.debug("las vegas blocker trial %d rejected", trials)
    raise TrialLimitExceeded(f"no blocker found in {trials} trials (n={n}, d={d}, c={c})", trials)


class BlockerMonitor:
    """
    Tracks whether a fixed B blocks a changing forest at depth d.

    Internally the forest is kept with every edge into a member of B removed,
    so members of B are only ever roots of pieces. A piece whose root is not
    in B contains exactly the unblocked vertices of one real tree, at their
    real depths; B is a blocker iff every such piece is shallower than d.
    """

    def __init__(
        self,
        n: int,
        parents: Sequence[Optional[int]],
        B: Iterable[int],
        d: int,
        rng: Optional[random.Random] = None,
    ):
        self.n = n
        self.B = frozenset(B)
        self.d = d
        self._parent: list[Optional[int]] = list(parents)
        self._pieces = EtForest(n, rng=rng)
        self._violating: set[int] = set()
        for v, p in enumerate(self._parent):
            if p is not None and v not in self.B:
                self._pieces.link(v, p)
        for v in range(n):
            if self._pieces.is_root(v):
                self._refresh(v)

    def _refresh(self, piece_root: int) -> None:
        if piece_root not in self.B and self._pieces.depth(piece_root) >= self.d:
            self._violating.add(piece_root)
        else:
            self._violating.discard(piece_root)

    def parent(self, v: int) -> Optional[int]:
        return self._parent[v]

    def on_cut(self, v: int) -> None:
        self._parent[v] = None
        if v in self.B:
            return
        top = self._pieces.find_root(v)
        self._pieces.cut(v)
        self._refresh(top)
        self._refresh(v)

    def on_link(self, r: int, v: int) -> None:
        self._parent[r] = v
        if r in self.B:
            return
        self._violating.discard(r)
        self._pieces.link(r, v)
        self._refresh(self._pieces.find_root(v))

    def apply_parent_changes(self, changes: Iterable[tuple[int, Optional[int], Optional[int]]]) -> None:
        """Mirror a batch of (v, old parent, new parent): cut everything, then link."""
        net: dict[int, tuple[Optional[int], Optional[int]]] = {}
        for v, old, new in changes:
            first = net[v][0] if v in net else old
            net[v] = (first, new)
        moved = [(v, new) for v, (old, new) in net.items() if old != new]
        for v, _ in moved:
            if self._parent[v] is not None:
                self.on_cut(v)
        for v, new in moved:
            if new is not None:
                self.on_link(v, new)

    def is_blocker(self) -> bool:
        return not self._violating

    def __repr__(self) -> str:
        return f"BlockerMonitor(n={self.n}, |B|={len(self.B)}, d={self.d}, ok={self.is_blocker()})"


def blocker_monitor(forest: EtForest, B: Iterable[int], d: int) -> BlockerMonitor:
    return BlockerMonitor(forest.n, [forest.parent(v) for v in range(forest.n)], B, d)
