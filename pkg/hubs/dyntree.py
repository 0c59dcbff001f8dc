"""
Rooted dynamic forest over Euler tours.

Each tree is stored as its Euler tour (an enter and an exit token per vertex)
in a treap keyed by implicit position. Enter tokens carry val(v), the depth
of v inside its tree; the treap supports lazy range-add and subtree-max, which
is all link, cut and whole-tree depth need.
"""
from __future__ import annotations

import logging
import random
from typing import Optional

from .errors import IsRoot, NotARoot, SameTree

logger = logging.getLogger(__name__)

NEG_INF = float("-inf")


class _Token:
    __slots__ = ("vertex", "is_enter", "prio", "left", "right", "up", "size", "val", "best", "lazy")

    def __init__(self, vertex: int, is_enter: bool, prio: float):
        self.vertex = vertex
        self.is_enter = is_enter
        self.prio = prio
        self.left: Optional[_Token] = None
        self.right: Optional[_Token] = None
        self.up: Optional[_Token] = None
        self.size = 1
        # true value = val + lazy of every strict ancestor
        self.val = 0 if is_enter else NEG_INF
        self.best = self.val
        self.lazy = 0


def _size(t: Optional[_Token]) -> int:
    return t.size if t is not None else 0


def _best(t: Optional[_Token]) -> float:
    return t.best if t is not None else NEG_INF


def _apply(t: Optional[_Token], delta: int) -> None:
    if t is None or delta == 0:
        return
    t.val += delta
    t.best += delta
    t.lazy += delta


def _push(t: _Token) -> None:
    if t.lazy:
        _apply(t.left, t.lazy)
        _apply(t.right, t.lazy)
        t.lazy = 0


def _pull(t: _Token) -> None:
    t.size = 1 + _size(t.left) + _size(t.right)
    t.best = max(t.val, _best(t.left), _best(t.right))


def _root(t: _Token) -> _Token:
    while t.up is not None:
        t = t.up
    return t


def _index(t: _Token) -> int:
    i = _size(t.left)
    while t.up is not None:
        if t is t.up.right:
            i += _size(t.up.left) + 1
        t = t.up
    return i


class EtForest:
    """
    Forest of rooted out-trees on vertices 0..n-1, initially all singletons.

    parent, link, cut and depth run in expected O(log n). `work` counts the
    internal split/merge steps and is only used for scaling measurements.
    """

    def __init__(self, n: int, rng: Optional[random.Random] = None):
        rng = rng if rng is not None else random.Random(n)
        self.n = n
        self.work = 0
        self._parent: list[Optional[int]] = [None] * n
        self._enter = [_Token(v, True, rng.random()) for v in range(n)]
        self._exit = [_Token(v, False, rng.random()) for v in range(n)]
        for v in range(n):
            self._merge(self._enter[v], self._exit[v])

    # -- treap primitives ------------------------------------------------

    def _merge(self, a: Optional[_Token], b: Optional[_Token]) -> Optional[_Token]:
        if a is None:
            return b
        if b is None:
            return a
        self.work += 1
        if a.prio > b.prio:
            _push(a)
            a.right = self._merge(a.right, b)
            a.right.up = a
            _pull(a)
            a.up = None
            return a
        _push(b)
        b.left = self._merge(a, b.left)
        b.left.up = b
        _pull(b)
        b.up = None
        return b

    def _split(self, t: Optional[_Token], k: int) -> tuple[Optional[_Token], Optional[_Token]]:
        """Split t into its first k tokens and the rest."""
        if t is None:
            return None, None
        self.work += 1
        _push(t)
        if _size(t.left) >= k:
            left, right = self._split(t.left, k)
            t.left = right
            if right is not None:
                right.up = t
            _pull(t)
            t.up = None
            return left, t
        left, right = self._split(t.right, k - _size(t.left) - 1)
        t.right = left
        if left is not None:
            left.up = t
        _pull(t)
        t.up = None
        return t, right

    # -- queries ---------------------------------------------------------

    def parent(self, v: int) -> Optional[int]:
        return self._parent[v]

    def is_root(self, v: int) -> bool:
        return self._parent[v] is None

    def same_tree(self, u: int, v: int) -> bool:
        return _root(self._enter[u]) is _root(self._enter[v])

    def find_root(self, v: int) -> int:
        t = _root(self._enter[v])
        while t.left is not None:
            t = t.left
        return t.vertex

    def value(self, v: int) -> int:
        """val(v): number of edges on the root-to-v path."""
        t = self._enter[v]
        total = t.val
        t = t.up
        while t is not None:
            total += t.lazy
            t = t.up
        return int(total)

    def depth(self, v: int) -> int:
        """Depth of the whole tree containing v."""
        return int(_root(self._enter[v]).best)

    def tree_size(self, v: int) -> int:
        return _root(self._enter[v]).size // 2

    # -- updates ---------------------------------------------------------

    def link(self, u: int, v: int) -> None:
        """Make root u a child of v."""
        if self._parent[u] is not None:
            raise NotARoot(f"{u} has parent {self._parent[u]}")
        tu = _root(self._enter[u])
        if tu is _root(self._enter[v]):
            raise SameTree(f"{u} and {v} are in the same tree")
        _apply(tu, self.value(v) + 1)
        # splice u's tour just before exit(v) so children keep insertion order
        tv = _root(self._enter[v])
        left, right = self._split(tv, _index(self._exit[v]))
        self._merge(self._merge(left, tu), right)
        self._parent[u] = v

    def cut(self, v: int) -> None:
        """Detach the subtree of v; v becomes a root with val 0."""
        if self._parent[v] is None:
            raise IsRoot(f"{v} is a root")
        y = self.value(v)
        t = _root(self._enter[v])
        i = _index(self._enter[v])
        j = _index(self._exit[v])
        before, rest = self._split(t, i)
        middle, after = self._split(rest, j - i + 1)
        _apply(middle, -y)
        self._merge(before, after)
        self._parent[v] = None

    def __repr__(self) -> str:
        roots = sum(1 for p in self._parent if p is None)
        return f"EtForest(n={self.n}, trees={roots})"
