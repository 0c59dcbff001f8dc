"""
Shared fixtures, hypothesis strategies and naive reference structures.
"""
from __future__ import annotations

import random
from typing import Optional

import pytest
from hypothesis import strategies as st

from .graph import DynamicDigraph, Mode
from .streams import gen_stream


class NaiveForest:
    """Parent array with O(n) walks; the reference for EtForest."""

    def __init__(self, n: int):
        self.n = n
        self.parent: list[Optional[int]] = [None] * n

    def root(self, v: int) -> int:
        while self.parent[v] is not None:
            v = self.parent[v]
        return v

    def value(self, v: int) -> int:
        steps = 0
        while self.parent[v] is not None:
            v = self.parent[v]
            steps += 1
        return steps

    def link(self, u: int, v: int) -> None:
        self.parent[u] = v

    def cut(self, v: int) -> None:
        self.parent[v] = None

    def depth(self, v: int) -> int:
        r = self.root(v)
        return max(self.value(x) for x in range(self.n) if self.root(x) == r)


def random_graph(n: int, m: int, seed: int, W: float = 1.0, mode: Mode = Mode.DECREMENTAL) -> DynamicDigraph:
    stream = gen_stream(n, m, W, Mode.DECREMENTAL, seed)
    return DynamicDigraph.from_edges(n, stream.initial, mode=mode, W=W)


@st.composite
def edge_lists(draw, min_n: int = 2, max_n: int = 10, max_w: int = 1):
    """(n, [(u, v, w), ...]) with distinct edges and no self-loops."""
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=min(len(pairs), 3 * n)))
    weights = draw(st.lists(st.integers(min_value=1, max_value=max_w), min_size=len(chosen), max_size=len(chosen)))
    return n, [(u, v, float(w)) for (u, v), w in zip(chosen, weights)]


@st.composite
def vertex_paths(draw, max_hops: int = 14, n: int = 8):
    hops = draw(st.integers(min_value=0, max_value=max_hops))
    path = draw(st.lists(st.integers(min_value=0, max_value=n - 1), min_size=hops + 1, max_size=hops + 1))
    B = draw(st.sets(st.integers(min_value=0, max_value=n - 1)))
    d = draw(st.integers(min_value=1, max_value=5))
    return path, B, d


@pytest.fixture
def rng() -> random.Random:
    return random.Random(12345)


@pytest.fixture
def triangle() -> DynamicDigraph:
    return DynamicDigraph.from_edges(3, [(0, 1, 1.0), (1, 2, 2.0), (0, 2, 4.0)], mode=Mode.DECREMENTAL, W=4)


@pytest.fixture
def chain5() -> DynamicDigraph:
    return DynamicDigraph.from_edges(5, [(i, i + 1, 1.0) for i in range(4)], mode=Mode.DECREMENTAL)
