import logging
import random

import networkx as nx
import pytest
from hypothesis import HealthCheck, assume, given, settings

from .conftest import random_graph, vertex_paths
from .errors import NotAHub, OddD, UncoveredPath
from .graph import DynamicDigraph, Mode, UpdateOp
from .hub_sets import (
    HubFamily,
    HubFamilyMonitor,
    HubSet,
    approx_hub_exponent,
    approx_tree_bank,
    covering_split,
    exact_tree_bank,
    extend_on_insert,
    hub_family_monitor,
    hubs_from_approx_trees,
    hubs_from_exact_trees,
    hubs_from_hub_trees,
    is_covered,
    split_segments,
)
from .oracles import hub_oracle_approx, hub_oracle_exact, oracle_is_blocker
from .sssp import EsTree
from .streams import gen_stream

logger = logging.getLogger(__name__)


def coverable(path, B, d):
    """Memoised search over hub cut points, independent of the greedy split."""
    hops = len(path) - 1
    memo = {}

    def from_start(i):
        if i not in memo:
            memo[i] = hops - i <= d or any(
                path[j] in B and from_start(j) for j in range(i + 1, min(i + d, hops) + 1)
            )
        return memo[i]

    return from_start(0)


def path_graph(n: int, mode: Mode = Mode.DECREMENTAL) -> DynamicDigraph:
    return DynamicDigraph.from_edges(n, [(i, i + 1, 1.0) for i in range(n - 1)], mode=mode)


# -- covered paths -------------------------------------------------------------


def test_short_path_is_covered_without_hubs():
    assert covering_split([0, 1, 2, 3], set(), 3) == [0]
    assert is_covered([4], set(), 1)


def test_long_path_without_hubs_is_not_covered():
    assert covering_split([0, 1, 2, 3, 4], set(), 3) is None


def test_split_points_are_hubs():
    path = list(range(10))
    starts = covering_split(path, {3, 6}, 3)
    assert starts == [0, 3, 6]


@settings(max_examples=200)
@given(vertex_paths())
def test_greedy_split_matches_search(data):
    path, B, d = data
    starts = covering_split(path, B, d)
    assert (starts is not None) == coverable(path, B, d)
    if starts is not None:
        ends = starts[1:] + [len(path) - 1]
        assert all(0 < e - s <= d or len(path) == 1 for s, e in zip(starts, ends))
        assert all(path[s] in B for s in starts[1:])


@settings(max_examples=100, suppress_health_check=[HealthCheck.filter_too_much])
@given(vertex_paths(), vertex_paths())
def test_covered_paths_concatenate(first, second):
    p, B1, d1 = first
    q, B2, d2 = second
    B = B1 | B2 | {q[0]}
    p = p + [q[0]]
    assume(is_covered(p, B, d1) and is_covered(q, B, d2))
    assert is_covered(p + q[1:], B, max(d1, d2))


@settings(max_examples=150, suppress_health_check=[HealthCheck.filter_too_much])
@given(vertex_paths(max_hops=30))
def test_split_segments_block_lengths(data):
    path, B, d = data
    assume(is_covered(path, B, d) and len(path) - 1 >= d)
    blocks = split_segments(path, B, d)
    assert blocks[0][0] == 0 and blocks[-1][1] == len(path) - 1
    for (s, e), (s2, _) in zip(blocks, blocks[1:]):
        assert e == s2
    for s, e in blocks:
        assert d <= e - s <= 3 * d
    assert all(path[s] in B for s, _ in blocks[1:])


def test_split_segments_rejects_uncovered_paths():
    with pytest.raises(UncoveredPath):
        split_segments(list(range(6)), set(), 2)


def test_extend_on_insert():
    H = HubSet(frozenset({1, 2}), 4)
    assert extend_on_insert(H, 1, 2) is H
    assert extend_on_insert(H, 1, 5).members == frozenset({1, 2, 5})


def test_extend_keeps_path_hubs_valid():
    g = path_graph(10, Mode.INCREMENTAL)
    d = 2
    from_trees, to_trees = exact_tree_bank(g, d)
    H = hubs_from_exact_trees([t.tree() for t in from_trees + to_trees], d)
    assert hub_oracle_exact(g, H.members, H.d)
    g.apply_update(UpdateOp.insert(0, 7))
    H = extend_on_insert(H, 0, 7)
    assert hub_oracle_exact(g, H.members, H.d)


@pytest.mark.parametrize("seed", range(3))
def test_extend_through_random_insertions(seed):
    n = 12
    g = DynamicDigraph(n, Mode.INCREMENTAL)
    H = HubSet(frozenset(), 3)
    for op in gen_stream(n, 40, mode=Mode.INCREMENTAL, seed=seed):
        g.apply_update(op)
        H = extend_on_insert(H, op.u, op.v)
        assert hub_oracle_exact(g, H.members, H.d)


# -- hub oracles -----------------------------------------------------------------


def test_oracle_exact_examples():
    d = 3
    g = path_graph(2 * d + 1)
    assert hub_oracle_exact(g, range(2 * d + 1), 1)
    assert not hub_oracle_exact(g, set(), d)
    assert hub_oracle_exact(g, {d}, d)


@pytest.mark.parametrize("seed", range(6))
def test_oracle_exact_matches_shortest_path_enumeration(seed):
    rng = random.Random(seed)
    n = 9
    g = random_graph(n, 18, seed)
    H = set(rng.sample(range(n), 2))
    d = rng.choice([1, 2])
    G = g.to_networkx()
    expected = True
    for s in range(n):
        for t in range(n):
            if s != t and nx.has_path(G, s, t):
                if not any(is_covered(p, H, d) for p in nx.all_shortest_paths(G, s, t)):
                    expected = False
    assert hub_oracle_exact(g, H, d) == expected


def two_routes() -> DynamicDigraph:
    edges = [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 4, 1.0), (4, 5, 1.0), (5, 3, 1.5)]
    return DynamicDigraph.from_edges(6, edges, W=2)


def test_oracle_approx_two_routes():
    g = two_routes()
    assert hub_oracle_approx(g, {4}, 2, 1.2)
    assert not hub_oracle_approx(g, {4}, 2, 1.1)
    assert not hub_oracle_approx(g, set(), 2, 10)


def test_oracle_approx_long_hops_need_no_hubs():
    g = random_graph(12, 40, seed=5, W=7)
    assert hub_oracle_approx(g, set(), 12, 1.0)


# -- hubs from trees -------------------------------------------------------------


def test_exact_trees_deeper_than_graph_need_no_hubs():
    g = random_graph(10, 30, seed=2)
    from_trees, to_trees = exact_tree_bank(g, 10)
    H = hubs_from_exact_trees([t.tree() for t in from_trees + to_trees], 10)
    assert len(H) == 0
    assert H.d == 20


@pytest.mark.parametrize("seed", range(4))
def test_hubs_from_exact_trees_cover_at_2d(seed):
    n, d = 40, 3
    g = random_graph(n, 90, seed)
    from_trees, to_trees = exact_tree_bank(g, d)
    H = hubs_from_exact_trees([t.tree() for t in from_trees + to_trees], d)
    assert H.d == 2 * d
    assert hub_oracle_exact(g, H.members, H.d)
    assert hub_oracle_exact(g.reverse(), H.members, H.d)


@pytest.mark.parametrize("seed", range(3))
def test_hubs_from_hub_trees_cover_at_6d(seed):
    n, d = 50, 2
    g = random_graph(n, 100, seed)
    from_trees, to_trees = exact_tree_bank(g, d)
    H = hubs_from_exact_trees([t.tree() for t in from_trees + to_trees], d)
    rev = g.reverse()
    trees = []
    for a in sorted(H.members):
        trees.append(EsTree(g, a, 2 * d).tree())
        trees.append(EsTree(rev, a, 2 * d).tree())
    H2 = hubs_from_hub_trees(H, trees, 2 * d)
    assert H2.d == 12 * d
    assert hub_oracle_exact(g, H2.members, H2.d)


def test_hubs_from_hub_trees_rejects_foreign_roots():
    g = path_graph(5)
    H = HubSet(frozenset({0}), 2)
    with pytest.raises(NotAHub):
        hubs_from_hub_trees(H, [EsTree(g, 1, 2).tree()], 2)


def test_hubs_from_approx_trees_needs_even_d():
    with pytest.raises(OddD):
        hubs_from_approx_trees([], 3, 0.1, 10)


@pytest.mark.parametrize("seed", range(4))
def test_hubs_from_approx_trees(seed):
    n, d, eps = 16, 4, 0.1
    g = random_graph(n, 50, seed, W=9)
    from_trees, to_trees = approx_tree_bank(g, 3 * d, eps)
    H = hubs_from_approx_trees([t.tree() for t in from_trees + to_trees], d, eps, n)
    p = approx_hub_exponent(n)
    assert H.d == 2 * d * p
    assert H.ratio == pytest.approx((1 + eps) ** p)
    assert hub_oracle_approx(g, H.members, H.d, H.ratio)


def test_hubs_from_exact_trees_through_the_approx_route():
    n, d = 20, 2
    g = random_graph(n, 50, seed=11)
    from_trees, to_trees = exact_tree_bank(g, 3 * d)
    H = hubs_from_approx_trees([t.tree() for t in from_trees + to_trees], d, 0.1, n)
    assert hub_oracle_exact(g, H.members, H.d)


# -- hub family ------------------------------------------------------------------


def test_family_shape():
    fam = HubFamily.sample(40, 4.0, random.Random(0))
    assert fam.q == 3
    assert fam.sizes == [40, 36, 6, 1]
    assert fam.hops == [18, 39, 39, 39]
    levels = fam.levels
    assert levels[0] == frozenset(range(40))
    assert all(levels[i + 1] <= levels[i] for i in range(fam.q))
    assert [len(a) for a in levels] == fam.sizes
    assert fam.trivially_valid(1) and not fam.trivially_valid(0)


def test_family_exact_power_of_six():
    fam = HubFamily.sample(36, 4.0, random.Random(0))
    assert fam.q == 2
    assert fam.sizes == [36, 6, 1]


def test_family_single_vertex():
    fam = HubFamily.sample(1, 4.0, random.Random(0))
    assert fam.q == 0
    assert fam.hops == [1]


def test_family_hops_grow_by_six():
    fam = HubFamily.sample(5000, 0.05, random.Random(0))
    assert all(b <= 6 * a for a, b in zip(fam.hops, fam.hops[1:]))
    assert all(1 <= h <= 4999 for h in fam.hops)


def test_family_shrink():
    fam = HubFamily.sample(40, 4.0, random.Random(1))
    fam.shrink(1, 3)
    assert fam.sizes == [40, 3, 3, 1]
    assert len(fam.level(1)) == 3
    assert fam.level(2) <= fam.level(1)


def test_monitor_on_empty_graph_never_alarms():
    g = DynamicDigraph(12, Mode.DECREMENTAL)
    mon = hub_family_monitor(g, 4.0, random.Random(0))
    assert not mon.alarm()


def small_family(n: int, keep: int, seed: int) -> HubFamily:
    order = list(range(n))
    random.Random(seed).shuffle(order)
    return HubFamily(n, 1.0, order, [n, keep], [3, 6])


@pytest.mark.parametrize("seed", range(5))
def test_monitor_silence_means_valid_hubs(seed):
    n = 20
    stream = gen_stream(n, 55, mode=Mode.DECREMENTAL, seed=seed)
    g = stream.build_graph()
    mon = HubFamilyMonitor(g, small_family(n, 12, seed))
    assert mon.watched_levels == [1]
    level1 = mon.family.level(1)
    for op in stream:
        g.apply_update(op)
        mon.on_update(op)
        _, bank = mon._levels[0]
        trees = [t.tree() for out_tree, in_tree, _, _ in bank for t in (out_tree, in_tree)]
        assert mon.alarm() == (not oracle_is_blocker(trees, level1, 3))
        if not mon.alarm():
            assert hub_oracle_exact(g, level1, 6)
            assert hub_oracle_exact(g.reverse(), level1, 6)


def test_monitor_alarms_on_a_tiny_level():
    n = 20
    g = random_graph(n, 60, seed=3)
    mon = HubFamilyMonitor(g, small_family(n, 1, 3))
    assert mon.alarm()
    assert mon.failing_levels() == [1]


def watched_levels_are_valid(g, mon):
    family = mon.family
    return all(
        hub_oracle_exact(g, family.level(i), family.hops[i])
        and hub_oracle_exact(g.reverse(), family.level(i), family.hops[i])
        for i in mon.watched_levels
    )


@pytest.mark.parametrize("seed", range(4))
def test_sampled_family_silence_means_valid_hubs(seed):
    n = 40
    stream = gen_stream(n, 160, mode=Mode.DECREMENTAL, seed=seed)
    g = stream.build_graph()
    mon = HubFamilyMonitor(g, HubFamily.sample(n, 0.1, random.Random(seed)))
    assert mon.family.hops == [1, 6, 36, 39]
    assert mon.watched_levels == [1, 2]
    alarms = spurious = 0
    for op in stream:
        g.apply_update(op)
        mon.on_update(op)
        valid = watched_levels_are_valid(g, mon)
        if not mon.alarm():
            assert valid, op
        else:
            alarms += 1
            spurious += valid
    logger.info("seed %d: %d alarm(s) over %d deletes, %d on valid levels", seed, alarms, len(stream.ops), spurious)
