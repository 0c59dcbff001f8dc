import random

import pytest

from .apsp_decr import ApproxDecrApsp, ExactDecrApsp, LasVegasDecrApsp
from .conftest import random_graph
from .errors import ModeViolation, TrialLimitExceeded, UnknownEdge
from .graph import INF, DynamicDigraph, Mode, UpdateOp
from .hub_sets import HubFamily
from .oracles import RATIO_TOLERANCE, oracle_dist, within_ratio
from .streams import gen_stream


def path_graph(n: int) -> DynamicDigraph:
    return DynamicDigraph.from_edges(n, [(i, i + 1, 1.0) for i in range(n - 1)])


def assert_exact(algo, g):
    dist = oracle_dist(g, weighted=False)
    for u in range(g.n):
        for v in range(g.n):
            assert algo.estimate(u, v) == dist[u][v], (u, v)


def assert_approx(algo, g, ratio):
    dist = oracle_dist(g)
    for u in range(g.n):
        for v in range(g.n):
            got = algo.estimate(u, v)
            assert within_ratio(got, dist[u][v], ratio), (u, v, got, dist[u][v])


def guarded_path_graph(n: int = 36) -> DynamicDigraph:
    """One 3-hop path 0 -> 1 -> 2 -> 3 beside a star of short paths rooted at 4."""
    edges = [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]
    edges += [(4, v, 1.0) for v in range(5, n)]
    edges += [(5, 6, 1.0), (7, 8, 1.0)]
    return DynamicDigraph.from_edges(n, edges)


def disjoint_paths_graph(n: int = 36) -> DynamicDigraph:
    """n/4 disjoint 3-hop paths; a 6-vertex level can never block all of them."""
    edges = [(v, v + 1, 1.0) for v in range(n) if v % 4 != 3]
    return DynamicDigraph.from_edges(n, edges)


# -- exact ---------------------------------------------------------------------


def test_exact_path_delete():
    g = path_graph(5)
    algo = ExactDecrApsp(g, HubFamily.sample(5, 4.0, random.Random(0)))
    assert algo.distance(3, 3) == 0
    assert algo.distance(0, 4) == 4
    assert algo.delete(UpdateOp.delete(1, 2))
    assert algo.distance(0, 4) == INF
    assert algo.distance(0, 1) == 1
    assert algo.distance(2, 4) == 2


def test_exact_rejects_inserts_and_unknown_edges():
    g = path_graph(4)
    algo = ExactDecrApsp(g, HubFamily.sample(4, 4.0, random.Random(0)))
    with pytest.raises(ModeViolation):
        algo.delete(UpdateOp.insert(3, 0))
    with pytest.raises(UnknownEdge):
        algo.delete(UpdateOp.delete(3, 0))
    with pytest.raises(ModeViolation):
        ExactDecrApsp(DynamicDigraph(4, Mode.INCREMENTAL), HubFamily.sample(4, 4.0, random.Random(0)))


@pytest.mark.parametrize("seed", range(5))
def test_exact_random_teardown(seed):
    n = 20
    stream = gen_stream(n, 60, mode=Mode.DECREMENTAL, seed=seed)
    g = stream.build_graph()
    algo = ExactDecrApsp(g, HubFamily.sample(n, 4.0, random.Random(seed)))
    assert_exact(algo, g)
    for op in stream:
        algo.delete(op)
        assert_exact(algo, g)


@pytest.mark.parametrize("seed", range(4))
def test_exact_level_intervals(seed):
    n = 24
    order = list(range(n))
    random.Random(seed).shuffle(order)
    family = HubFamily(n, 1.0, order, [n, 6, 1], [2, 4, n - 1])
    stream = gen_stream(n, 70, mode=Mode.DECREMENTAL, seed=seed)
    g = stream.build_graph()
    algo = ExactDecrApsp(g, family)
    assert algo.thresholds == [-1, 4, n - 1, n - 1]
    for op in stream:
        algo.delete(op)
        dist = oracle_dist(g, weighted=False)
        for u in range(n):
            for v in range(n):
                assert algo.distance(u, v) >= dist[u][v]
                if dist[u][v] <= 4:
                    assert algo.level_estimate(0, u, v) == dist[u][v]
                for i in range(3):
                    assert algo.level_estimate(i, u, v) >= dist[u][v]


# -- approximate ---------------------------------------------------------------


def test_approx_single_edge():
    g = DynamicDigraph.from_edges(2, [(0, 1, 5.0)], W=8)
    algo = ApproxDecrApsp(g, HubFamily.sample(2, 4.0, random.Random(0)), eps=0.5)
    assert 5 <= algo.estimate(0, 1) <= 7.5
    assert algo.estimate(1, 0) == INF
    assert algo.delete(UpdateOp.set_weight(0, 1, 8))
    assert 8 <= algo.estimate(0, 1) <= 12
    algo.delete(UpdateOp.delete(0, 1))
    assert algo.estimate(0, 1) == INF


@pytest.mark.parametrize("seed", range(4))
def test_approx_weighted_teardown(seed):
    n, eps = 14, 0.5
    stream = gen_stream(n, 45, W=8, mode=Mode.DECREMENTAL, seed=seed, weight_changes=15)
    g = stream.build_graph()
    algo = ApproxDecrApsp(g, HubFamily.sample(n, 4.0, random.Random(seed)), eps=eps)
    assert_approx(algo, g, 1 + eps)
    for op in stream:
        before = [[algo.estimate(u, v) for v in range(n)] for u in range(n)]
        algo.delete(op)
        assert_approx(algo, g, 1 + eps)
        for u in range(n):
            for v in range(n):
                assert algo.estimate(u, v) >= before[u][v]


def assert_level_bounds(algo, g):
    q = algo.family.q
    dist = oracle_dist(g)
    for i in range(q + 1):
        slack = (1 + algo.eps_level) ** (q - i + 1) * (1 + RATIO_TOLERANCE)
        members = algo.family.level(i)
        for x in range(g.n):
            for y in range(g.n):
                if x not in members and y not in members:
                    continue
                got, exact = algo.estimate_at(i, x, y), dist[x][y]
                if exact == INF:
                    assert got == INF, (i, x, y, got)
                else:
                    assert exact * (1 - RATIO_TOLERANCE) <= got <= slack * exact, (i, x, y, got, exact)


@pytest.mark.parametrize("seed", range(3))
def test_approx_levels_stay_within_their_slack(seed):
    n = 14
    stream = gen_stream(n, 45, W=8, mode=Mode.DECREMENTAL, seed=seed, weight_changes=15)
    g = stream.build_graph()
    algo = ApproxDecrApsp(g, HubFamily.sample(n, 4.0, random.Random(seed)), eps=0.5)
    assert algo.family.sizes == [14, 6, 1]
    assert_level_bounds(algo, g)
    for op in stream:
        algo.delete(op)
        assert_level_bounds(algo, g)


def test_approx_rejects_inserts():
    g = path_graph(4)
    algo = ApproxDecrApsp(g, HubFamily.sample(4, 4.0, random.Random(0)))
    with pytest.raises(ModeViolation):
        algo.delete(UpdateOp.insert(3, 0))


# -- Las Vegas -------------------------------------------------------------------


@pytest.mark.parametrize("seed", range(3))
def test_las_vegas_without_alarms_matches_exact(seed):
    n = 20
    stream = gen_stream(n, 60, mode=Mode.DECREMENTAL, seed=seed)
    g = stream.build_graph()
    algo = LasVegasDecrApsp(g, rng=random.Random(seed))
    assert algo.monitor.watched_levels == []
    for op in stream:
        algo.delete(op)
        assert not algo.alarm()
        assert_exact(algo, g)
    assert algo.restarts() == 0


def test_family_for_guarded_graph_watches_level_one():
    fam = HubFamily.sample(36, 0.1, random.Random(0))
    assert fam.sizes == [36, 6, 1]
    assert fam.hops == [3, 18, 35]


def test_family_at_replay_scale_watches_level_one():
    fam = HubFamily.sample(40, 0.3, random.Random(0))
    assert fam.sizes == [40, 36, 6, 1]
    assert fam.hops == [2, 12, 39, 39]


def test_las_vegas_restarts_on_dense_graphs():
    total = 0
    for seed in range(12):
        algo = LasVegasDecrApsp(random_graph(40, 400, seed), z=0.3, rng=random.Random(seed))
        assert algo.monitor.watched_levels == [1]
        assert not algo.alarm()
        total += algo.restarts()
    assert total > 0


@pytest.mark.parametrize("seed", range(5))
def test_las_vegas_injected_fault_fires_and_recovers(seed):
    g = guarded_path_graph()
    algo = LasVegasDecrApsp(g, z=0.1, rng=random.Random(seed))
    assert algo.monitor.watched_levels == [1]
    assert not algo.alarm()
    restarts = algo.restarts()

    assert algo.inject_fault(1, 0)
    assert algo.restarts() > restarts
    assert not algo.alarm()
    assert algo.family.level(1) & {0, 1, 2, 3}
    assert_exact(algo, g)

    for u, v in [(4, 9), (1, 2), (5, 6), (0, 1)]:
        algo.delete(UpdateOp.delete(u, v))
        assert not algo.alarm()
        assert_exact(algo, g)


def test_las_vegas_restart_cap():
    g = disjoint_paths_graph()
    with pytest.raises(TrialLimitExceeded) as info:
        LasVegasDecrApsp(g, z=0.1, rng=random.Random(1), max_restarts=3)
    assert info.value.trials == 3


def test_las_vegas_settles_when_one_path_is_left():
    g = disjoint_paths_graph()
    for v in range(4, 36, 4):
        g.apply_update(UpdateOp.delete(v + 1, v + 2))
    algo = LasVegasDecrApsp(g, z=0.1, rng=random.Random(2))
    assert not algo.alarm()
    algo.delete(UpdateOp.delete(0, 1))
    assert not algo.alarm()
    assert_exact(algo, g)


def shortcut_gadgets(n: int = 36) -> DynamicDigraph:
    """Paths a -> a+1 -> a+2 -> a+3 with a shortcut a -> a+2; every tree starts at depth <= 2."""
    edges = []
    for a in range(0, n, 4):
        edges += [(a, a + 1, 1.0), (a + 1, a + 2, 1.0), (a + 2, a + 3, 1.0), (a, a + 2, 1.0)]
    return DynamicDigraph.from_edges(n, edges)


def test_las_vegas_restarts_when_a_delete_deepens_a_tree():
    total = 0
    for seed in range(6):
        g = shortcut_gadgets()
        algo = LasVegasDecrApsp(g, z=0.1, rng=random.Random(seed))
        assert algo.restarts() == 0
        for a in (0, 4):
            algo.delete(UpdateOp.delete(a, a + 2))
            assert not algo.alarm()
            assert_exact(algo, g)
        total += algo.restarts()
    assert total > 0


@pytest.mark.parametrize("seed", range(3))
def test_las_vegas_approximate_pipeline(seed):
    n, eps = 16, 0.5
    stream = gen_stream(n, 45, mode=Mode.DECREMENTAL, seed=seed)
    g = stream.build_graph()
    algo = LasVegasDecrApsp(g, eps=eps, rng=random.Random(seed), approximate=True)
    for op in stream:
        algo.delete(op)
        assert_approx(algo, g, 1 + eps)


def test_las_vegas_rejects_inserts():
    g = guarded_path_graph()
    algo = LasVegasDecrApsp(g, rng=random.Random(0))
    with pytest.raises(ModeViolation):
        algo.delete(UpdateOp.insert(3, 0))
