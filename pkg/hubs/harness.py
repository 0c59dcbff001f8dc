"""
Replay an update stream through one pipeline and check it against the oracle.

Exact pipelines must match BFS distances; approximate ones must satisfy
delta <= estimate <= (1+eps) * delta for every pair. Checks run at the
configured cadence and always after the last op.
"""
from __future__ import annotations

import csv
import logging
import random
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from tqdm import tqdm

from .apsp_decr import ApproxDecrApsp, ExactDecrApsp, LasVegasDecrApsp
from .apsp_incr import DenseIncrApsp, RelaxIncrApsp, SparseIncrApsp
from .config import RunConfig
from .errors import BadD, ConfigError, InvalidParameter, WeightedGraph
from .graph import INF, Mode, UpdateStream
from .hub_sets import HubFamily
from .oracles import oracle_dist, within_ratio
from .sssp import EsTree
from .streams import gen_stream, load_stream

logger = logging.getLogger(__name__)

CSV_HEADER = ["op_index", "algorithm", "n", "m", "eps", "checked_pairs", "max_ratio", "failures", "elapsed_ns"]

EstimateHook = Callable[[int, int, int, float], float]

BENCH_SOURCES = 5


@dataclass(frozen=True)
class OracleReport:
    op_index: int
    u: int
    v: int
    maintained: float
    oracle: float
    bound: float
    passed: bool
    algorithm: str
    seed: int

    def describe(self) -> str:
        return (
            f"{self.algorithm} seed={self.seed} op={self.op_index} pair=({self.u},{self.v}) "
            f"maintained={self.maintained} oracle={self.oracle} bound={self.bound:g}"
        )


@dataclass
class CheckRow:
    op_index: int
    algorithm: str
    n: int
    m: int
    eps: float
    checked_pairs: int
    max_ratio: float
    failures: int
    elapsed_ns: int

    def as_csv(self) -> list[str]:
        return [
            str(self.op_index),
            self.algorithm,
            str(self.n),
            str(self.m),
            f"{self.eps:g}",
            str(self.checked_pairs),
            f"{self.max_ratio:.9f}",
            str(self.failures),
            str(self.elapsed_ns),
        ]


@dataclass
class ReplayResult:
    config: RunConfig
    rows: list[CheckRow] = field(default_factory=list)
    failures: list[OracleReport] = field(default_factory=list)
    audit: list[str] = field(default_factory=list)
    restarts: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures and not self.audit

    @property
    def failure_count(self) -> int:
        return sum(r.failures for r in self.rows) + len(self.audit)


def _load(cfg: RunConfig) -> UpdateStream:
    mode = Mode.INCREMENTAL if cfg.incremental else Mode.DECREMENTAL
    if cfg.stream is not None:
        stream = load_stream(cfg.stream)
        if stream.mode is not mode:
            raise ConfigError(f"{cfg.algo} needs a {mode.value} stream, {cfg.stream} is {stream.mode.value}")
        return stream
    try:
        return gen_stream(cfg.n, cfg.m, cfg.W, mode, cfg.seed, cfg.weight_changes)
    except InvalidParameter as exc:
        raise ConfigError(str(exc)) from exc


def _build(cfg: RunConfig, stream: UpdateStream):
    """Returns (pipeline, apply op, graph the oracle reads)."""
    n, W = stream.n, stream.W
    rng = random.Random(cfg.seed)
    if cfg.exact and W > 1:
        raise ConfigError(f"{cfg.algo} is exact and unweighted; got W={W:g}")
    try:
        if cfg.algo == "dense-incr":
            algo = DenseIncrApsp(n, cfg.eps, W)
            return algo, algo.insert, algo.graph
        if cfg.algo == "sparse-incr":
            algo = SparseIncrApsp(
                n, cfg.d, cfg.eps, weighted=W > 1, W=W, use_las_vegas=cfg.las_vegas_hubs, c=cfg.c, rng=rng
            )
            return algo, algo.insert, algo.graph
        if cfg.algo == "relax-incr":
            algo = RelaxIncrApsp(n, cfg.eps, W)
            return algo, algo.insert, algo.graph

        g = stream.build_graph()
        if cfg.algo == "lv-decr":
            algo = LasVegasDecrApsp(g, cfg.eps, cfg.z, rng)
        elif cfg.algo == "exact-decr":
            algo = ExactDecrApsp(g, HubFamily.sample(n, cfg.z, rng))
        else:
            algo = ApproxDecrApsp(g, HubFamily.sample(n, cfg.z, rng), cfg.eps)
        return algo, algo.delete, g
    except (BadD, WeightedGraph) as exc:
        raise ConfigError(str(exc)) from exc


def _check(cfg, algo, graph, op_index, m, elapsed_ns, hook, result) -> CheckRow:
    exact = cfg.exact
    bound = 1.0 if exact else 1 + cfg.eps
    dist = oracle_dist(graph)
    n = graph.n
    failures = 0
    max_ratio = 1.0
    for u in range(n):
        for v in range(n):
            value = algo.estimate(u, v)
            if hook is not None:
                value = hook(op_index, u, v, value)
            truth = dist[u][v]
            ok = value == truth if exact else within_ratio(value, truth, bound)
            if truth not in (0, INF) and value != INF:
                max_ratio = max(max_ratio, value / truth)
            if not ok:
                failures += 1
                report = OracleReport(op_index, u, v, value, truth, bound, False, cfg.algo, cfg.seed)
                result.failures.append(report)
                logger.warning("check failed: %s", report.describe())
    return CheckRow(op_index, cfg.algo, n, m, cfg.eps, n * n, max_ratio, failures, elapsed_ns)


def replay_verify(
    cfg: RunConfig,
    estimate_hook: Optional[EstimateHook] = None,
    progress: bool = False,
) -> ReplayResult:
    stream = _load(cfg)
    algo, apply_op, graph = _build(cfg, stream)
    m = cfg.m if cfg.stream is None else sum(1 for op in stream.ops if op.structural)
    stride = cfg.stride(stream.n)
    result = ReplayResult(cfg)
    logger.info("replaying %d ops through %r", len(stream), algo)

    pending_ns = 0
    total = len(stream.ops)
    ops = tqdm(stream.ops, desc=f"  {cfg.algo}", unit="op", leave=False, disable=not progress)
    for index, op in enumerate(ops, start=1):
        start = time.perf_counter_ns()
        apply_op(op)
        pending_ns += time.perf_counter_ns() - start
        if (stride is not None and index % stride == 0) or index == total:
            elapsed = pending_ns if cfg.record_timing else 0
            result.rows.append(_check(cfg, algo, graph, index, m, elapsed, estimate_hook, result))
            pending_ns = 0
    if total == 0:
        result.rows.append(_check(cfg, algo, graph, 0, m, 0, estimate_hook, result))

    if isinstance(algo, LasVegasDecrApsp):
        result.restarts = algo.restarts()
        logger.info("hub family restarted %d time(s)", result.restarts)
    result.audit = graph.audit()
    for problem in result.audit:
        logger.error("graph audit: %s", problem)
    if cfg.csv is not None:
        write_csv(result.rows, cfg.csv)
    return result


def write_csv(rows: list[CheckRow], path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(row.as_csv())


def es_teardown_work(n: int, seed: int = 0, progress: bool = False) -> tuple[int, int, int]:
    """
    Tear down a random graph with m = 4n edges under ES trees of depth
    d = n/10 from BENCH_SOURCES sources. Returns (m, d, total work).
    """
    m, d = 4 * n, max(2, n // 10)
    stream = gen_stream(n, m, mode=Mode.DECREMENTAL, seed=seed)
    g = stream.build_graph()
    trees = [EsTree(g, s, d) for s in range(min(BENCH_SOURCES, n))]
    for op in tqdm(stream.ops, desc=f"  n={n}", unit="op", leave=False, disable=not progress):
        g.apply_update(op)
        for t in trees:
            t.apply_update(op)
    work = sum(t.work for t in trees)
    logger.debug("ES teardown n=%d m=%d d=%d: work %d", n, m, d, work)
    return m, d, work
