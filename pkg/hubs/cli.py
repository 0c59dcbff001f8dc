"""
Command-line surface: replay a stream through one pipeline and check it, or
write a generated stream to disk.

Exit status is 0 when every check passed, 1 on any contract failure and 2 on
configuration or stream errors.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from tqdm import tqdm
from tqdm.contrib.logging import logging_redirect_tqdm

from .config import ALGORITHMS, LOG_LEVEL_ENV, RunConfig, make_config
from .errors import ConfigError, HubsError, InvalidParameter, StreamParseError
from .graph import Mode
from .harness import ReplayResult, replay_verify
from .streams import gen_stream, save_stream

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
MAX_REPORTED_FAILURES = 10


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hubs",
        description="Partially-dynamic all-pairs shortest paths with reliable hubs, checked against brute force.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  hubs run --algo exact-decr --n 40 --m 120 --check each
  hubs run --algo sparse-incr --n 48 --m 150 --d 4 --eps 0.5 --csv out.csv
  hubs run --algo approx-decr --stream teardown.txt --check k:5
  HUBS_SEED=7 hubs run --algo lv-decr --n 30 --m 90
  hubs gen --mode decremental --n 20 --m 60 --W 8 -o teardown.txt
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="replay a stream and verify every check")
    run.add_argument("--algo", required=True, choices=ALGORITHMS)
    run.add_argument("--n", type=int, help="vertex count (default: 16)")
    run.add_argument("--m", type=int, help="structural ops to generate (default: 32)")
    run.add_argument("--W", type=float, help="maximum edge weight (default: 1)")
    run.add_argument("--eps", type=float, help="approximation parameter (default: 0.5)")
    run.add_argument("--d", type=int, help="even hop parameter for sparse-incr")
    run.add_argument("--z", type=float, help="hub family sampling constant (default: 4)")
    run.add_argument("--c", type=float, help="blocker sampling constant (default: 3)")
    run.add_argument("--seed", type=int, help="seed; HUBS_SEED overrides it")
    run.add_argument("--stream", type=Path, metavar="FILE", help="replay FILE instead of generating")
    run.add_argument("--check", metavar="CADENCE", help="each | k:<int> | end | auto (default: auto)")
    run.add_argument("--csv", type=Path, metavar="FILE", help="write the per-check summary here")
    run.add_argument("--weight-changes", type=int, help="extra weight-change ops in a generated stream")
    run.add_argument("--no-timing", action="store_true", help="write elapsed_ns as 0 (byte-stable CSV)")
    run.add_argument("--las-vegas-hubs", action="store_true", help="sparse-incr: sample hubs instead of greedy")
    run.add_argument("--progress", action="store_true", help="show a progress bar over the ops")
    run.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")

    gen = sub.add_parser("gen", help="write a seeded random stream")
    gen.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.INCREMENTAL.value)
    gen.add_argument("--n", type=int, default=16)
    gen.add_argument("--m", type=int, default=32)
    gen.add_argument("--W", type=float, default=1.0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--weight-changes", type=int, default=0)
    gen.add_argument("-o", "--output", type=Path, required=True, metavar="FILE")
    return parser


def _setup_logging(verbose: int) -> None:
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = os.environ.get(LOG_LEVEL_ENV, "WARNING").upper()
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _config_from_args(args) -> RunConfig:
    return make_config(
        algo=args.algo,
        n=args.n,
        m=args.m,
        W=args.W,
        eps=args.eps,
        d=args.d,
        z=args.z,
        c=args.c,
        seed=args.seed,
        stream=args.stream,
        check=args.check,
        csv=args.csv,
        weight_changes=args.weight_changes,
        record_timing=not args.no_timing,
        las_vegas_hubs=args.las_vegas_hubs or None,
    )


def _print_header(cfg: RunConfig) -> None:
    print("=" * 80)
    print(f"Replaying {cfg.algo}")
    print("=" * 80)
    for key, value in cfg.model_dump().items():
        print(f"  {key:<16} {value}")


def _print_summary(result: ReplayResult) -> None:
    checks = len(result.rows)
    worst = max((row.max_ratio for row in result.rows), default=1.0)
    print("\n" + "=" * 80)
    print("FINAL SUMMARY")
    print("=" * 80)
    print(f"Checks run:        {checks}")
    print(f"Pairs checked:     {sum(row.checked_pairs for row in result.rows)}")
    print(f"Worst ratio:       {worst:.6f}")
    print(f"Failed pairs:      {len(result.failures)}")
    print(f"Audit problems:    {len(result.audit)}")
    if result.config.algo == "lv-decr":
        print(f"Hub restarts:      {result.restarts}")
    print("=" * 80)
    if result.passed:
        print("✓ All checks passed")
    else:
        for report in result.failures[:MAX_REPORTED_FAILURES]:
            print(f"  ❌ {report.describe()}")
        if len(result.failures) > MAX_REPORTED_FAILURES:
            print(f"  ... and {len(result.failures) - MAX_REPORTED_FAILURES} more")
        for problem in result.audit:
            print(f"  ❌ audit: {problem}")
    if result.config.csv is not None:
        print(f"✓ CSV summary saved to: {result.config.csv}")


def cmd_run(args) -> int:
    try:
        cfg = _config_from_args(args)
        _print_header(cfg)
        with logging_redirect_tqdm():
            result = replay_verify(cfg, progress=args.progress)
    except (ConfigError, StreamParseError) as exc:
        print(f"❌ ERROR: {exc}")
        return EXIT_CONFIG
    except HubsError as exc:
        print(f"❌ ERROR: {type(exc).__name__}: {exc}")
        return EXIT_CONFIG
    _print_summary(result)
    return EXIT_OK if result.passed else EXIT_FAILED


def cmd_gen(args) -> int:
    try:
        stream = gen_stream(args.n, args.m, args.W, Mode(args.mode), args.seed, args.weight_changes)
    except InvalidParameter as exc:
        print(f"❌ ERROR: {exc}")
        return EXIT_CONFIG
    save_stream(stream, args.output)
    tqdm.write(f"✓ {args.mode} stream with {len(stream)} ops saved to: {args.output}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _setup_logging(getattr(args, "verbose", 0))
    if args.command == "gen":
        return cmd_gen(args)
    return cmd_run(args)


if __name__ == "__main__":
    sys.exit(main())
