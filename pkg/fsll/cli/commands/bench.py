"""
``fsll bench``: the datasets x models x seeds benchmark.
"""

import argparse
import logging

from fsll.schemas.bench import BenchConfig
from fsll.schemas.fit import FitConfig
from fsll.services import bench_service

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("bench", help="Run the benchmark and write CSV tables.")
    parser.add_argument("--preset", choices=["desk", "full"], default="desk")
    parser.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2], help="Seeds to run.")
    parser.add_argument("--out-dir", default="bench", help="Directory for the CSV outputs.")
    parser.add_argument("--with-bm-di", action="store_true", help="Also run BM-DI on the full preset.")
    parser.add_argument("--parallel", action="store_true", help="Run cells on FSLL_THREADS threads.")
    parser.add_argument("--epsilon", type=float, help="FSLL stopping threshold.")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    fit = FitConfig() if args.epsilon is None else FitConfig(epsilon=args.epsilon)
    config = BenchConfig(
        preset=args.preset,
        seeds=args.seeds,
        with_bm_di=args.with_bm_di,
        parallel=args.parallel,
        fit=fit,
    )
    results = bench_service.run_bench(config, args.out_dir)
    failed = [result for result in results if result.error]
    print(f"{len(results)} runs, {len(failed)} failed; tables in {args.out_dir}")
    return 0
