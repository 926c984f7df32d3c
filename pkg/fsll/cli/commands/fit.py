"""
``fsll fit``: fit one model kind to a dataset and write the model, the trace
and a report row.
"""

import argparse
import logging
from pathlib import Path

from fsll.cli.commands import positive_float
from fsll.schemas.boltzmann import ChainInit, PcdConfig
from fsll.schemas.fit import FitConfig
from fsll.schemas.report import ModelKind
from fsll.services import generator_service, io_service, run_service

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("fit", help="Fit a model to a dataset.")
    parser.add_argument("--model", choices=[kind.value for kind in ModelKind], default=ModelKind.FSLL.value)
    parser.add_argument("--data", required=True, help="Dataset file.")
    parser.add_argument("--truth", help="Truth spec file; enables KL(p*||p_theta) in the report.")
    parser.add_argument("--name", help="Dataset name in the report (default: data file stem).")
    parser.add_argument("--out-model", required=True, help="Model output path.")
    parser.add_argument("--out-trace", help="FSLL trace CSV output path.")
    parser.add_argument("--report", help="Report CSV to append a row to.")
    parser.add_argument("--epsilon", type=float, help="FSLL stopping threshold.")
    parser.add_argument("--max-iters", type=int, help="FSLL iteration cap.")
    parser.add_argument("--no-prune", action="store_true", help="Evaluate every append candidate exactly.")
    parser.add_argument("--seed", type=int, default=0, help="Seed recorded in the report and used by BM-PCD.")
    parser.add_argument("--learning-rate", type=float, default=0.01, help="BM-PCD learning rate.")
    parser.add_argument("--chains", type=int, default=100, help="BM-PCD persistent chains.")
    parser.add_argument("--steps", type=int, default=10_000, help="BM-PCD gradient steps.")
    parser.add_argument("--burn-in", type=int, default=0, help="BM-PCD sweeps before the first step.")
    parser.add_argument("--chain-init", choices=[init.value for init in ChainInit], default=ChainInit.DATA.value)
    parser.add_argument("--tolerance", type=positive_float, help="BM-DI gradient tolerance (max-norm).")
    parser.set_defaults(handler=run)


def fit_config_from(args: argparse.Namespace) -> FitConfig:
    values = {"prune": not args.no_prune, "seed": args.seed}
    if args.epsilon is not None:
        values["epsilon"] = args.epsilon
    if args.max_iters is not None:
        values["max_iters"] = args.max_iters
    return FitConfig(**values)


def pcd_config_from(args: argparse.Namespace) -> PcdConfig:
    return PcdConfig(
        learning_rate=args.learning_rate,
        chains=args.chains,
        steps=args.steps,
        seed=args.seed,
        burn_in_sweeps=args.burn_in,
        init=args.chain_init,
    )


def run(args: argparse.Namespace) -> int:
    fit_config = fit_config_from(args)
    pcd_config = pcd_config_from(args)
    data = io_service.read_dataset(args.data)
    truth = generator_service.true_distribution(io_service.read_truth(args.truth)) if args.truth else None

    model = run_service.fit_model(args.model, data, fit_config, pcd_config, args.tolerance)
    run_service.save_model(model, args.out_model)
    if args.out_trace and model.trace is not None:
        io_service.write_trace(model.trace, args.out_trace)

    row = run_service.report(model, data, args.name or Path(args.data).stem, truth, args.seed)
    if args.report:
        io_service.append_report(row, args.report)
    print(",".join(row.as_row()))
    return 0
