"""
``fsll eval``: score a model file against a dataset and a truth spec.

Nothing is shared with the fitting process; every number is recomputed from
the files.
"""

import argparse
import logging
from pathlib import Path

from fsll.services import generator_service, io_service, run_service

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("eval", help="Score a model file.")
    parser.add_argument("--model", required=True, help="Model file.")
    parser.add_argument("--data", required=True, help="Dataset file.")
    parser.add_argument("--truth", help="Truth spec file.")
    parser.add_argument("--name", help="Dataset name in the report (default: data file stem).")
    parser.add_argument("--seed", type=int, default=0, help="Seed recorded in the report.")
    parser.add_argument("--report", help="Report CSV to append a row to.")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    model = run_service.load_model(args.model)
    data = io_service.read_dataset(args.data)
    truth = generator_service.true_distribution(io_service.read_truth(args.truth)) if args.truth else None

    row = run_service.report(model, data, args.name or Path(args.data).stem, truth, args.seed)
    if args.report:
        io_service.append_report(row, args.report)
    print(",".join(row.as_row()))
    if model.state is not None:
        print(f"description_length_nats,{run_service.raw_description_length(model, data):.17g}")
    return 0
