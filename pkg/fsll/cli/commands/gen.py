"""
``fsll gen``: build a true distribution, sample it and write both files.
"""

import argparse
import logging

from fsll.cli.commands import positive_int
from fsll.schemas.generators import IsingGridSpec
from fsll.services import generator_service, io_service

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("gen", help="Generate a truth spec and an i.i.d. dataset.")
    parser.add_argument("family", choices=["ising", "bn2", "bn3"], help="Distribution family.")
    parser.add_argument("--rows", type=int, default=5, help="Ising grid rows.")
    parser.add_argument("--cols", type=int, default=4, help="Ising grid columns.")
    parser.add_argument("--coupling", type=float, default=0.5, help="Ising coupling strength.")
    parser.add_argument("--nodes", type=positive_int, default=20, help="Bayesian network size.")
    parser.add_argument("--n", type=positive_int, dest="samples", default=1000, help="Number of samples.")
    parser.add_argument("--seed", type=int, default=0, help="Seed for structure and sampling.")
    parser.add_argument("--out-data", default="data.csv", help="Dataset output path.")
    parser.add_argument("--out-truth", default="truth.txt", help="Truth spec output path.")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    if args.family == "ising":
        spec = IsingGridSpec(rows=args.rows, cols=args.cols, coupling=args.coupling)
    else:
        spec = generator_service.random_bayes_net(args.nodes, args.family, args.seed)
    truth = generator_service.true_distribution(spec)
    data = generator_service.sample(truth, args.samples, args.seed)
    io_service.write_truth(spec, args.out_truth)
    io_service.write_dataset(data, args.out_data)
    logger.info("wrote %s (%d rows) and %s", args.out_data, data.n_samples, args.out_truth)
    return 0
