"""
Command-line entry point: ``fsll gen | fit | eval | bench``.

Errors are mapped to exit codes: 2 for usage and invalid settings, 3 for
numeric, domain and capacity failures, 4 for unreadable or malformed files.
"""

import argparse
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from fsll.cli.commands import bench, evaluate, fit, gen
from fsll.core.config import settings
from fsll.core.exceptions import FileFormatError, FsllError

logger = logging.getLogger(__name__)

EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=settings.PROJECT_NAME, description=__doc__.strip().splitlines()[0])
    parser.add_argument("--verbose", action="store_true", help="Log every learner iteration (DEBUG).")
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in (gen, fit, evaluate, bench):
        command.register(subparsers)
    return parser


def exit_code_for(error: BaseException) -> int:
    if isinstance(error, (FileFormatError, OSError)):
        return EXIT_IO
    if isinstance(error, ValidationError):
        return EXIT_USAGE
    return EXIT_NUMERIC


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.LOG_LEVEL,
        format=settings.LOG_FORMAT,
        force=True,
    )
    try:
        return args.handler(args)
    except (FsllError, ValidationError, OSError, ArithmeticError, MemoryError) as e:
        code = exit_code_for(e)
        logger.error("fsll %s failed (exit %d): %s", args.command, code, e)
        return code


if __name__ == "__main__":
    sys.exit(main())
