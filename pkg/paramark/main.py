# paramark/main.py
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .commands import check, encode, instantiate, oracle, qualitative, reduce, solution
from .core.config import settings
from .errors import ParamarkError

logger = logging.getLogger("paramark")

COMMANDS = (check, encode, solution, instantiate, qualitative, reduce, oracle)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paramark",
        description="Parameter synthesis for parametric Markov chains and MDPs",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, settings.LOG_LEVEL.upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Exit 0 when the question was answered (even "no"), otherwise the error's exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    configure_logging(getattr(args, "verbose", False))

    try:
        output = args.handler(args)
    except ParamarkError as exc:
        print(f"error: {exc.detail}", file=sys.stderr)
        return exc.exit_code

    rendered = output.render(args.json)
    if args.out:
        Path(args.out).write_text(rendered)
        logger.info("wrote %s", args.out)
    else:
        sys.stdout.write(rendered)
    return 0


if __name__ == "__main__":
    sys.exit(main())
