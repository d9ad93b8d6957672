"""
Command-line front end.

The report goes to stdout (or --output); logging and error messages go to
stderr. Exit codes: 0 success, 1 invalid input, 2 numerical failure,
3 failed verification suite.
"""
import argparse
import logging
import sys
import time
from typing import Optional, Sequence

from app.commands import REGISTRARS
from app.core.config import get_settings
from app.core.errors import HuaBellmanError, VerificationFailedError
from app.utils.parallel import resolve_workers
from app.utils.serialization import write_report

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog="hua-bellman",
        description=f"{settings.APP_NAME}: alpha-permanents, Hua-Bellman matrices and the contraction metric",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.VERSION}")
    subparsers = parser.add_subparsers(dest="command", help="available commands")
    for register in REGISTRARS:
        register(subparsers)
    return parser


def configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, get_settings().LOG_LEVEL.upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "handler", None):
        parser.print_help(sys.stderr)
        return 1
    configure_logging(args.verbose)

    try:
        started = time.perf_counter()
        report = args.handler(args)
        report.runtime = {
            "wall_seconds": round(time.perf_counter() - started, 6),
            "workers": resolve_workers(args.workers),
        }
        text = write_report(report, args.format, args.output)
        if not args.output:
            sys.stdout.write(text)

        failed = report.results.get("failed_suites")
        if failed:
            raise VerificationFailedError(failed)
        return 0
    except HuaBellmanError as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.error(f"Unexpected failure in {args.command}: {e}", exc_info=True)
        print(f"[ERROR] {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
