"""`verify`: run the property suites; failing suites are listed in the report."""
import argparse
from typing import Optional

from app.commands.common import add_common_arguments
from app.schemas.reports import RunReport
from app.services.verification_service import SUITES, VerificationService
from app.utils.serialization import build_report


def cmd_verify(suite: str = "all", seed: int = 0, count: int = 100, workers: Optional[int] = 1) -> RunReport:
    results = VerificationService.run(suite, seed, count, workers=workers)
    failed = [r.suite for r in results if not r.passed]
    return build_report(
        "verify",
        {"suite": suite, "count": count},
        {"passed": not failed, "failed_suites": failed, "suites": results},
        seed=seed,
    )


def run(args: argparse.Namespace) -> RunReport:
    return cmd_verify(args.suite, args.seed, args.count, workers=args.workers)


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="sampled property suites")
    parser.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--count", type=int, default=100, help="samples per check")
    add_common_arguments(parser)
    parser.set_defaults(handler=run)
