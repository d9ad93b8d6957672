"""`counterexample`: replay the published instance or search for new ones."""
import argparse
import logging
from typing import Optional

from app.commands.common import add_common_arguments
from app.core.errors import InputValidationError
from app.core.linalg import spectral_norm
from app.schemas.reports import RunReport
from app.services.counterexample_service import CounterexampleService
from app.utils.parallel import resolve_workers
from app.utils.serialization import build_report

logger = logging.getLogger(__name__)


def cmd_counterexample(mode: str, m: int = 8, n: int = 2, alpha: float = 0.5, bound: int = 10,
                       norm: float = 0.5, trials: int = 0, seed: int = 0,
                       workers: Optional[int] = None) -> RunReport:
    if mode == "replay":
        record = CounterexampleService.bellman_counterexample_replay()
        results = {
            "record": record,
            "norms": [spectral_norm(c.to_array()) for c in record.matrices],
        }
        return build_report("counterexample", {"mode": mode}, results)

    if mode != "search":
        raise InputValidationError(f"unknown mode {mode!r}")
    outcome = CounterexampleService.run_search(m, n, alpha, bound, norm, trials, seed, workers=workers)
    parameters = {"mode": mode, "m": m, "n": n, "alpha": alpha, "bound": bound, "norm": norm, "trials": trials}
    results = {"records": outcome.records, "summary": outcome.summary()}
    return build_report("counterexample", parameters, results, seed=seed)


def run(args: argparse.Namespace) -> RunReport:
    return cmd_counterexample(
        args.mode, m=args.m, n=args.n, alpha=args.alpha, bound=args.bound, norm=args.norm,
        trials=args.trials, seed=args.seed, workers=resolve_workers(args.workers),
    )


def register(subparsers) -> None:
    parser = subparsers.add_parser("counterexample", help="indefinite Hua-Bellman instances")
    parser.add_argument("--mode", choices=["replay", "search"], default="replay")
    parser.add_argument("--m", type=int, default=8, help="matrices per trial")
    parser.add_argument("--n", type=int, default=2, help="matrix size")
    parser.add_argument("--alpha", type=float, default=0.5)
    parser.add_argument("--bound", type=int, default=10, help="integer entries drawn from [-bound, bound]")
    parser.add_argument("--norm", type=float, default=0.5, help="operator norm after rescaling")
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    add_common_arguments(parser)
    parser.set_defaults(handler=run)
