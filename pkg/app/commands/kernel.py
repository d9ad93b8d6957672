"""`kernel`: Hua-Bellman matrix of a family of contractions and its PD verdict."""
import argparse
import logging
from typing import Optional, Sequence, Union

from app.commands.common import add_common_arguments, load_matrices
from app.core.linalg import as_contraction
from app.models.combinatorics import Field
from app.schemas.matrix_file import MatrixFile
from app.schemas.reports import RunReport
from app.services.counterexample_service import CounterexampleService
from app.services.kernel_service import KernelService
from app.services.permanent_service import PermanentService
from app.utils.serialization import build_report

logger = logging.getLogger(__name__)


def cmd_kernel(inputs: Sequence[MatrixFile], alpha: float, field: Union[Field, str] = Field.COMPLEX,
               tol: Optional[float] = None, published: bool = False) -> RunReport:
    field = Field(field)
    if published:
        contractions = CounterexampleService.published_contractions()
    else:
        contractions = [as_contraction(m.to_array()) for m in inputs]

    h = KernelService.build_hua_bellman(contractions, alpha, field)
    report = KernelService.pd_check(h, tol)
    n = contractions[0].n
    results = {
        "entries": h.entries,
        "min_eigenvalue": report.min_eigenvalue,
        "tolerance": report.tolerance,
        "verdict": report.verdict,
        "fingerprint": report.fingerprint,
        "admissible": PermanentService.exponent_admissible(alpha, n, field),
    }
    if field is Field.REAL:
        bound = KernelService.pd_check(KernelService.build_symmetrized_bellman(contractions, alpha), tol)
        results["symmetrized"] = {"min_eigenvalue": bound.min_eigenvalue, "verdict": bound.verdict}

    logger.info(f"kernel: {len(contractions)} matrices, verdict {report.verdict.value}")
    parameters = {
        "inputs": [m.name for m in inputs],
        "published": published,
        "alpha": alpha,
        "field": field,
        "tol": tol,
    }
    return build_report("kernel", parameters, results)


def run(args: argparse.Namespace) -> RunReport:
    inputs = [] if args.published else load_matrices(args.input)
    return cmd_kernel(inputs, args.alpha, args.field, tol=args.tol, published=args.published)


def register(subparsers) -> None:
    parser = subparsers.add_parser("kernel", help="Hua-Bellman matrix and positive-definiteness verdict")
    parser.add_argument("--input", action="append", default=[], help="contraction file (repeatable)")
    parser.add_argument("--paper", dest="published", action="store_true", help="use the embedded six-matrix instance")
    parser.add_argument("--alpha", type=float, default=1.0)
    parser.add_argument("--field", choices=[f.value for f in Field], default=Field.COMPLEX.value)
    parser.add_argument("--tol", type=float, help="verdict tolerance (default: relative to the trace)")
    add_common_arguments(parser)
    parser.set_defaults(handler=run)
