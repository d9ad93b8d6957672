"""`perm`: alpha-permanent of one matrix, optionally with the MacMahon truncation."""
import argparse
import logging
from typing import Optional, Sequence

from app.commands.common import add_common_arguments, load_matrices, parse_complex
from app.core.errors import InputValidationError
from app.schemas.matrix_file import MatrixFile
from app.schemas.reports import RunReport
from app.services.permanent_service import PermanentService
from app.utils.serialization import build_report

logger = logging.getLogger(__name__)

METHODS = ("direct", "immanant", "both")


def cmd_perm(matrix: MatrixFile, alpha: complex, method: str = "direct", order: Optional[int] = None,
             x: Optional[Sequence[float]] = None) -> RunReport:
    if method not in METHODS:
        raise InputValidationError(f"unknown method {method!r}")
    a = matrix.to_array()
    results: dict = {"n": matrix.rows}

    if method in ("direct", "both"):
        results["value"] = PermanentService.alpha_permanent(a, alpha)
    if method in ("immanant", "both"):
        results["immanant_value"] = PermanentService.per_via_immanants(a, alpha)
    if method == "immanant":
        results["value"] = results.pop("immanant_value")
    if method == "both":
        direct, expanded = results["value"], results["immanant_value"]
        results["residual"] = abs(direct - expanded) / max(1.0, abs(direct))

    if order is not None:
        x = list(x) if x else [1.0] * matrix.rows
        results["macmahon"] = {
            "order": order,
            "x": x,
            "partial_sum": PermanentService.macmahon_partial_sum(a, x, alpha, order),
            "closed_form": PermanentService.macmahon_closed_form(a, x, alpha),
        }

    parameters = {"input": matrix.name, "alpha": alpha, "method": method, "order": order, "x": x}
    return build_report("perm", parameters, results)


def run(args: argparse.Namespace) -> RunReport:
    if len(args.input) != 1:
        raise InputValidationError(f"perm needs exactly one --input file, got {len(args.input)}")
    (matrix,) = load_matrices(args.input)
    return cmd_perm(matrix, args.alpha, args.method, order=args.order, x=args.x)


def register(subparsers) -> None:
    parser = subparsers.add_parser("perm", help="alpha-permanent of a square matrix")
    parser.add_argument("--input", action="append", default=[], help="matrix file")
    parser.add_argument("--alpha", type=parse_complex, default=complex(1.0), help="exponent (complex allowed)")
    parser.add_argument("--method", choices=METHODS, default="direct")
    parser.add_argument("--order", type=int, help="also truncate the MacMahon series at this total degree")
    parser.add_argument("--x", type=float, nargs="+", help="MacMahon variables (default: all ones)")
    add_common_arguments(parser)
    parser.set_defaults(handler=run)
