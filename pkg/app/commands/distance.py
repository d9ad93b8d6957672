"""`distance`: d, delta_S or delta_p between two matrices."""
import argparse
from typing import Optional

from app.commands.common import add_common_arguments, load_matrices
from app.core.errors import InputValidationError
from app.models.metric import MetricKind
from app.schemas.matrix_file import MatrixFile
from app.schemas.reports import RunReport
from app.services.metric_service import MetricService
from app.utils.serialization import build_report


def cmd_distance(a: MatrixFile, b: MatrixFile, metric: str = MetricKind.HUA.value,
                 p: Optional[float] = None) -> RunReport:
    kind = MetricKind(metric)
    distance = MetricService.distance_sq(kind, a.to_array(), b.to_array(), p)
    parameters = {"a": a.name, "b": b.name, "metric": kind, "p": p}
    return build_report("distance", parameters, {"squared": distance.squared, "value": distance.value})


def run(args: argparse.Namespace) -> RunReport:
    if len(args.input) != 2:
        raise InputValidationError(f"distance needs exactly two --input files, got {len(args.input)}")
    a, b = load_matrices(args.input)
    return cmd_distance(a, b, args.metric, args.p)


def register(subparsers) -> None:
    parser = subparsers.add_parser("distance", help="distance between two matrices")
    parser.add_argument("--input", action="append", default=[], help="matrix file (give exactly two)")
    parser.add_argument("--metric", choices=[k.value for k in MetricKind], default=MetricKind.HUA.value)
    parser.add_argument("--p", type=float, help="exponent for deltap, in [0, 2]")
    add_common_arguments(parser)
    parser.set_defaults(handler=run)
