import argparse
from typing import Sequence

from app.core.errors import InputValidationError
from app.schemas.matrix_file import MatrixFile


def parse_complex(text: str) -> complex:
    """Accepts 2, 0.5, -1+2j and the 1+2i spelling."""
    try:
        return complex(text.strip().replace(" ", "").replace("i", "j"))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from e


def load_matrices(paths: Sequence[str]) -> list[MatrixFile]:
    if not paths:
        raise InputValidationError("at least one --input matrix file is required")
    return [MatrixFile.read(path) for path in paths]


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=["json", "csv"], default="json", help="report format")
    parser.add_argument("--output", help="write the report to this file instead of stdout")
    parser.add_argument("--workers", type=int, help="worker processes (default: all cores)")
    parser.add_argument("--verbose", action="store_true", help="debug logging on stderr")
