import numpy as np
from numpy.typing import ArrayLike, NDArray

from app.core.errors import InputValidationError


def as_complex_matrix(data: ArrayLike, allow_empty: bool = False) -> NDArray[np.complex128]:
    # 1. Shape
    matrix = np.asarray(data, dtype=np.complex128)
    if matrix.ndim != 2:
        raise InputValidationError(f"expected a 2-d matrix, got shape {matrix.shape}")
    rows, cols = matrix.shape
    if not allow_empty and (rows < 1 or cols < 1):
        raise InputValidationError(f"matrix must have at least one row and column, got {rows}x{cols}")

    # 2. Entries
    if not np.all(np.isfinite(matrix)):
        raise InputValidationError("matrix has non-finite entries")

    return matrix


def as_square_matrix(data: ArrayLike, allow_empty: bool = False) -> NDArray[np.complex128]:
    matrix = as_complex_matrix(data, allow_empty=allow_empty)
    if matrix.shape[0] != matrix.shape[1]:
        raise InputValidationError(f"matrix must be square, got {matrix.shape[0]}x{matrix.shape[1]}")
    return matrix


def require_same_shape(*matrices: NDArray) -> None:
    shapes = {m.shape for m in matrices}
    if len(shapes) > 1:
        raise InputValidationError(f"dimension mismatch: {sorted(shapes)}")


def require_in_range(name: str, value: float, low: float, high: float) -> None:
    if not (low <= value <= high):
        raise InputValidationError(f"{name} must lie in [{low}, {high}], got {value}")


def scale_of(matrix: NDArray) -> float:
    """1 + largest entry magnitude, the reference scale for relative tolerances."""
    if matrix.size == 0:
        return 1.0
    return 1.0 + float(np.max(np.abs(matrix)))
