"""
Dense complex-matrix utilities used by every other module: norms, contraction
and Hermitian validation, spectral decompositions and principal-branch
log-determinants.
"""
import logging
from typing import Optional

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from app.core.config import get_settings
from app.core.errors import (
    BranchError,
    ConvergenceError,
    InputValidationError,
    NotAContractionError,
    NotPositiveDefiniteError,
    handle_numerical_errors,
)
from app.core.validation import as_complex_matrix, as_square_matrix, scale_of
from app.models.matrices import Contraction, HermitianMatrix

logger = logging.getLogger(__name__)


@handle_numerical_errors
def spectral_norm(matrix: ArrayLike) -> float:
    m = as_complex_matrix(matrix, allow_empty=True)
    if m.size == 0:
        return 0.0
    return float(scipy.linalg.svdvals(m)[0])


def singular_values(matrix: ArrayLike) -> NDArray[np.float64]:
    """Singular values in descending order."""
    m = as_complex_matrix(matrix)
    return scipy.linalg.svdvals(m)


def as_contraction(matrix: ArrayLike, margin: Optional[float] = None) -> Contraction:
    settings = get_settings()
    margin = settings.CONTRACTION_MARGIN if margin is None else margin
    if margin <= 0:
        raise InputValidationError(f"margin must be positive, got {margin}")

    m = as_square_matrix(matrix)
    norm = spectral_norm(m)
    if norm > 1.0 - margin:
        raise NotAContractionError(norm, margin)
    return Contraction(matrix=m, norm=norm, margin=margin)


def scale_to_norm(matrix: ArrayLike, target_norm: float) -> Contraction:
    """Rescale a nonzero square matrix to operator norm `target_norm` (< 1)."""
    m = as_square_matrix(matrix)
    norm = spectral_norm(m)
    if norm == 0.0:
        raise InputValidationError("cannot rescale the zero matrix")
    return as_contraction(m * (target_norm / norm))


def symmetrize(matrix: ArrayLike) -> NDArray[np.complex128]:
    # Plain transpose: the Ostrowski-type bound is stated for real matrices.
    x = as_square_matrix(matrix)
    return 0.5 * (x + x.T)


def hermitian_part(matrix: ArrayLike) -> NDArray[np.complex128]:
    x = as_square_matrix(matrix)
    return 0.5 * (x + x.conj().T)


def skew_hermitian_part(matrix: ArrayLike) -> NDArray[np.complex128]:
    """Im(X) := (X - X*)/(2i), Hermitian, so that X = Re(X) + i Im(X)."""
    x = as_square_matrix(matrix)
    return (x - x.conj().T) / 2j


def as_hermitian(matrix: ArrayLike, tol: Optional[float] = None) -> HermitianMatrix:
    tol = get_settings().HERMITIAN_TOL if tol is None else tol
    m = as_square_matrix(matrix)
    defect = float(np.max(np.abs(m - m.conj().T)))
    if defect > tol * scale_of(m):
        raise InputValidationError(f"matrix is not Hermitian: defect {defect:.3e}")
    return HermitianMatrix(matrix=m, defect=defect)


@handle_numerical_errors
def matrix_abs(matrix: ArrayLike) -> HermitianMatrix:
    """|X| := (X*X)^{1/2}, built from the SVD X = U S V* as V S V*."""
    x = as_square_matrix(matrix)
    _, s, vh = scipy.linalg.svd(x)
    v = vh.conj().T
    root = (v * s) @ vh
    root = 0.5 * (root + root.conj().T)
    return HermitianMatrix(matrix=root, defect=0.0)


def hermitian_eigen(h: HermitianMatrix) -> tuple[NDArray[np.float64], NDArray[np.complex128]]:
    """Eigenvalues in descending order and the matching orthonormal eigenvectors."""
    try:
        w, v = scipy.linalg.eigh(h.matrix)
    except np.linalg.LinAlgError as e:
        raise ConvergenceError(f"eigh failed for {h.n}x{h.n} Hermitian matrix: {e}") from e

    order = np.argsort(w)[::-1]
    w, v = w[order], v[:, order]

    residual = float(np.max(np.abs((v * w) @ v.conj().T - h.matrix)))
    bound = get_settings().EIGEN_RESIDUAL_TOL * scale_of(h.matrix)
    if residual > bound:
        raise ConvergenceError(
            f"eigendecomposition residual {residual:.3e} exceeds {bound:.3e} (n={h.n})"
        )
    return w, v


def min_eigenvalue(h: HermitianMatrix) -> float:
    return float(hermitian_eigen(h)[0][-1])


@handle_numerical_errors
def log_det_right_halfplane(matrix: ArrayLike) -> complex:
    """
    Sum of principal logarithms of the eigenvalues.

    Requires every eigenvalue to have positive real part, which holds for
    I - A*B whenever A and B are strict contractions.
    """
    m = as_square_matrix(matrix)
    eigenvalues = scipy.linalg.eigvals(m)
    if np.any(eigenvalues.real <= 0):
        worst = float(np.min(eigenvalues.real))
        raise BranchError(f"eigenvalue with non-positive real part ({worst:.3e}) in log-det")
    return complex(np.sum(np.log(eigenvalues)))


@handle_numerical_errors
def batched_log_det_right_halfplane(stack: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """log_det_right_halfplane over the trailing two axes of a stack of matrices."""
    eigenvalues = np.linalg.eigvals(stack)
    if np.any(eigenvalues.real <= 0):
        worst = float(np.min(eigenvalues.real))
        raise BranchError(f"eigenvalue with non-positive real part ({worst:.3e}) in log-det")
    return np.sum(np.log(eigenvalues), axis=-1)


def log_det_pd(matrix: ArrayLike) -> float:
    m = as_square_matrix(matrix)
    try:
        factor = scipy.linalg.cholesky(m, lower=True)
    except np.linalg.LinAlgError as e:
        raise NotPositiveDefiniteError("matrix is not positive definite") from e
    return float(2.0 * np.sum(np.log(np.diag(factor).real)))


def inverse_sqrt_pd(matrix: ArrayLike) -> NDArray[np.complex128]:
    """Principal inverse square root of a Hermitian positive definite matrix."""
    w, v = hermitian_eigen(as_hermitian(matrix))
    if w[-1] <= 0:
        raise NotPositiveDefiniteError(f"matrix is not positive definite (min eigenvalue {w[-1]:.3e})")
    return (v / np.sqrt(w)) @ v.conj().T
