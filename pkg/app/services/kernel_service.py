"""
Service for Hua-Bellman Gram matrices and the determinantal identities around them.
"""
import logging
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from app.core.config import get_settings
from app.core.errors import BranchError, InputValidationError, InvariantViolationError, handle_numerical_errors
from app.core.linalg import (
    as_hermitian,
    batched_log_det_right_halfplane,
    hermitian_eigen,
    log_det_right_halfplane,
    symmetrize,
)
from app.core.validation import require_same_shape, scale_of
from app.models.combinatorics import Field
from app.models.kernel import HuaBellmanMatrix, matrix_fingerprint
from app.models.matrices import Contraction
from app.schemas.reports import PDReport

logger = logging.getLogger(__name__)


class OstrowskiCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def _identity(n: int) -> NDArray[np.complex128]:
    return np.eye(n, dtype=np.complex128)


def _stack(matrices: Sequence[Contraction]) -> NDArray[np.complex128]:
    if not matrices:
        raise InputValidationError("need at least one contraction")
    require_same_shape(*(c.matrix for c in matrices))
    return np.stack([c.matrix for c in matrices])


def _mirror_upper(entries: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """Hermitian matrix agreeing with `entries` on and above the diagonal."""
    upper = np.triu(entries, 1)
    return upper + upper.conj().T + np.diag(entries.diagonal().real).astype(np.complex128)


class KernelService:
    """Hua-Bellman matrices, positive-definiteness verdicts and Hua's identity."""

    @staticmethod
    @handle_numerical_errors
    def hua_identity_residual(a: Contraction, b: Contraction) -> float:
        """
        Relative max-entry gap between the two sides of
        I - B*B + (A-B)*(I-AA*)^{-1}(A-B) = (I-B*A)(I-A*A)^{-1}(I-A*B).
        """
        require_same_shape(a.matrix, b.matrix)
        eye = _identity(a.n)
        diff = a.matrix - b.matrix
        lhs = eye - b.adjoint @ b.matrix + diff.conj().T @ scipy.linalg.solve(eye - a.matrix @ a.adjoint, diff)
        rhs = (eye - b.adjoint @ a.matrix) @ scipy.linalg.solve(
            eye - a.adjoint @ a.matrix, eye - a.adjoint @ b.matrix
        )
        return float(np.max(np.abs(lhs - rhs))) / max(scale_of(lhs), scale_of(rhs))

    @staticmethod
    def _report(matrix: NDArray[np.complex128], tol: Optional[float], fingerprint: str) -> PDReport:
        hermitian = as_hermitian(matrix)
        trace = float(np.trace(matrix).real)
        if tol is None:
            tol = get_settings().PD_RELATIVE_TOL * abs(trace)
        eigenvalues, _ = hermitian_eigen(hermitian)
        lam_min = float(eigenvalues[-1])
        return PDReport(
            min_eigenvalue=lam_min,
            tolerance=tol,
            verdict=PDReport.classify(lam_min, tol),
            trace=trace,
            fingerprint=fingerprint,
        )

    @staticmethod
    @handle_numerical_errors
    def hua_block_psd(a: Contraction, b: Contraction, tol: Optional[float] = None) -> PDReport:
        """PD report of [[(I-A*A)^-1, (I-A*B)^-1], [(I-B*A)^-1, (I-B*B)^-1]]."""
        require_same_shape(a.matrix, b.matrix)
        eye = _identity(a.n)
        blocks = [
            [scipy.linalg.inv(eye - x.adjoint @ y.matrix) for y in (a, b)]
            for x in (a, b)
        ]
        block = np.block(blocks)
        block = 0.5 * (block + block.conj().T)
        return KernelService._report(block, tol, matrix_fingerprint(block))

    @staticmethod
    def build_hua_bellman(matrices: Sequence[Contraction], alpha: float, field: Union[Field, str] = Field.COMPLEX) -> HuaBellmanMatrix:
        """
        H_alpha = [det(I - A_i^* A_j)^{-alpha}], each entry evaluated as
        exp(-alpha * sum of principal logs of the eigenvalues of I - A_i^* A_j).
        """
        field = Field(field)
        stack = _stack(matrices)
        if field is Field.REAL and not all(c.is_real for c in matrices):
            raise InputValidationError("real field requires real matrices")

        n = stack.shape[-1]
        # conjugation is a no-op for real input, so A^T A_j falls out of the same expression
        products = np.einsum("iba,jbc->ijac", stack.conj(), stack)
        log_dets = batched_log_det_right_halfplane(_identity(n) - products)

        if field is Field.REAL:
            phase = float(np.max(np.abs(log_dets.imag)))
            if phase > 1e-8:
                raise BranchError(f"det(I - A_i^T A_j) is not positive (phase {phase:.3e})")
            log_dets = log_dets.real.astype(np.complex128)

        entries = _mirror_upper(np.exp(-alpha * log_dets))
        if np.imag(alpha) == 0 and float(np.real(alpha)) >= 0 and np.any(entries.diagonal().real < 1.0 - 1e-12):
            raise InvariantViolationError("diagonal entry below 1 for non-negative alpha")

        logger.debug(f"Built {len(matrices)}x{len(matrices)} Hua-Bellman matrix (alpha={alpha}, field={field.value})")
        return HuaBellmanMatrix(entries=entries, alpha=alpha, source=list(matrices), field=field)

    @staticmethod
    def build_symmetrized_bellman(matrices: Sequence[Contraction], alpha: float) -> HuaBellmanMatrix:
        """[det(I - (A_i^T A_j)_s)^{-alpha}], the entrywise upper bound of H_alpha for real input."""
        if not all(c.is_real for c in matrices):
            raise InputValidationError("symmetrized Bellman matrix is defined for real matrices")
        stack = _stack(matrices).real
        products = np.einsum("iba,jbc->ijac", stack, stack)
        sym = 0.5 * (products + np.swapaxes(products, -1, -2))
        eigenvalues = np.linalg.eigvalsh(np.eye(stack.shape[-1]) - sym)
        if np.any(eigenvalues <= 0):
            raise BranchError("I - (A_i^T A_j)_s is not positive definite")
        log_dets = np.sum(np.log(eigenvalues), axis=-1)
        entries = _mirror_upper(np.exp(-alpha * log_dets).astype(np.complex128))
        return HuaBellmanMatrix(entries=entries, alpha=alpha, source=list(matrices), field=Field.REAL)

    @staticmethod
    def pd_check(h: Union[HuaBellmanMatrix, NDArray], tol: Optional[float] = None) -> PDReport:
        """
        Verdict from the minimum eigenvalue against +-tol. The default
        tolerance is PD_RELATIVE_TOL times the trace.
        """
        if isinstance(h, HuaBellmanMatrix):
            return KernelService._report(h.entries, tol, h.fingerprint())
        matrix = np.asarray(h, dtype=np.complex128)
        return KernelService._report(matrix, tol, matrix_fingerprint(matrix))

    @staticmethod
    def ostrowski_check(a: Contraction, b: Contraction) -> OstrowskiCheck:
        """det(I - A^T B) >= det(I - (A^T B)_s) for real contractions."""
        if not (a.is_real and b.is_real):
            raise InputValidationError("Ostrowski check needs real matrices")
        require_same_shape(a.matrix, b.matrix)
        product = (a.matrix.T @ b.matrix).real
        eye = np.eye(a.n)
        lhs = float(np.linalg.det(eye - product))
        rhs = float(np.linalg.det(eye - symmetrize(product).real))
        return OstrowskiCheck(lhs=lhs, rhs=rhs, holds=lhs >= rhs - 1e-12)

    @staticmethod
    def hua_inequality_gap(a: Contraction, b: Contraction) -> float:
        """log |det(I-A*B)|^2 - log det(I-A*A) - log det(I-B*B); non-negative by Hua's inequality."""
        require_same_shape(a.matrix, b.matrix)
        eye = _identity(a.n)
        cross = log_det_right_halfplane(eye - a.adjoint @ b.matrix).real
        own_a = log_det_right_halfplane(eye - a.adjoint @ a.matrix).real
        own_b = log_det_right_halfplane(eye - b.adjoint @ b.matrix).real
        return float(2.0 * cross - own_a - own_b)
