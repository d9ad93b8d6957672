"""
Service for the hyperbolic-like distance on strict contractions and the
auxiliary distances used to prove its triangle inequality.
"""
import logging
import math
from typing import Callable, NamedTuple, Optional, Sequence, Union

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from app.core.config import get_settings
from app.core.errors import InputValidationError, NumericalError, handle_numerical_errors
from app.core.linalg import (
    as_contraction,
    as_hermitian,
    hermitian_eigen,
    hermitian_part,
    inverse_sqrt_pd,
    log_det_pd,
    log_det_right_halfplane,
    singular_values,
    skew_hermitian_part,
)
from app.core.validation import as_complex_matrix, as_square_matrix, require_in_range, require_same_shape, scale_of
from app.models.matrices import Contraction
from app.models.metric import DecompositionResult, DistanceValue, MetricKind, MobiusPair, ScalarChainResult
from app.utils.parallel import ordered_map
from app.utils.sampling import random_complex, random_contraction, random_hermitian_pd

logger = logging.getLogger(__name__)

Sampler = Callable[[np.random.Generator, int], tuple]


class TriangleTask(NamedTuple):
    seed: int
    index: int
    kind: MetricKind
    p: Optional[float]
    n: int


def _contraction(obj: Union[Contraction, ArrayLike]) -> Contraction:
    return obj if isinstance(obj, Contraction) else as_contraction(obj)


def _f_values(sigma: NDArray[np.float64], p: float) -> NDArray[np.float64]:
    """f(t) = sqrt(log(1 + t^p)) on singular values, with f(0) = 0 also at p = 0."""
    if p == 0:
        cutoff = get_settings().RANK_TOL * (float(sigma[0]) if sigma.size else 0.0)
        return np.where(sigma > cutoff, math.sqrt(math.log(2.0)), 0.0)
    return np.sqrt(np.log1p(sigma ** p))


def _relative_gap(lhs: NDArray, rhs: NDArray) -> float:
    return float(np.max(np.abs(lhs - rhs))) / max(scale_of(lhs), scale_of(rhs))


def _sample_triple(rng: np.random.Generator, kind: MetricKind, n: int) -> tuple:
    if kind is MetricKind.HUA:
        return tuple(random_contraction(rng, n) for _ in range(3))
    if kind is MetricKind.SDIV:
        return tuple(random_hermitian_pd(rng, n) for _ in range(3))
    return tuple(random_complex(rng, n) for _ in range(3))


def _triangle_violation(task: TriangleTask) -> float:
    rng = np.random.default_rng([task.seed, task.index])
    a, b, c = _sample_triple(rng, task.kind, task.n)
    return MetricService.triangle_violation(task.kind, a, b, c, task.p)


class MetricService:
    """Distances d, delta_S, delta_p and the identities linking them."""

    @staticmethod
    def hua_distance_sq(a: Union[Contraction, ArrayLike], b: Union[Contraction, ArrayLike]) -> DistanceValue:
        """
        d^2(A, B) = log |det(I - A*B)| - 1/2 log det(I - A*A) - 1/2 log det(I - B*B),
        every term taken as the real part of a principal log-determinant.
        """
        a, b = _contraction(a), _contraction(b)
        require_same_shape(a.matrix, b.matrix)
        eye = np.eye(a.n)
        cross = log_det_right_halfplane(eye - a.adjoint @ b.matrix).real
        own_a = log_det_right_halfplane(eye - a.adjoint @ a.matrix).real
        own_b = log_det_right_halfplane(eye - b.adjoint @ b.matrix).real
        raw = cross - 0.5 * (own_a + own_b)
        return DistanceValue.from_squared(raw, scale=1.0 + abs(cross) + abs(own_a) + abs(own_b))

    @staticmethod
    def s_divergence(x: ArrayLike, y: ArrayLike) -> DistanceValue:
        """delta_S^2(X, Y) = log det((X+Y)/2) - 1/2 log det X - 1/2 log det Y for Hermitian PD X, Y."""
        hx, hy = as_hermitian(x).matrix, as_hermitian(y).matrix
        require_same_shape(hx, hy)
        ld_x, ld_y = log_det_pd(hx), log_det_pd(hy)
        mid = log_det_pd(0.5 * (hx + hy))
        raw = mid - 0.5 * (ld_x + ld_y)
        return DistanceValue.from_squared(raw, scale=1.0 + abs(mid) + abs(ld_x) + abs(ld_y))

    @staticmethod
    def delta_p_sq(x: ArrayLike, y: ArrayLike, p: float) -> DistanceValue:
        """
        delta_p^2(X, Y) = log det(I + |X-Y|^p) = sum_j log(1 + sigma_j(X-Y)^p).

        At p = 0 each nonzero singular value contributes log 2, so the value is
        rank(X-Y) log 2 with rank cut at RANK_TOL times the largest singular value.
        """
        require_in_range("p", p, 0.0, 2.0)
        mx, my = as_complex_matrix(x), as_complex_matrix(y)
        require_same_shape(mx, my)
        f = _f_values(singular_values(mx - my), p)
        return DistanceValue.from_squared(float(np.sum(f ** 2)))

    @staticmethod
    def distance_sq(kind: Union[MetricKind, str], a, b, p: Optional[float] = None) -> DistanceValue:
        kind = MetricKind(kind)
        if kind is MetricKind.HUA:
            return MetricService.hua_distance_sq(a, b)
        if kind is MetricKind.SDIV:
            return MetricService.s_divergence(a, b)
        if p is None:
            raise InputValidationError("delta_p needs an exponent p")
        return MetricService.delta_p_sq(a, b, p)

    @staticmethod
    def symmetry_gap(kind: Union[MetricKind, str], a, b, p: Optional[float] = None) -> float:
        return abs(MetricService.distance_sq(kind, a, b, p).squared - MetricService.distance_sq(kind, b, a, p).squared)

    @staticmethod
    def concavity_profile(p: float, grid: Sequence[float]) -> float:
        """
        Largest second divided difference of f(t) = sqrt(log(1 + t^p)) over
        consecutive grid triples; -inf when the grid has fewer than three points.
        """
        require_in_range("p", p, 0.0, 2.0)
        t = np.asarray(grid, dtype=np.float64)
        if t.ndim != 1 or np.any(t <= 0):
            raise InputValidationError("grid must be a list of positive numbers")
        if np.any(np.diff(t) <= 0):
            raise InputValidationError("grid must be strictly increasing")
        if t.size < 3:
            return float("-inf")

        f = np.sqrt(np.log1p(t ** p))
        slopes = np.diff(f) / np.diff(t)
        second = 2.0 * np.diff(slopes) / (t[2:] - t[:-2])
        return float(np.max(second))

    @staticmethod
    @handle_numerical_errors
    def mobius_transform(a: Union[Contraction, ArrayLike], b: Union[Contraction, ArrayLike]) -> MobiusPair:
        a, b = _contraction(a), _contraction(b)
        require_same_shape(a.matrix, b.matrix)
        eye = np.eye(a.n, dtype=np.complex128)

        def image(c: Contraction) -> NDArray[np.complex128]:
            return scipy.linalg.solve(eye - c.matrix, eye + c.matrix)

        x, y = image(a), image(b)
        xh = x.conj().T
        rebuilt = 2.0 * scipy.linalg.solve(eye + xh, xh + y) @ scipy.linalg.inv(eye + y)
        identity_residual = _relative_gap(eye - a.adjoint @ b.matrix, rebuilt)

        real_part_residual = 0.0
        min_real = []
        for c, z in ((a, x), (b, y)):
            re_z = hermitian_part(z)
            closed = 0.25 * (eye + z.conj().T) @ (eye - c.adjoint @ c.matrix) @ (eye + z)
            real_part_residual = max(real_part_residual, _relative_gap(re_z, closed))
            min_real.append(float(np.linalg.eigvalsh(re_z)[0]))

        return MobiusPair(
            x=x,
            y=y,
            identity_residual=identity_residual,
            real_part_residual=real_part_residual,
            min_real_eigenvalue_x=min_real[0],
            min_real_eigenvalue_y=min_real[1],
        )

    @staticmethod
    def delta_halfplane_sq(x: ArrayLike, y: ArrayLike) -> DistanceValue:
        """log |det(X*+Y)| - 1/2 log det(X*+X) - 1/2 log det(Y*+Y) for Re X, Re Y PD."""
        mx, my = as_square_matrix(x), as_square_matrix(y)
        require_same_shape(mx, my)
        ld_x = log_det_pd(2.0 * hermitian_part(mx))
        ld_y = log_det_pd(2.0 * hermitian_part(my))
        sign, cross = np.linalg.slogdet(mx.conj().T + my)
        if sign == 0:
            raise NumericalError("X* + Y is singular although its Hermitian part is positive definite")
        raw = float(cross) - 0.5 * (ld_x + ld_y)
        return DistanceValue.from_squared(raw, scale=1.0 + abs(float(cross)) + abs(ld_x) + abs(ld_y))

    @staticmethod
    def decomposition_check(x: ArrayLike, y: ArrayLike, tol: float = 1e-8) -> DecompositionResult:
        """
        Both sides of delta^2(X, Y) = delta_S^2(D_x, D_y) + 1/2 delta_2^2(S_x, S_y).

        T = Re(X+Y)^{-1/2} and the eigenvectors U of T Re(X) T reduce X, Y by the
        congruence Z -> U*T Z T U to D_x + i S_x and D_y + i S_y with D_x + D_y = I.
        """
        mx, my = as_square_matrix(x), as_square_matrix(y)
        require_same_shape(mx, my)
        n = mx.shape[0]
        rx, ry = hermitian_part(mx), hermitian_part(my)
        t = inverse_sqrt_pd(rx + ry)
        _, u = hermitian_eigen(as_hermitian(hermitian_part(t @ rx @ t)))

        def congruence(z: NDArray[np.complex128]) -> NDArray[np.complex128]:
            return u.conj().T @ t @ z @ t @ u

        d_x, d_y = congruence(rx), congruence(ry)
        off_diagonal = max(
            float(np.max(np.abs(d - np.diag(np.diag(d))))) for d in (d_x, d_y)
        )
        unity = float(np.max(np.abs(d_x + d_y - np.eye(n))))
        if off_diagonal > tol or unity > tol:
            raise NumericalError(
                f"simultaneous diagonalization failed (off-diagonal {off_diagonal:.3e}, D_x + D_y - I {unity:.3e})"
            )

        s_x = hermitian_part(congruence(skew_hermitian_part(mx)))
        s_y = hermitian_part(congruence(skew_hermitian_part(my)))
        divergence = MetricService.s_divergence(np.diag(np.diag(d_x).real), np.diag(np.diag(d_y).real)).squared
        skew = 0.5 * MetricService.delta_p_sq(s_x, s_y, 2.0).squared

        lhs = MetricService.delta_halfplane_sq(mx, my).squared
        rhs = divergence + skew
        residual = abs(lhs - rhs) / max(1.0, abs(lhs))
        return DecompositionResult(lhs=lhs, rhs=rhs, residual=residual, divergence_term=divergence, skew_term=skew)

    @staticmethod
    def weak_majorization(x: ArrayLike, y: ArrayLike, slack: Optional[float] = None) -> bool:
        """x <_w y: every partial sum of x sorted descending is at most that of y, up to an absolute slack."""
        slack = get_settings().MAJORIZATION_SLACK if slack is None else slack
        vx, vy = np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64)
        if vx.ndim != 1 or vx.shape != vy.shape:
            raise InputValidationError(f"vectors must have the same length, got {vx.shape} and {vy.shape}")
        if np.any(vx < 0) or np.any(vy < 0):
            raise InputValidationError("weak majorization is tested on non-negative vectors")
        cx = np.cumsum(np.sort(vx)[::-1])
        cy = np.cumsum(np.sort(vy)[::-1])
        return bool(np.all(cx <= cy + slack))

    @staticmethod
    def uchiyama_check(a: ArrayLike, b: ArrayLike, p: float) -> bool:
        """f(sigma(A+B)) <_w f(sigma(A)) + f(sigma(B)) for f(t) = sqrt(log(1 + t^p))."""
        require_in_range("p", p, 0.0, 2.0)
        ma, mb = as_square_matrix(a), as_square_matrix(b)
        require_same_shape(ma, mb)
        lhs = _f_values(singular_values(ma + mb), p)
        rhs = _f_values(singular_values(ma), p) + _f_values(singular_values(mb), p)
        return MetricService.weak_majorization(lhs, rhs)

    @staticmethod
    def scalar_chain_check(x: ArrayLike, y: ArrayLike, z: ArrayLike, p: float) -> ScalarChainResult:
        """
        The scalar steps from weak majorization to delta_p(X,Y) <= delta_p(X,Z) + delta_p(Z,Y),
        with A = X - Z and B = Z - Y: majorization of f(sigma(A+B)), its survival
        under squaring, and Minkowski's inequality on the squared sums.
        """
        require_in_range("p", p, 0.0, 2.0)
        mx, my, mz = as_square_matrix(x), as_square_matrix(y), as_square_matrix(z)
        require_same_shape(mx, my, mz)
        slack = get_settings().MAJORIZATION_SLACK
        fc = _f_values(singular_values(mx - my), p)
        fa = _f_values(singular_values(mx - mz), p)
        fb = _f_values(singular_values(mz - my), p)

        majorization = MetricService.weak_majorization(fc, fa + fb)
        squared = MetricService.weak_majorization(fc ** 2, (fa + fb) ** 2)
        bound = np.linalg.norm(fa) + np.linalg.norm(fb)
        minkowski = bool(np.linalg.norm(fa + fb) <= bound + slack * max(1.0, bound))
        return ScalarChainResult(majorization=majorization, squared_majorization=squared, minkowski=minkowski)

    @staticmethod
    def cayley_klein_distance_sq(x: ArrayLike, y: ArrayLike) -> DistanceValue:
        """log(|1 - x*y| / sqrt((1 - ||x||^2)(1 - ||y||^2))) for vectors in the open unit ball."""
        vx = np.asarray(x, dtype=np.complex128).ravel()
        vy = np.asarray(y, dtype=np.complex128).ravel()
        if vx.shape != vy.shape:
            raise InputValidationError(f"vectors must have the same length, got {vx.size} and {vy.size}")
        nx, ny = float(np.vdot(vx, vx).real), float(np.vdot(vy, vy).real)
        if nx >= 1.0 or ny >= 1.0:
            raise InputValidationError("vectors must lie in the open unit ball")
        raw = math.log(abs(1.0 - np.vdot(vx, vy))) - 0.5 * (math.log1p(-nx) + math.log1p(-ny))
        return DistanceValue.from_squared(raw, scale=1.0 + abs(raw))

    @staticmethod
    def triangle_violation(kind: Union[MetricKind, str], a, b, c, p: Optional[float] = None) -> float:
        """dist(A,B) - dist(A,C) - dist(C,B); at most roundoff for a metric."""
        def dist(u, v) -> float:
            return MetricService.distance_sq(kind, u, v, p).value

        return dist(a, b) - dist(a, c) - dist(c, b)

    @staticmethod
    def triangle_suite(
        seed: int,
        count: int,
        which: Union[MetricKind, str],
        p: Optional[float] = None,
        n: int = 2,
        sampler: Optional[Sampler] = None,
        workers: Optional[int] = 1,
    ) -> float:
        """
        Worst triangle violation over `count` triples, triple t drawn from the
        substream seeded by (seed, t). `sampler(rng, n)` overrides the default
        domain sampler and forces a sequential run.
        """
        if count < 1:
            raise InputValidationError(f"count must be positive, got {count}")
        kind = MetricKind(which)
        if kind is MetricKind.DELTAP:
            if p is None:
                raise InputValidationError("delta_p triangle suite needs p")
            require_in_range("p", p, 0.0, 2.0)

        if sampler is not None:
            violations = []
            for t in range(count):
                a, b, c = sampler(np.random.default_rng([seed, t]), n)
                violations.append(MetricService.triangle_violation(kind, a, b, c, p))
        else:
            tasks = [TriangleTask(seed, t, kind, p, n) for t in range(count)]
            violations = ordered_map(_triangle_violation, tasks, workers=workers)

        worst = max(violations)
        logger.info(f"Triangle suite {kind.value} (p={p}, n={n}): worst violation {worst:.3e} over {count} triples")
        return worst
