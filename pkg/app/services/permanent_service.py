"""
Service for alpha-permanents, immanants and the generalized MacMahon series.
"""
from collections import defaultdict
from fractions import Fraction
from itertools import islice, permutations, product
import logging
import math
from typing import Iterator, Optional, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from app.core.characters import character, cycle_types, partitions
from app.core.config import get_settings
from app.core.errors import CapacityError, InputValidationError
from app.core.linalg import log_det_right_halfplane, spectral_norm
from app.core.validation import as_square_matrix, scale_of
from app.models.combinatorics import CycleType, ExponentSet, Field, MultiIndex, Partition, cycle_lengths
from app.models.matrices import Contraction

logger = logging.getLogger(__name__)

Scalar = Union[complex, Fraction]


def _permutation_chunks(n: int, chunk: int) -> Iterator[NDArray[np.int64]]:
    it = permutations(range(n))
    while True:
        block = list(islice(it, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.int64)


def _cycle_length_counts(perms: NDArray[np.int64]) -> NDArray[np.int64]:
    """Row r, column L: number of cycles of length L in permutation r."""
    count, n = perms.shape
    identity = np.arange(n)
    orbit = np.zeros_like(perms)
    current = perms.copy()
    for step in range(1, n + 1):
        closed = (current == identity) & (orbit == 0)
        orbit[closed] = step
        current = np.take_along_axis(perms, current, axis=1)

    counts = np.zeros((count, n + 1), dtype=np.int64)
    for length in range(1, n + 1):
        counts[:, length] = (orbit == length).sum(axis=1) // length
    return counts


def _code_to_cycle_type(code: Sequence[int]) -> CycleType:
    parts = []
    for length in range(len(code) - 1, 0, -1):
        parts.extend([length] * int(code[length]))
    return CycleType(tuple(parts))


def _index_space(bound: Optional[Sequence[int]], n: int, max_order: int) -> list[tuple[int, ...]]:
    """Down-closed set of multi-indices sorted by total degree."""
    if bound is not None:
        indices = list(product(*(range(b + 1) for b in bound)))
    else:
        indices = [r for r in product(range(max_order + 1), repeat=n) if sum(r) <= max_order]
    return sorted(indices, key=lambda r: (sum(r), tuple(-c for c in r)))


def _shift(r: tuple[int, ...], i: int, delta: int) -> tuple[int, ...]:
    return r[:i] + (r[i] + delta,) + r[i + 1:]


class PermanentService:
    """Exact alpha-permanents and the character expansion behind them."""

    @staticmethod
    def _check_cap(n: int) -> None:
        cap = get_settings().PERMANENT_CAP
        if n > cap:
            raise CapacityError(f"{n}x{n} exceeds the permutation-enumeration cap {cap}")

    @staticmethod
    def cycle_count(perm: Sequence[int]) -> int:
        """Number of disjoint cycles of a 0-based permutation."""
        return len(cycle_lengths(perm))

    @staticmethod
    def class_sums(matrix: ArrayLike) -> dict[CycleType, complex]:
        """
        For every cycle type rho, the sum of prod_i a_{i,sigma(i)} over the
        permutations sigma of that type. One pass over all n! permutations.
        """
        a = as_square_matrix(matrix, allow_empty=True)
        n = a.shape[0]
        if n == 0:
            return {CycleType(()): 1 + 0j}
        PermanentService._check_cap(n)

        chunk = get_settings().PERMUTATION_CHUNK
        rows = np.arange(n)
        sums: dict[tuple[int, ...], complex] = defaultdict(complex)
        for perms in _permutation_chunks(n, chunk):
            terms = np.prod(a[rows, perms], axis=1)
            codes = _cycle_length_counts(perms)
            unique, inverse = np.unique(codes, axis=0, return_inverse=True)
            inverse = inverse.reshape(-1)
            real = np.bincount(inverse, weights=terms.real, minlength=len(unique))
            imag = np.bincount(inverse, weights=terms.imag, minlength=len(unique))
            for code, re, im in zip(unique, real, imag):
                sums[tuple(code)] += complex(re, im)

        return {_code_to_cycle_type(code): value for code, value in sorted(sums.items())}

    @staticmethod
    def cycle_polynomial(matrix: ArrayLike) -> list[complex]:
        """Coefficients s_0..s_n with per_alpha(A) = sum_k s_k alpha^k."""
        sums = PermanentService.class_sums(matrix)
        n = next(iter(sums)).n
        coeffs = [0j] * (n + 1)
        for rho, value in sums.items():
            coeffs[rho.cycle_count] += value
        return coeffs

    @staticmethod
    def alpha_permanent(matrix: ArrayLike, alpha: complex) -> complex:
        coeffs = PermanentService.cycle_polynomial(matrix)
        return complex(sum((c * alpha ** k for k, c in enumerate(coeffs)), 0j))

    @staticmethod
    def permanent(matrix: ArrayLike) -> complex:
        return PermanentService.alpha_permanent(matrix, 1.0)

    @staticmethod
    def immanant(matrix: ArrayLike, lam: Partition) -> complex:
        sums = PermanentService.class_sums(matrix)
        n = next(iter(sums)).n
        if lam.n != n:
            raise InputValidationError(f"partition {lam} does not match matrix size {n}")
        return complex(sum(character(lam, rho) * value for rho, value in sums.items()))

    @staticmethod
    def immanant_coefficient(lam: Partition, alpha: Scalar) -> Scalar:
        """
        c_lambda^alpha = (1/n!) sum_sigma alpha^{#sigma} chi_lambda(sigma),
        summed over conjugacy classes as sum_rho alpha^{l(rho)} chi_lambda(rho) / z_rho.
        Exact when alpha is a Fraction.
        """
        total = 0
        for rho in cycle_types(lam.n):
            total += Fraction(character(lam, rho), rho.centralizer_order) * alpha ** rho.cycle_count
        return total

    @staticmethod
    def per_via_immanants(matrix: ArrayLike, alpha: complex) -> complex:
        sums = PermanentService.class_sums(matrix)
        n = next(iter(sums)).n
        if n == 0:
            return 1 + 0j
        total = 0j
        for lam in partitions(n):
            coefficient = complex(PermanentService.immanant_coefficient(lam, alpha))
            immanant = sum(character(lam, rho) * value for rho, value in sums.items())
            total += coefficient * immanant
        return total

    @staticmethod
    def block_expand(matrix: ArrayLike, m: MultiIndex) -> NDArray[np.complex128]:
        """A[m]: entry (i, j) replaced by the m_i x m_j constant block a_ij."""
        a = as_square_matrix(matrix)
        if m.n != a.shape[0]:
            raise InputValidationError(f"multi-index {m} has {m.n} components, matrix is {a.shape[0]}x{a.shape[0]}")
        PermanentService._check_cap(m.order)
        counts = np.array(m.components)
        return np.repeat(np.repeat(a, counts, axis=0), counts, axis=1)

    @staticmethod
    def selection_matrix(m: MultiIndex) -> NDArray[np.float64]:
        """Q_m = Diag(U_1, ..., U_n) with U_i the columns of I_|m| belonging to block i."""
        size = m.order
        q = np.zeros((m.n * size, size))
        offset = 0
        for i, count in enumerate(m):
            for r in range(count):
                q[i * size + offset + r, offset + r] = 1.0
            offset += count
        return q

    @staticmethod
    def selection_factorization_check(a: Contraction, b: Contraction, m: MultiIndex) -> float:
        """
        Relative max-entry deviation of Q_m*(A*B kron 11^T)Q_m and of the
        factored form ((A kron 1^T)Q_m)*((B kron 1^T)Q_m) from (A*B)[m].
        """
        product_ab = a.adjoint @ b.matrix
        size = m.order
        if size == 0:
            return 0.0
        target = PermanentService.block_expand(product_ab, m)
        q = PermanentService.selection_matrix(m)
        ones = np.ones((size, size))
        sandwich = q.T @ np.kron(product_ab, ones) @ q

        row = np.ones((1, size))
        a_tilde = np.kron(a.matrix, row) @ q
        b_tilde = np.kron(b.matrix, row) @ q
        factored = a_tilde.conj().T @ b_tilde

        deviation = max(np.max(np.abs(sandwich - target)), np.max(np.abs(factored - target)))
        return float(deviation) / scale_of(target)

    @staticmethod
    def _rows(matrix) -> list[list]:
        # Object arrays and nested lists keep their scalar type (Fractions stay exact).
        if isinstance(matrix, np.ndarray) and matrix.dtype != object:
            return as_square_matrix(matrix).tolist()
        rows = [list(r) for r in matrix]
        if any(len(r) != len(rows) for r in rows):
            raise InputValidationError("matrix must be square")
        return rows

    @staticmethod
    def _blocked_table(rows: list[list], alpha: Scalar, indices: list[tuple[int, ...]]) -> dict:
        """
        per_alpha(A[r]) for every r of a down-closed index set.

        A permutation splits its support into cycles, so with e a fixed element
        of the first non-empty block i0,

            P(r) = sum_{k <= r, k_i0 >= 1} C(r_i0 - 1, k_i0 - 1) prod_{i != i0} C(r_i, k_i)
                   * alpha * cyc(k) * P(r - k),

        where cyc(k) sums the products of all single-cycle permutations of a
        set with block counts k. Fixing the start of the cycle in block s,
        cyc(k) = prod_i (k_i - [i = s])! * W_s(k - e_s), W_s(w) being the sum of
        closed block-walks from s whose interior letters have content w.
        """
        n = len(rows)
        index_set = set(indices)

        walks: list[dict] = []
        for s in range(n):
            ending: dict[tuple[tuple[int, ...], int], Scalar] = {}
            closed: dict[tuple[int, ...], Scalar] = {}
            for r in indices:
                degree = sum(r)
                if degree == 0:
                    closed[r] = rows[s][s]
                    continue
                total = 0
                for j in range(n):
                    if r[j] == 0:
                        continue
                    if degree == 1:
                        value = rows[s][j]
                    else:
                        prev = _shift(r, j, -1)
                        value = sum(
                            (ending[(prev, q)] * rows[q][j] for q in range(n) if prev[q] > 0), 0
                        )
                    ending[(r, j)] = value
                    total += value * rows[j][s]
                closed[r] = total
            walks.append(closed)

        def cycle_sum(k: tuple[int, ...], s: int) -> Scalar:
            interior = _shift(k, s, -1)
            weight = math.prod(math.factorial(c) for c in interior)
            return weight * walks[s][interior]

        table: dict[tuple[int, ...], Scalar] = {}
        for r in indices:
            if sum(r) == 0:
                table[r] = 1
                continue
            i0 = next(i for i, c in enumerate(r) if c > 0)
            total = 0
            for k in product(*(range(c + 1) for c in r)):
                if k[i0] == 0:
                    continue
                rest = tuple(ri - ki for ri, ki in zip(r, k))
                if rest not in index_set:
                    continue
                ways = math.comb(r[i0] - 1, k[i0] - 1) * math.prod(
                    math.comb(r[i], k[i]) for i in range(n) if i != i0
                )
                total += ways * alpha * cycle_sum(k, i0) * table[rest]
            table[r] = total
        return table

    @staticmethod
    def blocked_alpha_permanent(matrix, m: MultiIndex, alpha: Scalar) -> Scalar:
        """per_alpha(A[m]) without forming A[m]; exact for Fraction input."""
        rows = PermanentService._rows(matrix)
        if m.n != len(rows):
            raise InputValidationError(f"multi-index {m} does not match matrix size {len(rows)}")
        indices = _index_space(m.components, m.n, m.order)
        return PermanentService._blocked_table(rows, alpha, indices)[m.components]

    @staticmethod
    def blocked_alpha_permanents(matrix, alpha: Scalar, max_order: int) -> dict[MultiIndex, Scalar]:
        """per_alpha(A[m]) for every m with |m| <= max_order, from one table."""
        rows = PermanentService._rows(matrix)
        table = PermanentService._blocked_table(rows, alpha, _index_space(None, len(rows), max_order))
        return {MultiIndex(r): value for r, value in table.items()}

    @staticmethod
    def multi_indices(n: int, max_order: int) -> list[MultiIndex]:
        """All m in N^n with |m| <= max_order, graded by |m|."""
        return [MultiIndex(r) for r in _index_space(None, n, max_order)]

    @staticmethod
    def exponent_admissible(alpha, n: int, field: Union[Field, str]) -> bool:
        """alpha in D_field or alpha > n - 1. For positive alpha these make H_alpha PD; negative ones are not covered."""
        return alpha in ExponentSet(Field(field), n)

    @staticmethod
    def rising_factorial(alpha: Scalar, m: int) -> Scalar:
        return math.prod((alpha + k for k in range(m)), start=1)

    @staticmethod
    def macmahon_closed_form(matrix: ArrayLike, x: Sequence[complex], alpha: complex) -> complex:
        """det(I - XA)^{-alpha} on the principal branch."""
        a = as_square_matrix(matrix)
        xa = np.diag(np.asarray(x, dtype=np.complex128)) @ a
        return complex(np.exp(-alpha * log_det_right_halfplane(np.eye(a.shape[0]) - xa)))

    @staticmethod
    def macmahon_partial_sums(matrix, x: Sequence[Scalar], alpha: Scalar, order: int) -> list[Scalar]:
        """
        Partial sums of sum_m x^m / m! per_alpha(A[m]) truncated at |m| <= d,
        for d = 0..order.
        """
        rows = PermanentService._rows(matrix)
        n = len(rows)
        if len(x) != n:
            raise InputValidationError(f"x has {len(x)} components, matrix is {n}x{n}")
        if order < 0:
            raise InputValidationError(f"order must be non-negative, got {order}")

        xa = np.array([[complex(x[i]) * complex(rows[i][j]) for j in range(n)] for i in range(n)])
        norm = spectral_norm(xa)
        if norm >= 1.0:
            raise InputValidationError(f"series diverges: ||XA|| = {norm:.6g} >= 1")

        indices = _index_space(None, n, order)
        table = PermanentService._blocked_table(rows, alpha, indices)

        by_degree: list = [0] * (order + 1)
        for r in indices:
            m = MultiIndex(r)
            by_degree[m.order] += m.monomial(x) * table[r] / m.factorial

        sums, running = [], 0
        for d in range(order + 1):
            running += by_degree[d]
            sums.append(running)
        logger.debug(f"MacMahon partial sums to order {order}: last={sums[-1]}")
        return sums

    @staticmethod
    def macmahon_partial_sum(matrix, x: Sequence[Scalar], alpha: Scalar, order: int) -> Scalar:
        return PermanentService.macmahon_partial_sums(matrix, x, alpha, order)[-1]
