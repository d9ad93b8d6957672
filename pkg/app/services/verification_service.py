"""
Sampled property suites: every identity, inequality and positivity statement
the toolkit relies on, each summarized by its worst residual over seeded samples.
"""
from fractions import Fraction
from itertools import permutations
import logging
import math
from typing import Callable, Iterable, Optional, Sequence
import zlib

import numpy as np
import scipy.stats
from numpy.typing import NDArray

from app.core.config import get_settings
from app.core.errors import InputValidationError
from app.models.combinatorics import Field, MultiIndex
from app.models.metric import MetricKind
from app.schemas.reports import CheckResult, SuiteResult
from app.services.counterexample_service import PUBLISHED_ALPHA, PUBLISHED_MIN_EIGENVALUE, CounterexampleService
from app.services.kernel_service import KernelService
from app.services.metric_service import MetricService
from app.services.permanent_service import PermanentService
from app.utils.sampling import random_complex, random_contraction, random_hermitian_pd, random_psd

logger = logging.getLogger(__name__)

SUITES = ("identities", "pd", "metric", "majorization")

IDENTITY_TOL = 1e-10
EXACT_TOL = 1e-12
PERMANENT_TOL = 1e-9
MACMAHON_TOL = 1e-6
CONCAVITY_TOL = 1e-8
TRIANGLE_TOL = 1e-10
CHAIN_TOL = 1e-9
REPLAY_TOL = 1e-7
STRICTNESS_FLOOR = 1e-8
STRICTNESS_SEPARATION = 0.1

COMPLEX_INTEGER_ALPHAS = (1, 2, 3)
REAL_HALF_INTEGER_ALPHAS = (0.5, 1.0, 1.5, 2.0)
IMMANANT_ALPHAS = (-2.0, -1.0, 0.5, 1.0, 2.7)
MACMAHON_ALPHAS = (0.5, 1.5, 3.0)
MACMAHON_NORM = 0.3
MACMAHON_ORDER = 12
NEGATIVE_ALPHAS = (-1.0, -2.0)
DELTA_P_EXPONENTS = (0.5, 1.0, 1.5, 2.0)
MAJORIZATION_EXPONENTS = (0.5, 1.0, 2.0)
CONCAVITY_EXPONENTS = (0.25, 0.5, 1.0, 1.5, 2.0)
FAMILY_SIZE = 5


def _rng(seed: int, tag: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(tag.encode())])


def _check(name: str, values: Sequence[float], tolerance: float, report_only: bool = False,
           detail: Optional[dict] = None) -> CheckResult:
    worst = float(max(values)) if len(values) else float("-inf")
    passed = report_only or worst <= tolerance
    if not passed:
        logger.warning(f"Check {name} failed: worst {worst:.3e} > {tolerance:.3e}")
    return CheckResult(
        name=name,
        worst=worst,
        tolerance=tolerance,
        samples=len(values),
        passed=passed,
        report_only=report_only,
        detail=detail,
    )


def _enumerated_permanent(a: NDArray) -> complex:
    n = a.shape[0]
    return complex(sum(math.prod(a[i, s[i]] for i in range(n)) for s in permutations(range(n))))


def _permanent_scale(a: NDArray) -> float:
    return max(1.0, _enumerated_permanent(np.abs(a)).real)


def _blocked_scale(g: NDArray, alpha: float, m: MultiIndex) -> float:
    base = max(1.0, float(np.max(np.abs(g)))) * max(1.0, abs(alpha))
    return math.factorial(m.order) * base ** m.order


def _negative_binomial_tail(exponent: float, rho: float, order: int) -> float:
    """Tail beyond `order` of (1 - rho t)^{-exponent} at t = 1, all coefficients positive."""
    partial, term = 0.0, 1.0
    for d in range(order + 1):
        partial += term
        term *= (exponent + d) / (d + 1) * rho
    return (1.0 - rho) ** (-exponent) - partial


def _gram_family(rng: np.random.Generator, n: int, real: bool):
    return [random_contraction(rng, n, real=real) for _ in range(FAMILY_SIZE)]


def _negativity(family, alpha: float, field: Field) -> float:
    report = KernelService.pd_check(KernelService.build_hua_bellman(family, alpha, field))
    return -report.relative_min_eigenvalue


class VerificationService:
    """Runs the property suites exposed by `verify`."""

    @staticmethod
    def identities(seed: int, count: int) -> SuiteResult:
        checks = [
            *VerificationService._hua_checks(seed, count),
            VerificationService._selection_check(seed, min(count, 100)),
            *VerificationService._permanent_checks(seed, count),
            VerificationService._macmahon_check(seed, min(count, 10)),
            VerificationService._binomial_check(),
            *VerificationService._nonnegativity_checks(seed, min(count, 50)),
        ]
        return VerificationService._suite("identities", checks)

    @staticmethod
    def _hua_checks(seed: int, count: int) -> list[CheckResult]:
        rng = _rng(seed, "hua")
        residuals, block, gaps, ostrowski = [], [], [], []
        for t in range(count):
            n = 2 + t % 2
            a, b = random_contraction(rng, n), random_contraction(rng, n)
            residuals.append(KernelService.hua_identity_residual(a, b))
            block.append(-KernelService.hua_block_psd(a, b).relative_min_eigenvalue)
            gaps.append(-KernelService.hua_inequality_gap(a, b))
            ar, br = random_contraction(rng, n, real=True), random_contraction(rng, n, real=True)
            check = KernelService.ostrowski_check(ar, br)
            ostrowski.append(check.rhs - check.lhs)
        return [
            _check("hua_identity_residual", residuals, IDENTITY_TOL),
            _check("hua_block_negativity", block, IDENTITY_TOL),
            _check("hua_inequality_violation", gaps, EXACT_TOL),
            _check("ostrowski_violation", ostrowski, EXACT_TOL),
        ]

    @staticmethod
    def _selection_check(seed: int, count: int) -> CheckResult:
        rng = _rng(seed, "selection")
        residuals = []
        for t in range(count):
            n = 2 + t % 2
            a, b = random_contraction(rng, n), random_contraction(rng, n)
            m = MultiIndex(tuple(rng.multinomial(int(rng.integers(0, 7)), [1.0 / n] * n)))
            residuals.append(PermanentService.selection_factorization_check(a, b, m))
        return _check("selection_factorization_residual", residuals, EXACT_TOL)

    @staticmethod
    def _permanent_checks(seed: int, count: int) -> list[CheckResult]:
        rng = _rng(seed, "permanent")
        per_one, per_minus_one, expansion = [], [], []
        for t in range(count):
            n = 1 + t % 6
            a = random_complex(rng, n)
            scale = _permanent_scale(a)
            per_one.append(abs(PermanentService.alpha_permanent(a, 1.0) - _enumerated_permanent(a)) / scale)
            det = (-1) ** n * np.linalg.det(a)
            per_minus_one.append(abs(PermanentService.alpha_permanent(a, -1.0) - det) / scale)

            a = random_complex(rng, 2 + t % 4)
            scale = _permanent_scale(a)
            for alpha in IMMANANT_ALPHAS:
                gap = PermanentService.per_via_immanants(a, alpha) - PermanentService.alpha_permanent(a, alpha)
                expansion.append(abs(gap) / (scale * max(1.0, abs(alpha)) ** a.shape[0]))
        return [
            _check("per_one_vs_permanent", per_one, PERMANENT_TOL),
            _check("per_minus_one_vs_determinant", per_minus_one, PERMANENT_TOL),
            _check("immanant_expansion_residual", expansion, PERMANENT_TOL),
        ]

    @staticmethod
    def _macmahon_check(seed: int, count: int) -> CheckResult:
        """
        Truncation error against det(I - XA)^{-alpha} for PSD A and positive x, where
        every series coefficient is non-negative. The order-12 error is held to the
        larger of 1e-6 and the tail of the scalar majorant (1 - ||XA|| t)^{-n alpha}.
        """
        rng = _rng(seed, "macmahon")
        excess, rising = [], []
        for _ in range(count):
            a = random_psd(rng, 2, real=True).real
            x = rng.uniform(0.2, 1.0, size=2)
            a *= MACMAHON_NORM / np.linalg.norm(np.diag(x) @ a, 2)
            for alpha in MACMAHON_ALPHAS:
                exact = PermanentService.macmahon_closed_form(a, x, alpha)
                errors = [abs(s - exact) for s in PermanentService.macmahon_partial_sums(a, x, alpha, MACMAHON_ORDER)]
                bound = max(MACMAHON_TOL, _negative_binomial_tail(2 * alpha, MACMAHON_NORM, MACMAHON_ORDER))
                excess.append(errors[-1] - bound)
                rising.append(max(later - earlier for earlier, later in zip(errors, errors[1:])))
        return _check(
            "macmahon_truncation_excess",
            [max(e, r - EXACT_TOL) for e, r in zip(excess, rising)],
            0.0,
            detail={"worst_error_excess": max(excess), "worst_error_increase": max(rising)},
        )

    @staticmethod
    def _binomial_check() -> CheckResult:
        """n = 1 partial sums against sum_d (alpha)_d (a x)^d / d!, in exact arithmetic."""
        a, x, alpha, order = Fraction(1, 3), Fraction(1, 2), Fraction(5, 2), 10
        sums = PermanentService.macmahon_partial_sums([[a]], [x], alpha, order)
        expected, running = [], Fraction(0)
        for d in range(order + 1):
            running += PermanentService.rising_factorial(alpha, d) * (a * x) ** d / math.factorial(d)
            expected.append(running)
        mismatches = [float(abs(s - e)) for s, e in zip(sums, expected)]
        return _check("binomial_series_mismatch", mismatches, 0.0)

    @staticmethod
    def _nonnegativity_checks(seed: int, count: int) -> list[CheckResult]:
        rng = _rng(seed, "nonnegativity")
        positive, negative = [], []
        max_order = 6
        for t in range(count):
            n = 2 + t % 2
            for real, alphas in ((True, REAL_HALF_INTEGER_ALPHAS), (False, COMPLEX_INTEGER_ALPHAS)):
                g = random_psd(rng, n, real=real)
                g = g.real if real else g
                for alpha in alphas:
                    values = PermanentService.blocked_alpha_permanents(g, alpha, max_order)
                    positive.extend(-complex(v).real / _blocked_scale(g, alpha, m) for m, v in values.items())
            g = random_psd(rng, n, real=True).real
            for alpha in NEGATIVE_ALPHAS:
                values = PermanentService.blocked_alpha_permanents(g, alpha, max_order)
                negative.extend(float(complex(v).real < 0) for m, v in values.items() if m.order > 0)
        return [
            _check("alpha_permanent_negativity", positive, IDENTITY_TOL),
            _check(
                "negative_alpha_sign_report",
                negative,
                0.0,
                report_only=True,
                detail={"negative_fraction": float(np.mean(negative)) if negative else None},
            ),
        ]

    @staticmethod
    def pd(seed: int, count: int) -> SuiteResult:
        rng = _rng(seed, "pd")
        complex_integer, real_half, above, inadmissible_complex, inadmissible_real = [], [], [], [], []
        for t in range(count):
            n = 2 + t % 2
            family = _gram_family(rng, n, real=False)
            complex_integer.extend(_negativity(family, alpha, Field.COMPLEX) for alpha in COMPLEX_INTEGER_ALPHAS)
            above.append(_negativity(family, n + 2 - float(rng.uniform(0.0, 3.0)), Field.COMPLEX))
            inadmissible_complex.append(_negativity(family, 0.5, Field.COMPLEX))

            real_family = _gram_family(rng, n, real=True)
            real_half.extend(_negativity(real_family, alpha, Field.REAL) for alpha in REAL_HALF_INTEGER_ALPHAS)
            inadmissible_real.append(_negativity(real_family, 0.3, Field.REAL))

        checks = [
            _check("complex_integer_alpha_negativity", complex_integer, IDENTITY_TOL),
            _check("real_half_integer_alpha_negativity", real_half, IDENTITY_TOL),
            _check("alpha_above_threshold_negativity", above, IDENTITY_TOL),
            _check("inadmissible_complex_half", inadmissible_complex, IDENTITY_TOL, report_only=True),
            _check("inadmissible_real_0.3", inadmissible_real, IDENTITY_TOL, report_only=True),
            *VerificationService._refutation_checks(),
        ]
        return VerificationService._suite("pd", checks)

    @staticmethod
    def _refutation_checks() -> list[CheckResult]:
        """The published instance: entrywise domination does not carry positive semidefiniteness."""
        contractions = CounterexampleService.published_contractions()
        record = CounterexampleService.bellman_counterexample_replay()
        symmetrized = KernelService.pd_check(KernelService.build_symmetrized_bellman(contractions, PUBLISHED_ALPHA))
        return [
            _check("replay_min_eigenvalue_error", [abs(record.min_eigenvalue - PUBLISHED_MIN_EIGENVALUE)], REPLAY_TOL),
            _check("replay_indefinite", [record.min_eigenvalue], -get_settings().SEARCH_TOL),
            _check("symmetrized_bound_negativity", [-symmetrized.relative_min_eigenvalue], IDENTITY_TOL),
        ]

    @staticmethod
    def metric(seed: int, count: int, workers: Optional[int] = 1) -> SuiteResult:
        checks = []
        for kind, p, n in (
            (MetricKind.HUA, None, 2),
            (MetricKind.HUA, None, 3),
            (MetricKind.SDIV, None, 2),
            *((MetricKind.DELTAP, p, 2) for p in DELTA_P_EXPONENTS),
        ):
            label = kind.value if p is None else f"{kind.value}_{p:g}"
            worst = MetricService.triangle_suite(seed, count, kind, p=p, n=n, workers=workers)
            checks.append(_check(f"triangle_{label}_n{n}", [worst], TRIANGLE_TOL, detail={"triples": count}))

        checks.extend(VerificationService._axiom_checks(seed, count))
        checks.extend(VerificationService._chain_checks(seed, min(count, 1000)))
        checks.append(VerificationService._concavity_check())
        return VerificationService._suite("metric", checks)

    @staticmethod
    def _axiom_checks(seed: int, count: int) -> list[CheckResult]:
        rng = _rng(seed, "axioms")
        symmetry, strictness, unitary = [], [], []
        for t in range(count):
            n = 2 + t % 2
            a, b = random_contraction(rng, n), random_contraction(rng, n)
            symmetry.append(MetricService.symmetry_gap(MetricKind.HUA, a, b))
            if np.linalg.norm(a.matrix - b.matrix, 2) >= STRICTNESS_SEPARATION:
                strictness.append(STRICTNESS_FLOOR - MetricService.hua_distance_sq(a, b).value)

            x, y = random_hermitian_pd(rng, n), random_hermitian_pd(rng, n)
            symmetry.append(MetricService.symmetry_gap(MetricKind.SDIV, x, y))
            p = DELTA_P_EXPONENTS[t % len(DELTA_P_EXPONENTS)]
            symmetry.append(MetricService.symmetry_gap(MetricKind.DELTAP, x, y, p))

            u = scipy.stats.unitary_group.rvs(n, random_state=rng)
            v = scipy.stats.unitary_group.rvs(n, random_state=rng)
            base = MetricService.delta_p_sq(x, y, p).squared
            rotated = MetricService.delta_p_sq(u @ x @ v, u @ y @ v, p).squared
            unitary.append(abs(base - rotated) / max(1.0, base))
        return [
            _check("symmetry_gap", symmetry, EXACT_TOL),
            _check("strictness_violation", strictness, 0.0),
            _check("delta_p_unitary_invariance", unitary, EXACT_TOL),
        ]

    @staticmethod
    def _chain_checks(seed: int, count: int) -> list[CheckResult]:
        rng = _rng(seed, "chain")
        mobius, min_real, halfplane, decomposition = [], [], [], []
        for t in range(count):
            n = 2 + t % 2
            a, b = random_contraction(rng, n), random_contraction(rng, n)
            pair = MetricService.mobius_transform(a, b)
            mobius.append(max(pair.identity_residual, pair.real_part_residual))
            min_real.append(-min(pair.min_real_eigenvalue_x, pair.min_real_eigenvalue_y))

            d2 = MetricService.hua_distance_sq(a, b).squared
            delta2 = MetricService.delta_halfplane_sq(pair.x, pair.y).squared
            halfplane.append(abs(d2 - delta2) / max(1.0, d2))
            decomposition.append(MetricService.decomposition_check(pair.x, pair.y).residual)
        return [
            _check("mobius_residual", mobius, IDENTITY_TOL),
            _check("mobius_real_part_negativity", min_real, 0.0),
            _check("halfplane_vs_hua_distance", halfplane, CHAIN_TOL),
            _check("decomposition_residual", decomposition, CHAIN_TOL),
        ]

    @staticmethod
    def _concavity_check() -> CheckResult:
        grid = np.logspace(-2, 2, 200)
        values = [MetricService.concavity_profile(p, grid) for p in CONCAVITY_EXPONENTS]
        return _check("concavity_second_difference", values, CONCAVITY_TOL)

    @staticmethod
    def majorization(seed: int, count: int) -> SuiteResult:
        rng = _rng(seed, "majorization")
        uchiyama, chain = [], []
        for t in range(count):
            n = 2 + t % 2
            x, y, z = (random_complex(rng, n) for _ in range(3))
            for p in MAJORIZATION_EXPONENTS:
                uchiyama.append(0.0 if MetricService.uchiyama_check(x, y, p) else 1.0)
                chain.append(0.0 if MetricService.scalar_chain_check(x, y, z, p).holds else 1.0)
        checks = [
            _check("uchiyama_failures", uchiyama, 0.0),
            _check("scalar_chain_failures", chain, 0.0),
        ]
        return VerificationService._suite("majorization", checks)

    @staticmethod
    def _suite(name: str, checks: Iterable[CheckResult]) -> SuiteResult:
        checks = list(checks)
        passed = all(c.passed for c in checks)
        logger.info(f"Suite {name}: {'pass' if passed else 'FAIL'} ({len(checks)} checks)")
        return SuiteResult(suite=name, passed=passed, checks=checks)

    @staticmethod
    def run(suite: str, seed: int, count: int, workers: Optional[int] = 1) -> list[SuiteResult]:
        if count < 1:
            raise InputValidationError(f"count must be positive, got {count}")
        if seed < 0:
            raise InputValidationError(f"seed must be non-negative, got {seed}")
        names = SUITES if suite == "all" else (suite,)
        runners: dict[str, Callable[[], SuiteResult]] = {
            "identities": lambda: VerificationService.identities(seed, count),
            "pd": lambda: VerificationService.pd(seed, count),
            "metric": lambda: VerificationService.metric(seed, count, workers=workers),
            "majorization": lambda: VerificationService.majorization(seed, count),
        }
        unknown = [name for name in names if name not in runners]
        if unknown:
            raise InputValidationError(f"unknown suite {unknown[0]!r}; choose from {', '.join(SUITES)} or all")
        return [runners[name]() for name in names]
