import numpy as np
import pytest

from app.core.errors import InputValidationError
from app.core.linalg import as_contraction
from app.models.combinatorics import Field
from app.schemas.reports import Verdict
from app.services.kernel_service import KernelService
from app.services.permanent_service import PermanentService


@pytest.fixture
def zero():
    return as_contraction(np.zeros((2, 2)))


def test_hua_identity_holds_on_random_pairs(contraction_factory):
    for i in range(200):
        n = 1 + i % 4
        a, b = contraction_factory(n), contraction_factory(n)
        assert KernelService.hua_identity_residual(a, b) <= 1e-10


def test_hua_identity_degenerate_cases(zero, contraction_factory):
    a = contraction_factory(2)
    assert KernelService.hua_identity_residual(zero, zero) == 0.0
    assert KernelService.hua_identity_residual(a, a) <= 1e-12
    with pytest.raises(InputValidationError):
        KernelService.hua_identity_residual(a, contraction_factory(3))


def test_hua_identity_on_non_normal_contractions(zero, contraction_factory):
    nilpotent = as_contraction(np.array([[0.0, 0.5], [0.0, 0.0]]))
    assert KernelService.hua_identity_residual(nilpotent, nilpotent) <= 1e-12
    assert KernelService.hua_identity_residual(nilpotent, zero) <= 1e-12
    assert KernelService.hua_identity_residual(zero, nilpotent) <= 1e-12
    for _ in range(20):
        assert KernelService.hua_identity_residual(nilpotent, contraction_factory(2)) <= 1e-10


def test_hua_block_is_psd(contraction_factory):
    for i in range(100):
        n = 1 + i % 3
        report = KernelService.hua_block_psd(contraction_factory(n), contraction_factory(n))
        assert report.is_psd


def test_hua_block_of_zero_pair_is_singular(zero):
    report = KernelService.hua_block_psd(zero, zero)
    assert report.min_eigenvalue == pytest.approx(0.0, abs=1e-12)
    assert report.verdict is Verdict.POSITIVE_SEMIDEFINITE


def test_build_hua_bellman_of_zero_family(zero):
    h = KernelService.build_hua_bellman([zero, zero, zero], 0.5)
    assert np.allclose(h.entries, np.ones((3, 3)))
    assert KernelService.pd_check(h).verdict is Verdict.POSITIVE_SEMIDEFINITE


def test_single_entry_is_at_least_one(contraction_factory):
    for alpha in (0.1, 0.5, 3.0):
        h = KernelService.build_hua_bellman([contraction_factory(3)], alpha)
        assert h.size == 1
        assert h.entries[0, 0].real >= 1.0
        assert KernelService.pd_check(h).verdict is Verdict.POSITIVE_DEFINITE


def test_entries_match_direct_determinants(contraction_factory):
    family = [contraction_factory(2) for _ in range(4)]
    h = KernelService.build_hua_bellman(family, 1.5)
    for i, a in enumerate(family):
        for j, b in enumerate(family):
            direct = np.linalg.det(np.eye(2) - a.adjoint @ b.matrix) ** -1.5
            assert h.entries[i, j] == pytest.approx(direct, rel=1e-10)
    assert np.array_equal(h.entries, h.entries.conj().T)


def test_real_field_uses_transpose(contraction_factory):
    family = [contraction_factory(2, real=True) for _ in range(3)]
    h = KernelService.build_hua_bellman(family, 0.5, Field.REAL)
    assert h.field is Field.REAL
    assert np.all(h.entries.imag == 0)
    assert np.array_equal(h.entries, h.entries.T)


def test_real_field_rejects_complex_input(contraction_factory):
    with pytest.raises(InputValidationError):
        KernelService.build_hua_bellman([contraction_factory(2), contraction_factory(2)], 0.5, "real")


def test_mixed_sizes_rejected(contraction_factory):
    with pytest.raises(InputValidationError):
        KernelService.build_hua_bellman([contraction_factory(2), contraction_factory(3)], 1.0)
    with pytest.raises(InputValidationError):
        KernelService.build_hua_bellman([], 1.0)


def test_complex_typed_real_alpha_matches_float(contraction_factory):
    family = [contraction_factory(2) for _ in range(3)]
    typed = KernelService.build_hua_bellman(family, 1 + 0j)
    plain = KernelService.build_hua_bellman(family, 1.0)
    assert np.allclose(typed.entries, plain.entries, rtol=1e-14)


def test_negative_integer_exponent_is_not_always_psd():
    a, b = as_contraction([[0.5]]), as_contraction([[-0.5]])
    assert PermanentService.exponent_admissible(-1, 1, Field.COMPLEX)
    h = KernelService.build_hua_bellman([a, b], -1.0)
    assert np.allclose(h.entries, [[0.75, 1.25], [1.25, 0.75]])
    report = KernelService.pd_check(h)
    assert report.min_eigenvalue == pytest.approx(-0.5)
    assert report.verdict is Verdict.INDEFINITE


@pytest.mark.parametrize("alpha, n", [(1.0, 2), (2.0, 2), (3.0, 3), (2.2, 3)])
def test_admissible_exponents_give_psd(contraction_factory, alpha, n):
    for _ in range(20):
        family = [contraction_factory(n) for _ in range(5)]
        report = KernelService.pd_check(KernelService.build_hua_bellman(family, alpha))
        assert report.is_psd


def test_fingerprint_is_deterministic(contraction_factory):
    family = [contraction_factory(2) for _ in range(3)]
    first = KernelService.build_hua_bellman(family, 0.5)
    second = KernelService.build_hua_bellman(family, 0.5)
    assert first.fingerprint() == second.fingerprint()
    assert KernelService.pd_check(first).fingerprint == first.fingerprint()


def test_pd_check_accepts_plain_arrays():
    report = KernelService.pd_check(np.diag([2.0, 1.0]))
    assert report.min_eigenvalue == pytest.approx(1.0)
    assert report.trace == pytest.approx(3.0)
    assert KernelService.pd_check(np.diag([1.0, -1.0])).verdict is Verdict.INDEFINITE


def test_ostrowski_and_symmetrized_bound(contraction_factory):
    for _ in range(200):
        a, b = contraction_factory(3, real=True), contraction_factory(3, real=True)
        check = KernelService.ostrowski_check(a, b)
        assert check.holds

    family = [contraction_factory(2, real=True) for _ in range(4)]
    h = KernelService.build_hua_bellman(family, 0.5, Field.REAL)
    bound = KernelService.build_symmetrized_bellman(family, 0.5)
    assert np.all(h.entries.real <= bound.entries.real + 1e-12)


def test_ostrowski_needs_real_input(contraction_factory):
    with pytest.raises(InputValidationError):
        KernelService.ostrowski_check(contraction_factory(2), contraction_factory(2))


def test_hua_inequality_gap(contraction_factory, zero):
    for i in range(200):
        n = 1 + i % 3
        assert KernelService.hua_inequality_gap(contraction_factory(n), contraction_factory(n)) >= -1e-12
    assert KernelService.hua_inequality_gap(zero, zero) == pytest.approx(0.0)
