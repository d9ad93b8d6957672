import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from app.core.errors import BranchError, InputValidationError, NotAContractionError, NotPositiveDefiniteError
from app.core.linalg import (
    as_contraction,
    as_hermitian,
    hermitian_eigen,
    hermitian_part,
    inverse_sqrt_pd,
    log_det_pd,
    log_det_right_halfplane,
    matrix_abs,
    min_eigenvalue,
    scale_to_norm,
    singular_values,
    skew_hermitian_part,
    spectral_norm,
    symmetrize,
)

finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
square = st.integers(1, 4).flatmap(lambda n: arrays(np.float64, (n, n), elements=finite))


def test_spectral_norm_examples():
    assert spectral_norm(np.eye(3)) == pytest.approx(1.0)
    assert spectral_norm(np.zeros((2, 2))) == 0.0
    assert spectral_norm(np.diag([0.5, 0.3])) == pytest.approx(0.5)


def test_spectral_norm_rejects_non_finite():
    with pytest.raises(InputValidationError):
        spectral_norm([[1.0, np.nan], [0.0, 1.0]])


@given(square)
def test_spectral_norm_matches_adjoint(m):
    norm = spectral_norm(m)
    assert norm >= 0
    assert abs(norm - spectral_norm(m.conj().T)) <= 1e-12 * (1 + norm)


def test_as_contraction_accepts_and_rejects():
    c = as_contraction(np.diag([0.5, 0.5]), margin=1e-9)
    assert c.norm == pytest.approx(0.5)
    assert c.is_real

    with pytest.raises(NotAContractionError) as exc:
        as_contraction(np.eye(2), margin=1e-3)
    assert exc.value.norm == pytest.approx(1.0)


def test_as_contraction_validates_margin_and_shape():
    with pytest.raises(InputValidationError):
        as_contraction(np.zeros((2, 2)), margin=0.0)
    with pytest.raises(InputValidationError):
        as_contraction(np.zeros((2, 3)))


def test_scale_to_norm_on_published_matrix():
    c = scale_to_norm(np.array([[-2.0, -9.0], [-5.0, -10.0]]), 0.5)
    assert abs(c.norm - 0.5) <= 1e-12
    with pytest.raises(InputValidationError):
        scale_to_norm(np.zeros((2, 2)), 0.5)


def test_margin_comes_from_settings(monkeypatch):
    monkeypatch.setenv("CONTRACTION_MARGIN", "0.6")
    with pytest.raises(NotAContractionError):
        as_contraction(np.diag([0.5, 0.1]))


def test_symmetrize_examples():
    s = np.array([[1.0, 2.0], [2.0, 3.0]])
    assert np.allclose(symmetrize(s), s)
    assert np.allclose(symmetrize([[0, 1], [0, 0]]), [[0, 0.5], [0.5, 0]])
    assert np.allclose(symmetrize([[0, 2], [-2, 0]]), 0)
    # plain transpose: no conjugation
    assert symmetrize([[1j]])[0, 0] == 1j


def test_hermitian_and_skew_parts_reassemble(complex_factory):
    x = complex_factory(3)
    re, im = hermitian_part(x), skew_hermitian_part(x)
    assert np.allclose(re, re.conj().T)
    assert np.allclose(im, im.conj().T)
    assert np.allclose(re + 1j * im, x)


def test_as_hermitian_defect():
    h = as_hermitian([[2, 1j], [-1j, 3]])
    assert h.defect == 0.0
    with pytest.raises(InputValidationError):
        as_hermitian([[1, 1], [0, 1]])


def test_matrix_abs_examples(complex_factory):
    psd = np.array([[2.0, 1.0], [1.0, 2.0]])
    assert np.allclose(matrix_abs(psd).matrix, psd)

    q, _ = np.linalg.qr(complex_factory(3))
    assert np.allclose(matrix_abs(q).matrix, np.eye(3))

    assert np.allclose(matrix_abs([[-3 + 4j]]).matrix, [[5.0]])


def test_matrix_abs_is_psd_with_singular_value_spectrum(complex_factory):
    x = complex_factory(4)
    h = matrix_abs(x)
    eigenvalues, _ = hermitian_eigen(h)
    assert np.allclose(eigenvalues, singular_values(x))
    assert eigenvalues[-1] >= -1e-12 * np.trace(h.matrix).real


def test_hermitian_eigen_examples():
    w, _ = hermitian_eigen(as_hermitian(np.diag([3.0, 1.0, 2.0])))
    assert np.allclose(w, [3, 2, 1])
    w, _ = hermitian_eigen(as_hermitian(np.eye(4)))
    assert np.allclose(w, 1)
    w, v = hermitian_eigen(as_hermitian([[2.0, 1.0], [1.0, 2.0]]))
    assert np.allclose(w, [3, 1])
    assert np.allclose(v.conj().T @ v, np.eye(2))
    assert min_eigenvalue(as_hermitian([[2.0, 1.0], [1.0, 2.0]])) == pytest.approx(1.0)


def test_log_det_right_halfplane_examples():
    assert log_det_right_halfplane(np.eye(3)) == pytest.approx(0)
    assert log_det_right_halfplane(np.diag([np.e, np.e])) == pytest.approx(2)


def test_log_det_right_halfplane_branch_error():
    with pytest.raises(BranchError):
        log_det_right_halfplane(np.diag([1.0, -1.0]))


def test_log_det_defined_on_contraction_pairs(contraction_factory):
    for i in range(1000):
        n = 2 + i % 2
        a, b = contraction_factory(n), contraction_factory(n)
        m = np.eye(n) - a.adjoint @ b.matrix
        assert np.min(np.linalg.eigvals(m).real) > 0
        value = log_det_right_halfplane(m)
        direct = np.linalg.det(m)
        assert abs(np.exp(value) - direct) <= 1e-9 * abs(direct)


def test_log_det_pd_and_inverse_sqrt(hermitian_pd_factory):
    h = hermitian_pd_factory(3)
    assert log_det_pd(h) == pytest.approx(np.log(np.linalg.det(h).real))
    root = inverse_sqrt_pd(h)
    assert np.allclose(root @ h @ root, np.eye(3))
    with pytest.raises(NotPositiveDefiniteError):
        log_det_pd(np.diag([1.0, -1.0]))
    with pytest.raises(NotPositiveDefiniteError):
        inverse_sqrt_pd(np.diag([1.0, 0.0]))


@hypothesis_settings(max_examples=50, deadline=None)
@given(arrays(np.float64, (3, 3), elements=st.floats(-1, 1)), st.floats(1.05, 4.0))
def test_scaled_matrices_are_contractions(g, s):
    norm = spectral_norm(g)
    if norm < 1e-6:
        return
    c = as_contraction(g / (s * norm))
    assert c.norm <= 1 / s + 1e-12
