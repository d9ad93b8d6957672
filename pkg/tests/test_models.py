import json
import logging

import numpy as np
import pytest
from pydantic import ValidationError

from app.core.errors import InputValidationError, InvariantViolationError
from app.models.metric import DistanceValue, MobiusPair, ScalarChainResult
from app.schemas.matrix_file import MatrixFile
from app.schemas.reports import CounterexampleRecord, PDReport, Verdict


def test_matrix_file_roundtrip(tmp_path):
    matrix = np.array([[0.1 + 0.2j, -1 / 3], [1e-17, 0.5j]])
    path = tmp_path / "a.json"
    MatrixFile.from_array(matrix, name="A").write(path)

    loaded = MatrixFile.read(path)
    assert loaded.name == "A"
    assert loaded.rows == 2 and loaded.cols == 2
    assert np.array_equal(loaded.to_array(), matrix)


def test_matrix_file_layout():
    data = MatrixFile.from_array([[1, 2j]]).model_dump(mode="json")
    assert data["entries"] == [[[1.0, 0.0], [0.0, 2.0]]]


def test_matrix_file_rejects_bad_shape(tmp_path):
    with pytest.raises(ValidationError):
        MatrixFile(rows=2, cols=2, entries=[[(1.0, 0.0), (0.0, 0.0)]])

    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"rows": 1, "cols": 2, "entries": [[[1, 0]]]}))
    with pytest.raises(InputValidationError):
        MatrixFile.read(path)
    with pytest.raises(InputValidationError):
        MatrixFile.read(tmp_path / "missing.json")


@pytest.mark.parametrize(
    "lam, tol, verdict",
    [
        (1.0, 1e-10, Verdict.POSITIVE_DEFINITE),
        (5e-11, 1e-10, Verdict.POSITIVE_SEMIDEFINITE),
        (-1e-10, 1e-10, Verdict.POSITIVE_SEMIDEFINITE),
        (-1.2066e-3, 1e-10, Verdict.INDEFINITE),
    ],
)
def test_pd_report_classify(lam, tol, verdict):
    assert PDReport.classify(lam, tol) is verdict
    report = PDReport(min_eigenvalue=lam, tolerance=tol, verdict=verdict, trace=2.0, fingerprint="x")
    assert report.is_psd is (verdict is not Verdict.INDEFINITE)
    assert report.relative_min_eigenvalue == pytest.approx(lam / 2)


def test_pd_report_rejects_inconsistent_verdict():
    with pytest.raises(ValidationError):
        PDReport(min_eigenvalue=-1.0, tolerance=1e-10, verdict="positive-definite", trace=1.0, fingerprint="x")


def test_counterexample_record_requires_negative_eigenvalue():
    matrices = [MatrixFile.from_array(np.eye(2) * 0.5, name="A1")]
    record = CounterexampleRecord(matrices=matrices, alpha=0.5, min_eigenvalue=-1e-3, tolerance=1e-8)
    assert record.seed is None
    with pytest.raises(ValidationError):
        CounterexampleRecord(matrices=matrices, alpha=0.5, min_eigenvalue=-1e-9, tolerance=1e-8)


def test_distance_value_clamps_roundoff_only():
    assert DistanceValue.from_squared(4.0).value == 2.0
    assert DistanceValue.from_squared(-1e-14).squared == 0.0
    assert DistanceValue.from_squared(-1e-11, scale=100.0).squared == 0.0
    with pytest.raises(InvariantViolationError):
        DistanceValue.from_squared(-1e-6)


def test_mobius_pair_requires_positive_real_parts():
    eye = np.eye(2, dtype=np.complex128)
    with pytest.raises(InvariantViolationError):
        MobiusPair(eye, eye, 0.0, 0.0, 1.0, 0.0)


def test_mobius_pair_warns_on_large_residual(caplog):
    eye = np.eye(2, dtype=np.complex128)
    with caplog.at_level(logging.WARNING, logger="app.models.metric"):
        MobiusPair(eye, eye, 1e-14, 1e-14, 1.0, 1.0)
    assert not caplog.records
    with caplog.at_level(logging.WARNING, logger="app.models.metric"):
        MobiusPair(eye, eye, 1e-6, 0.0, 1.0, 1.0)
    assert "exceeds" in caplog.text


def test_scalar_chain_holds_needs_every_step():
    assert ScalarChainResult(True, True, True).holds
    assert not ScalarChainResult(True, False, True).holds
