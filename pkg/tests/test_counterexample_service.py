import json
from pathlib import Path
import time

import numpy as np
import pytest

from app.core.errors import InputValidationError
from app.core.linalg import spectral_norm
from app.models.combinatorics import Field
from app.schemas.reports import Verdict
from app.services.counterexample_service import (
    PUBLISHED_ALPHA,
    PUBLISHED_MIN_EIGENVALUE,
    CounterexampleService,
)
from app.services.kernel_service import KernelService

GOLDEN = Path(__file__).parent / "golden" / "search_m8_n2_a0.5_b10_r0.5_seed42_t100000.json"


def test_replay_reproduces_published_eigenvalue():
    record = CounterexampleService.bellman_counterexample_replay()
    assert abs(record.min_eigenvalue - PUBLISHED_MIN_EIGENVALUE) <= 1e-7
    assert record.alpha == PUBLISHED_ALPHA
    assert [m.name for m in record.matrices] == [f"A{j}" for j in range(1, 7)]


def test_replay_finishes_within_a_second():
    started = time.perf_counter()
    CounterexampleService.bellman_counterexample_replay()
    assert time.perf_counter() - started < 1.0


def test_published_matrices_are_rescaled(published_contractions):
    assert len(published_contractions) == 6
    for c in published_contractions:
        assert c.is_real
        assert abs(c.norm - 0.5) <= 1e-12
        assert abs(spectral_norm(c.matrix) - 0.5) <= 1e-12


def test_published_matrix_is_real_symmetric_and_indefinite(published_contractions):
    h = KernelService.build_hua_bellman(published_contractions, PUBLISHED_ALPHA, Field.REAL)
    assert np.all(h.entries.imag == 0)
    assert np.array_equal(h.entries, h.entries.T)
    assert KernelService.pd_check(h).verdict is Verdict.INDEFINITE


def test_symmetrized_bound_stays_psd(published_contractions):
    bound = KernelService.build_symmetrized_bellman(published_contractions, PUBLISHED_ALPHA)
    h = KernelService.build_hua_bellman(published_contractions, PUBLISHED_ALPHA, Field.REAL)
    assert KernelService.pd_check(bound).is_psd
    assert np.all(h.entries.real <= bound.entries.real + 1e-12)


def test_search_with_no_trials():
    outcome = CounterexampleService.run_search(8, 2, 0.5, 10, 0.5, trials=0, seed=0, workers=1)
    assert outcome.records == []
    assert outcome.summary() == {"trials": 0, "min": None, "median": None, "violations": 0}


def test_search_recovers_injected_instance():
    records = CounterexampleService.counterexample_search(
        6, 2, 0.5, 10, 0.5, trials=3, seed=7, workers=1, injected=CounterexampleService.published_matrices()
    )
    assert records
    first = records[0]
    assert first.trial == 0
    assert first.seed == 7
    assert abs(first.min_eigenvalue - PUBLISHED_MIN_EIGENVALUE) <= 1e-7


def test_records_are_indefinite_below_tolerance():
    outcome = CounterexampleService.run_search(8, 2, 0.5, 10, 0.5, trials=200, seed=3, workers=1)
    assert len(outcome.min_eigenvalues) == 200
    for record in outcome.records:
        assert record.min_eigenvalue < -record.tolerance
        assert len(record.matrices) == 8
        for matrix in record.matrices:
            assert abs(spectral_norm(matrix.to_array()) - 0.5) <= 1e-12
    assert outcome.summary()["violations"] == len(outcome.records)


def test_search_is_independent_of_worker_count():
    single = CounterexampleService.run_search(8, 2, 0.5, 10, 0.5, trials=64, seed=11, workers=1)
    pooled = CounterexampleService.run_search(8, 2, 0.5, 10, 0.5, trials=64, seed=11, workers=4)
    assert single.min_eigenvalues == pooled.min_eigenvalues
    assert [r.model_dump() for r in single.records] == [r.model_dump() for r in pooled.records]


@pytest.mark.parametrize(
    "kwargs",
    [
        {"trials": -1},
        {"target_norm": 1.0},
        {"target_norm": 0.0},
        {"m": 0},
        {"entry_bound": 0},
        {"seed": -5},
    ],
)
def test_search_validates_parameters(kwargs):
    params = {"m": 4, "n": 2, "alpha": 0.5, "entry_bound": 3, "target_norm": 0.5, "trials": 1, "seed": 0}
    params.update(kwargs)
    with pytest.raises(InputValidationError):
        CounterexampleService.run_search(**params, workers=1)


@pytest.mark.slow
def test_golden_search_is_stable():
    outcome = CounterexampleService.run_search(8, 2, 0.5, 10, 0.5, trials=100_000, seed=42)
    current = {
        "summary": outcome.summary(),
        "trials": [r.trial for r in outcome.records],
        "min_eigenvalues": [r.min_eigenvalue for r in outcome.records],
    }
    if not GOLDEN.exists():
        GOLDEN.parent.mkdir(parents=True, exist_ok=True)
        GOLDEN.write_text(json.dumps(current, indent=2))
        pytest.skip(f"golden recorded at {GOLDEN}")

    golden = json.loads(GOLDEN.read_text())
    assert current["trials"] == golden["trials"]
    assert current["summary"]["violations"] == golden["summary"]["violations"]
    assert current["summary"]["min"] == pytest.approx(golden["summary"]["min"], rel=1e-9, abs=1e-15)
    assert current["min_eigenvalues"] == pytest.approx(golden["min_eigenvalues"], rel=1e-9, abs=1e-15)
