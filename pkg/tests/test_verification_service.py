import time

import pytest

from app.core.errors import InputValidationError
from app.services.verification_service import SUITES, VerificationService, _negative_binomial_tail


@pytest.fixture(scope="module")
def small_run():
    return {suite.suite: suite for suite in VerificationService.run("all", seed=0, count=6)}


def test_all_runs_every_suite(small_run):
    assert tuple(small_run) == SUITES


@pytest.mark.parametrize("name", SUITES)
def test_suites_pass_on_small_samples(small_run, name):
    suite = small_run[name]
    failed = [c.name for c in suite.checks if not c.passed]
    assert suite.passed, failed


def test_report_only_checks_never_fail(small_run):
    report_only = [c for suite in small_run.values() for c in suite.checks if c.report_only]
    assert {c.name for c in report_only} == {
        "negative_alpha_sign_report",
        "inadmissible_complex_half",
        "inadmissible_real_0.3",
    }
    assert all(c.passed for c in report_only)


def test_refutation_checks_are_part_of_pd(small_run):
    names = {c.name for c in small_run["pd"].checks}
    assert {"replay_min_eigenvalue_error", "replay_indefinite", "symmetrized_bound_negativity"} <= names


def test_metric_suite_counts_triples(small_run):
    triangles = [c for c in small_run["metric"].checks if c.name.startswith("triangle_")]
    assert len(triangles) == 7
    assert all(c.detail == {"triples": 6} for c in triangles)


def test_runs_are_deterministic():
    first = VerificationService.run("majorization", seed=3, count=5)
    second = VerificationService.run("majorization", seed=3, count=5)
    assert [s.model_dump() for s in first] == [s.model_dump() for s in second]


def test_run_validates_arguments():
    with pytest.raises(InputValidationError):
        VerificationService.run("all", seed=0, count=0)
    with pytest.raises(InputValidationError):
        VerificationService.run("all", seed=-1, count=1)
    with pytest.raises(InputValidationError):
        VerificationService.run("geometry", seed=0, count=1)


def test_negative_binomial_tail():
    assert _negative_binomial_tail(1.0, 0.5, 0) == pytest.approx(1.0)
    assert _negative_binomial_tail(1.0, 0.5, 3) == pytest.approx(0.125)
    assert _negative_binomial_tail(2.0, 0.3, 12) > 0


@pytest.mark.slow
def test_default_sample_counts_pass():
    for suite in VerificationService.run("all", seed=0, count=10_000, workers=None):
        assert suite.passed, [c.name for c in suite.checks if not c.passed]


def test_pd_suite_at_hundred_instances_is_fast():
    started = time.perf_counter()
    (suite,) = VerificationService.run("pd", seed=0, count=100)
    assert time.perf_counter() - started < 60.0
    assert suite.passed, [c.name for c in suite.checks if not c.passed]
