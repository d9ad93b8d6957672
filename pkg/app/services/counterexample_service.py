"""
Service for the indefinite Hua-Bellman instance refuting Bellman's claim and
for seeded searches for further instances.
"""
from dataclasses import dataclass
import logging
from typing import NamedTuple, Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from app.core.config import get_settings
from app.core.errors import InputValidationError
from app.core.linalg import scale_to_norm
from app.models.combinatorics import Field
from app.models.matrices import Contraction
from app.schemas.matrix_file import MatrixFile
from app.schemas.reports import CounterexampleRecord
from app.services.kernel_service import KernelService
from app.utils.parallel import ordered_map

logger = logging.getLogger(__name__)

# Six integer 2x2 matrices; each is rescaled to operator norm 1/2 before use.
PUBLISHED_MATRICES: tuple[tuple[tuple[int, int], tuple[int, int]], ...] = (
    ((-2, -9), (-5, -10)),
    ((9, -5), (9, 6)),
    ((-10, -3), (-6, 3)),
    ((-8, -8), (1, -10)),
    ((-2, 1), (-6, -1)),
    ((-1, 3), (10, -6)),
)
PUBLISHED_ALPHA = 0.5
PUBLISHED_NORM = 0.5
PUBLISHED_MIN_EIGENVALUE = -1.2066e-3


class TrialTask(NamedTuple):
    m: int
    n: int
    alpha: float
    entry_bound: int
    target_norm: float
    seed: int
    trial: int
    tol: float
    injected: Optional[tuple]


class TrialOutcome(NamedTuple):
    trial: int
    min_eigenvalue: float
    record: Optional[CounterexampleRecord]


@dataclass
class SearchOutcome:
    records: list[CounterexampleRecord]
    min_eigenvalues: list[float]

    def summary(self) -> dict:
        if not self.min_eigenvalues:
            return {"trials": 0, "min": None, "median": None, "violations": 0}
        values = np.array(self.min_eigenvalues)
        return {
            "trials": len(values),
            "min": float(values.min()),
            "median": float(np.median(values)),
            "violations": len(self.records),
        }


def _draw_family(rng: np.random.Generator, m: int, n: int, bound: int) -> list[NDArray[np.int64]]:
    family = []
    for _ in range(m):
        while True:
            draw = rng.integers(-bound, bound, size=(n, n), endpoint=True)
            if np.any(draw != 0):
                break
        family.append(draw)
    return family


def _record(contractions: Sequence[Contraction], alpha: float, lam_min: float, tol: float,
            seed: Optional[int], trial: Optional[int]) -> CounterexampleRecord:
    return CounterexampleRecord(
        matrices=[MatrixFile.from_array(c.matrix, name=f"A{j + 1}") for j, c in enumerate(contractions)],
        alpha=alpha,
        min_eigenvalue=lam_min,
        tolerance=tol,
        seed=seed,
        trial=trial,
    )


def _run_trial(task: TrialTask) -> TrialOutcome:
    if task.injected is not None and task.trial == 0:
        family = [np.array(a) for a in task.injected]
    else:
        rng = np.random.default_rng([task.seed, task.trial])
        family = _draw_family(rng, task.m, task.n, task.entry_bound)

    contractions = [scale_to_norm(a.astype(np.float64), task.target_norm) for a in family]
    h = KernelService.build_hua_bellman(contractions, task.alpha, Field.REAL)
    report = KernelService.pd_check(h, tol=task.tol)
    record = None
    if report.min_eigenvalue < -task.tol:
        record = _record(contractions, task.alpha, report.min_eigenvalue, task.tol, task.seed, task.trial)
    return TrialOutcome(task.trial, report.min_eigenvalue, record)


class CounterexampleService:
    """Replays the published indefinite instance and searches for new ones."""

    @staticmethod
    def published_matrices() -> list[NDArray[np.int64]]:
        return [np.array(a, dtype=np.int64) for a in PUBLISHED_MATRICES]

    @staticmethod
    def published_contractions() -> list[Contraction]:
        return [scale_to_norm(a.astype(np.float64), PUBLISHED_NORM) for a in CounterexampleService.published_matrices()]

    @staticmethod
    def bellman_counterexample_replay() -> CounterexampleRecord:
        contractions = CounterexampleService.published_contractions()
        h = KernelService.build_hua_bellman(contractions, PUBLISHED_ALPHA, Field.REAL)
        report = KernelService.pd_check(h)
        logger.info(f"Replayed published instance: min eigenvalue {report.min_eigenvalue:.6e}")
        return _record(contractions, PUBLISHED_ALPHA, report.min_eigenvalue, get_settings().SEARCH_TOL, None, None)

    @staticmethod
    def run_search(
        m: int,
        n: int,
        alpha: float,
        entry_bound: int,
        target_norm: float,
        trials: int,
        seed: int,
        workers: Optional[int] = None,
        injected: Optional[Sequence[NDArray]] = None,
        tol: Optional[float] = None,
    ) -> SearchOutcome:
        """
        Trial t draws m integer n x n matrices with entries uniform in
        [-entry_bound, entry_bound] from the substream seeded by (seed, t),
        rescales them to `target_norm` and records H_alpha when its minimum
        eigenvalue is below -tol. `injected`, when given, replaces the draw of trial 0.
        """
        if trials < 0:
            raise InputValidationError(f"trials must be non-negative, got {trials}")
        if not 0 < target_norm < 1:
            raise InputValidationError(f"target_norm must lie in (0, 1), got {target_norm}")
        if m < 1 or n < 1 or entry_bound < 1:
            raise InputValidationError("m, n and entry_bound must be positive")
        if seed < 0:
            raise InputValidationError(f"seed must be non-negative, got {seed}")
        tol = get_settings().SEARCH_TOL if tol is None else tol

        frozen = None if injected is None else tuple(tuple(map(tuple, np.asarray(a).tolist())) for a in injected)
        tasks = [TrialTask(m, n, alpha, entry_bound, target_norm, seed, t, tol, frozen) for t in range(trials)]

        logger.info(f"Counterexample search: m={m} n={n} alpha={alpha} bound={entry_bound} trials={trials} seed={seed}")
        outcomes = ordered_map(_run_trial, tasks, workers=workers)
        records = [o.record for o in outcomes if o.record is not None]
        logger.info(f"Counterexample search finished: {len(records)} indefinite instances")
        return SearchOutcome(records=records, min_eigenvalues=[o.min_eigenvalue for o in outcomes])

    @staticmethod
    def counterexample_search(
        m: int,
        n: int,
        alpha: float,
        entry_bound: int,
        target_norm: float,
        trials: int,
        seed: int,
        workers: Optional[int] = None,
        injected: Optional[Sequence[NDArray]] = None,
    ) -> list[CounterexampleRecord]:
        return CounterexampleService.run_search(
            m, n, alpha, entry_bound, target_norm, trials, seed, workers=workers, injected=injected
        ).records
