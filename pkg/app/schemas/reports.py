"""
Schemas for verdicts, counterexample records and run reports.
"""
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, model_validator

from app.schemas.matrix_file import MatrixFile


class Verdict(str, Enum):
    POSITIVE_DEFINITE = "positive-definite"
    POSITIVE_SEMIDEFINITE = "positive-semidefinite"
    INDEFINITE = "indefinite"


class PDReport(BaseModel):
    """Minimum eigenvalue and definiteness verdict of a Hermitian Gram matrix."""
    min_eigenvalue: float
    tolerance: float
    verdict: Verdict
    trace: float
    fingerprint: str = Field(..., description="sha256 of the matrix entries")

    class Config:
        json_schema_extra = {
            "example": {
                "min_eigenvalue": -0.0012066,
                "tolerance": 1e-10,
                "verdict": "indefinite",
                "trace": 10.6,
                "fingerprint": "3f5c...",
            }
        }

    @classmethod
    def classify(cls, min_eigenvalue: float, tolerance: float) -> Verdict:
        if min_eigenvalue > tolerance:
            return Verdict.POSITIVE_DEFINITE
        if min_eigenvalue >= -tolerance:
            return Verdict.POSITIVE_SEMIDEFINITE
        return Verdict.INDEFINITE

    @model_validator(mode="after")
    def check_verdict(self):
        expected = self.classify(self.min_eigenvalue, self.tolerance)
        if self.verdict != expected:
            raise ValueError(f"verdict {self.verdict.value} inconsistent with min eigenvalue {self.min_eigenvalue}")
        return self

    @property
    def is_psd(self) -> bool:
        return self.verdict != Verdict.INDEFINITE

    @property
    def relative_min_eigenvalue(self) -> float:
        """Minimum eigenvalue over |trace|, the scale-free margin used by property suites."""
        return self.min_eigenvalue / max(abs(self.trace), 1e-300)


class CounterexampleRecord(BaseModel):
    """A family of contractions whose Hua-Bellman matrix is indefinite."""
    matrices: List[MatrixFile]
    alpha: float
    min_eigenvalue: float
    tolerance: float
    seed: Optional[int] = None
    trial: Optional[int] = None

    @model_validator(mode="after")
    def check_negative(self):
        if self.min_eigenvalue >= -self.tolerance:
            raise ValueError(f"min eigenvalue {self.min_eigenvalue} is not below -{self.tolerance}")
        return self


class CheckResult(BaseModel):
    """Worst residual or violation of one property over its samples."""
    name: str
    worst: float
    tolerance: float
    samples: int
    passed: bool
    report_only: bool = False
    detail: Optional[Dict[str, Any]] = None


class SuiteResult(BaseModel):
    suite: str
    passed: bool
    checks: List[CheckResult]


class RunReport(BaseModel):
    """Structured output of one CLI command."""
    command: str
    version: str
    parameters: Dict[str, Any]
    seed: Optional[int] = None
    results: Dict[str, Any]
    runtime: Dict[str, Any] = Field(default_factory=dict, description="wall time and workers; not reproducible")
