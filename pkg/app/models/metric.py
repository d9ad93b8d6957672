from dataclasses import dataclass
from enum import Enum
import logging
import math
from typing import NamedTuple, Optional

import numpy as np
from numpy.typing import NDArray

from app.core.config import get_settings
from app.core.errors import InvariantViolationError

logger = logging.getLogger(__name__)


class MetricKind(str, Enum):
    HUA = "hua"
    SDIV = "sdiv"
    DELTAP = "deltap"


@dataclass(frozen=True)
class DistanceValue:
    """
    A squared distance and its square root.

    Attributes:
        squared: non-negative squared distance
        value: sqrt(squared)
    """
    squared: float
    value: float

    @classmethod
    def from_squared(cls, raw: float, scale: float = 1.0, tol: Optional[float] = None) -> "DistanceValue":
        """Clamp roundoff negatives within tol * scale to 0; anything lower is an error."""
        tol = get_settings().DISTANCE_CLAMP_TOL if tol is None else tol
        raw = float(raw)
        if raw < 0:
            if raw < -tol * scale:
                raise InvariantViolationError(f"squared distance {raw:.3e} is negative beyond roundoff")
            logger.debug(f"Clamped squared distance {raw:.3e} to 0")
            raw = 0.0
        return cls(squared=raw, value=math.sqrt(raw))


@dataclass(frozen=True, eq=False)
class MobiusPair:
    """
    Images X = (I-A)^{-1}(I+A), Y = (I-B)^{-1}(I+B) of two strict contractions.

    Attributes:
        x, y: the images
        identity_residual: relative gap in I - A*B = 2(I+X*)^{-1}(X*+Y)(I+Y)^{-1}
        real_part_residual: relative gap in Re X = 1/4 (I+X*)(I-A*A)(I+X), worst of X and Y
        min_real_eigenvalue_x, min_real_eigenvalue_y: smallest eigenvalues of Re X, Re Y

    A non-positive real part raises. Residuals above MOBIUS_RESIDUAL_TOL are logged as warnings;
    the metric suite reports them as checks.
    """
    x: NDArray[np.complex128]
    y: NDArray[np.complex128]
    identity_residual: float
    real_part_residual: float
    min_real_eigenvalue_x: float
    min_real_eigenvalue_y: float

    def __post_init__(self):
        if min(self.min_real_eigenvalue_x, self.min_real_eigenvalue_y) <= 0:
            raise InvariantViolationError("Moebius image has a real part that is not positive definite")
        tol = get_settings().MOBIUS_RESIDUAL_TOL
        worst = max(self.identity_residual, self.real_part_residual)
        if worst > tol:
            logger.warning(f"Moebius identity residual {worst:.3e} exceeds {tol:.1e}")


class DecompositionResult(NamedTuple):
    lhs: float
    rhs: float
    residual: float
    divergence_term: float
    skew_term: float


class ScalarChainResult(NamedTuple):
    """Verdicts of the three scalar steps behind the delta_p triangle inequality."""
    majorization: bool
    squared_majorization: bool
    minkowski: bool

    @property
    def holds(self) -> bool:
        return self.majorization and self.squared_majorization and self.minkowski
