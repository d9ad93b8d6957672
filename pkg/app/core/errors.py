"""
Exception hierarchy shared by every module.

Each error class carries the process exit code the CLI reports for it:
1 for invalid input, 2 for numerical failures, 3 for failed verification suites.
"""
from functools import wraps
import logging

import numpy as np

logger = logging.getLogger(__name__)


class HuaBellmanError(Exception):
    exit_code = 1


class InputValidationError(HuaBellmanError, ValueError):
    """Input violates a documented precondition."""
    exit_code = 1


class NotAContractionError(InputValidationError):
    def __init__(self, norm: float, margin: float):
        self.norm = norm
        self.margin = margin
        super().__init__(
            f"not a strict contraction: operator norm {norm:.17g} exceeds 1 - {margin:g}"
        )


class NotPositiveDefiniteError(InputValidationError):
    pass


class CapacityError(InputValidationError):
    pass


class NumericalError(HuaBellmanError, ArithmeticError):
    """A numerical routine failed or produced a result outside tolerance."""
    exit_code = 2


class BranchError(NumericalError):
    """Input lies outside the region where the principal branch is guaranteed."""
    pass


class ConvergenceError(NumericalError):
    pass


class InvariantViolationError(NumericalError):
    pass


class VerificationFailedError(HuaBellmanError):
    exit_code = 3

    def __init__(self, suites: list[str]):
        self.suites = suites
        super().__init__(f"verification failed: {', '.join(suites)}")


def handle_numerical_errors(func):
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except np.linalg.LinAlgError as e:
            logger.error(f"LAPACK failure in {func.__name__}: {e}")
            raise ConvergenceError(f"{func.__name__}: {e}") from e

    return wrapper
