"""
Matrix carriers.

A plain complex128 ndarray plays the role of the general complex matrix; the
classes below wrap one that has passed a stronger validation.
"""
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray


@dataclass(frozen=True, eq=False)
class Contraction:
    """
    Square matrix with operator norm at most 1 - margin.

    Attributes:
        matrix: the n x n complex matrix
        norm: cached largest singular value of matrix
        margin: strictness margin the norm was validated against
    """
    matrix: NDArray[np.complex128]
    norm: float
    margin: float

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.matrix.imag == 0))

    @property
    def adjoint(self) -> NDArray[np.complex128]:
        return self.matrix.conj().T


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """Square matrix equal to its conjugate transpose up to `defect`."""
    matrix: NDArray[np.complex128]
    defect: float

    @property
    def n(self) -> int:
        return self.matrix.shape[0]
