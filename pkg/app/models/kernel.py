from dataclasses import dataclass
import hashlib

import numpy as np
from numpy.typing import NDArray

from app.models.combinatorics import Field
from app.models.matrices import Contraction


@dataclass(frozen=True, eq=False)
class HuaBellmanMatrix:
    """
    Gram matrix [det(I - A_i^* A_j)^{-alpha}] of a family of strict contractions
    (plain transpose in the real field).

    Attributes:
        entries: m x m complex matrix, Hermitian by construction
        alpha: exponent
        source: the contractions A_1..A_m
        field: real (transpose) or complex (conjugate transpose)
    """
    entries: NDArray[np.complex128]
    alpha: float
    source: list[Contraction]
    field: Field

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def fingerprint(self) -> str:
        return matrix_fingerprint(self.entries)


def matrix_fingerprint(entries: NDArray) -> str:
    data = np.ascontiguousarray(entries, dtype="<c16")
    return hashlib.sha256(data.tobytes()).hexdigest()
