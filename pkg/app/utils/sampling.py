"""Seeded random matrices for property suites and searches."""
import numpy as np
from numpy.typing import NDArray

from app.core.linalg import as_contraction
from app.models.matrices import Contraction

# Contractions are G / (s ||G||) with s uniform here, biased toward the unit sphere.
SHRINK_LOW = 1.05
SHRINK_HIGH = 4.0


def random_complex(rng: np.random.Generator, n: int, real: bool = False) -> NDArray[np.complex128]:
    g = rng.standard_normal((n, n))
    if real:
        return g.astype(np.complex128)
    return g + 1j * rng.standard_normal((n, n))


def random_contraction(rng: np.random.Generator, n: int, real: bool = False) -> Contraction:
    g = random_complex(rng, n, real=real)
    s = rng.uniform(SHRINK_LOW, SHRINK_HIGH)
    return as_contraction(g / (s * np.linalg.norm(g, 2)))


def random_hermitian_pd(rng: np.random.Generator, n: int, real: bool = False) -> NDArray[np.complex128]:
    g = random_complex(rng, n, real=real)
    shift = rng.uniform(0.05, 1.0)
    h = g @ g.conj().T / n + shift * np.eye(n)
    return 0.5 * (h + h.conj().T)


def random_psd(rng: np.random.Generator, n: int, real: bool = False) -> NDArray[np.complex128]:
    """Gram matrix A*A of a random A."""
    a = random_complex(rng, n, real=real)
    h = a.conj().T @ a
    return 0.5 * (h + h.conj().T)
