"""
Partitions and irreducible characters of the symmetric group.

Characters are evaluated with the Murnaghan-Nakayama rule on beta-sets:
removing a rim hook of length k from lambda is the same as sliding one bead
of the beta-set down by k onto a free position, and the sign of the hook is
(-1) to the number of beads jumped over.
"""
from functools import lru_cache
import math
from typing import Iterator, Optional

from app.core.config import get_settings
from app.core.errors import CapacityError, InputValidationError
from app.models.combinatorics import CycleType, Partition


def _iter_parts(n: int, max_part: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _iter_parts(n - first, first):
            yield (first,) + rest


def partitions(n: int, cap: Optional[int] = None) -> list[Partition]:
    """All partitions of n in reverse-lexicographic order."""
    cap = get_settings().PERMANENT_CAP if cap is None else cap
    if n < 1:
        raise InputValidationError(f"n must be at least 1, got {n}")
    if n > cap:
        raise CapacityError(f"n={n} exceeds the configured cap {cap}")
    return [Partition(p) for p in _iter_parts(n, n)]


def cycle_types(n: int, cap: Optional[int] = None) -> list[CycleType]:
    return [CycleType(p.parts) for p in partitions(n, cap)]


def hook_length_dimension(lam: Partition) -> int:
    """chi_lambda(id) = n! / prod(hook lengths)."""
    return math.factorial(lam.n) // math.prod(lam.hook_lengths())


@lru_cache(maxsize=None)
def _murnaghan_nakayama(lam: tuple[int, ...], rho: tuple[int, ...]) -> int:
    if not rho:
        return 1 if not lam else 0
    if all(r == 1 for r in rho):
        return hook_length_dimension(Partition(lam))

    k, rest = rho[0], rho[1:]
    length = len(lam)
    beta = [lam[i] + (length - 1 - i) for i in range(length)]
    beads = set(beta)

    total = 0
    for b in beta:
        target = b - k
        if target < 0 or target in beads:
            continue
        height = sum(1 for c in beads if target < c < b)
        moved = sorted((beads - {b}) | {target}, reverse=True)
        reduced = tuple(p for p in (moved[i] - (length - 1 - i) for i in range(length)) if p > 0)
        value = _murnaghan_nakayama(reduced, rest)
        total += -value if height % 2 else value
    return total


def character(lam: Partition, rho: CycleType) -> int:
    """chi_lambda evaluated on the conjugacy class with cycle type rho."""
    if lam.n != rho.n:
        raise InputValidationError(f"partition {lam} and cycle type {rho} have different sizes")
    return _murnaghan_nakayama(lam.parts, rho.parts)
