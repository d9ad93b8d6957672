"""
Combinatorial index types: integer partitions, cycle types, multi-indices and
the exponent sets that govern positive definiteness of Hua-Bellman matrices.
"""
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from enum import Enum
import math
from typing import Sequence

from app.core.errors import InputValidationError


class Field(str, Enum):
    REAL = "real"
    COMPLEX = "complex"


@dataclass(frozen=True, order=True)
class Partition:
    """
    Integer partition stored as non-increasing positive parts.

    Attributes:
        parts: the parts, largest first
    """
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 1 for p in parts):
            raise InputValidationError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise InputValidationError(f"partition parts must be non-increasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(sorted(parts, reverse=True)))

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    def hook_lengths(self) -> list[int]:
        conj = self.conjugate().parts
        return [
            (row_len - j - 1) + (conj[j] - i - 1) + 1
            for i, row_len in enumerate(self.parts)
            for j in range(row_len)
        ]

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.parts)) + "]"


@dataclass(frozen=True, order=True)
class CycleType(Partition):
    """Partition of n recording the cycle lengths of a permutation."""

    @classmethod
    def of_permutation(cls, perm: Sequence[int]) -> "CycleType":
        return cls(tuple(sorted(cycle_lengths(perm), reverse=True)))

    @property
    def cycle_count(self) -> int:
        return self.length

    @property
    def centralizer_order(self) -> int:
        """z_rho = prod_k k^{m_k} m_k!, so the class has n!/z_rho elements."""
        z = 1
        for length, mult in Counter(self.parts).items():
            z *= length ** mult * math.factorial(mult)
        return z

    @property
    def class_size(self) -> int:
        return math.factorial(self.n) // self.centralizer_order

    @property
    def sign(self) -> int:
        return -1 if (self.n - self.cycle_count) % 2 else 1


def validate_permutation(perm: Sequence[int]) -> tuple[int, ...]:
    """Permutations are 0-based image tuples: perm[i] = sigma(i)."""
    images = tuple(int(p) for p in perm)
    if sorted(images) != list(range(len(images))):
        raise InputValidationError(f"not a permutation of 0..{len(images) - 1}: {images}")
    return images


def cycle_lengths(perm: Sequence[int]) -> list[int]:
    images = validate_permutation(perm)
    seen = [False] * len(images)
    lengths = []
    for start in range(len(images)):
        if seen[start]:
            continue
        length, j = 0, start
        while not seen[j]:
            seen[j] = True
            j = images[j]
            length += 1
        lengths.append(length)
    return lengths


@dataclass(frozen=True, order=True)
class MultiIndex:
    """
    Element m of N^n.

    Attributes:
        components: m_1..m_n, non-negative
    """
    components: tuple[int, ...]

    def __post_init__(self):
        comps = tuple(int(c) for c in self.components)
        if any(c < 0 for c in comps):
            raise InputValidationError(f"multi-index components must be non-negative: {comps}")
        object.__setattr__(self, "components", comps)

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def order(self) -> int:
        """|m| = sum of components."""
        return sum(self.components)

    @property
    def factorial(self) -> int:
        """m! = product of component factorials."""
        return math.prod(math.factorial(c) for c in self.components)

    def monomial(self, x: Sequence[complex]) -> complex:
        return math.prod((xi ** c for xi, c in zip(x, self.components)), start=1)

    def __iter__(self):
        return iter(self.components)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.components)) + ")"


def to_fraction(value) -> Fraction:
    """Exact rational for ints, Fractions, decimal strings and floats (via their repr)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    return Fraction(repr(float(value)))


# N is taken to start at 0, so m+1 ranges over the positive integers.
NATURALS_START = 0


@dataclass(frozen=True)
class ExponentSet:
    """
    Exponent set of the positivity result for det(I - A*B)^{-alpha} on n x n strict
    contractions. Positive definiteness is guaranteed for its positive members only;
    for negative integers H_alpha can be indefinite.

        real:    D_R = {-(m+1)} u {(m+1)/2} u {0}, plus every real alpha > n-1
        complex: D_C = {+-(m+1)} u {0},           plus every real alpha > n-1
    """
    field: Field
    n: int

    def in_discrete_set(self, alpha) -> bool:
        a = to_fraction(alpha)
        first = NATURALS_START + 1
        if a == 0:
            return True
        if a.denominator == 1 and a.numerator <= -first:
            return True
        if self.field is Field.COMPLEX:
            return a.denominator == 1 and a.numerator >= first
        twice = 2 * a
        return twice.denominator == 1 and twice.numerator >= first

    def in_hua_range(self, alpha) -> bool:
        return to_fraction(alpha) > self.n - 1

    def __contains__(self, alpha) -> bool:
        return self.in_discrete_set(alpha) or self.in_hua_range(alpha)
