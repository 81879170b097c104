"""Deligne-Mostow weight systems and the INT / Sigma-INT integrality test."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .errors import InputError

ARITHMETIC_FLAGS = ("arithmetic", "nonarithmetic", "unknown")

INT = "INT"
SIGMA_INT_ONLY = "SigmaINT-only"
NEITHER = "neither"

# The integrality test comes from Deligne and Mostow's discreteness criterion
# (and Mostow's Sigma-INT refinement), not from the examples it is applied to.
INT_SOURCE = "Deligne-Mostow (INT); Mostow (Sigma-INT)"


@dataclass(frozen=True)
class DMWeights:
    numerators: tuple
    denominator: int
    arithmetic_flag: str = "unknown"
    source: str = ""
    signature: Optional[tuple] = None  # (curve count, weights, e_orb) of the associated orbifold

    def __post_init__(self):
        object.__setattr__(self, "numerators", tuple(int(n) for n in self.numerators))
        if self.denominator <= 0:
            raise InputError("denominator must be positive")
        if self.arithmetic_flag not in ARITHMETIC_FLAGS:
            raise InputError(f"unknown arithmeticity flag {self.arithmetic_flag!r}")

    @property
    def mu(self) -> list:
        return [Fraction(n, self.denominator) for n in self.numerators]

    @property
    def label(self) -> str:
        return f"({','.join(map(str, self.numerators))})/{self.denominator}"

    @classmethod
    def parse(cls, text: str) -> "DMWeights":
        """Parse ``"5,4,1,1,1/6"`` or ``"(5,4,1,1,1)/6"``."""
        body = text.strip().replace(" ", "")
        try:
            nums, den = body.rsplit("/", 1)
            nums = nums.strip("()")
            return cls(tuple(int(x) for x in nums.split(",")), int(den))
        except ValueError:
            raise InputError(f"cannot parse weights {text!r}; expected e.g. 5,4,1,1,1/6") from None


@dataclass(frozen=True)
class ValidationReport:
    total: Fraction
    problems: tuple

    @property
    def valid(self) -> bool:
        return not self.problems


def validate(w: DMWeights) -> ValidationReport:
    problems = []
    total = sum(w.mu, Fraction(0))
    if total != 2:
        problems.append(f"sum ≠ 2 (it is {total})")
    for n, m in enumerate(w.mu):
        if not 0 < m < 1:
            problems.append(f"mu_{n + 1} = {m} is not strictly between 0 and 1")
    return ValidationReport(total, tuple(problems))


def int_condition(w: DMWeights) -> str:
    """INT, Sigma-INT only, or neither."""
    is_int, is_sigma = True, True
    for i, j in combinations(range(len(w.mu)), 2):
        a, b = w.mu[i], w.mu[j]
        if a + b >= 1:
            continue
        q = 1 / (1 - a - b)
        if q.denominator == 1:
            continue
        is_int = False
        if not (a == b and (2 * q).denominator == 1):
            is_sigma = False
    if is_int:
        assert is_sigma
        return INT
    return SIGMA_INT_ONLY if is_sigma else NEITHER


def find(records: Sequence[DMWeights], w: DMWeights) -> Optional[DMWeights]:
    """The catalogue record with the same weights (order-insensitive), if any."""
    key = (sorted(w.mu), )
    for r in records:
        if (sorted(r.mu), ) == key:
            return r
    return None
