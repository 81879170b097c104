"""Exact-arithmetic checks for ball-quotient orbifold pairs.

Surfaces are presented combinatorially as finite curve arrangements; all
numbers are ``fractions.Fraction`` and no floating point is used anywhere.
"""

from .errors import (
    BallquotError,
    CosetOverflow,
    GroupOverflow,
    InconsistencyError,
    InputError,
    UnsupportedError,
)

__all__ = [
    "BallquotError",
    "CosetOverflow",
    "GroupOverflow",
    "InconsistencyError",
    "InputError",
    "UnsupportedError",
]

__version__ = "0.1.0"
