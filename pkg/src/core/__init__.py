"""Core types for hilbloc: scalars, polynomials, resultants, errors, constants and config."""

from .constants import VERSION
from .errors import (
    BoundExceeded,
    CommandError,
    HilblocError,
    ParseError,
    UsageError,
    VerificationFailure,
)

__all__ = [
    "VERSION",
    "BoundExceeded",
    "CommandError",
    "HilblocError",
    "ParseError",
    "UsageError",
    "VerificationFailure",
]
