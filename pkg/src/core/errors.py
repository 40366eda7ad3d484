"""Error hierarchy for hilbloc. Each class carries the CLI exit code it maps to."""
from __future__ import annotations

from typing import Optional


class HilblocError(Exception):
    """Base class for every error raised on purpose by hilbloc."""

    exit_code = 2


class VerificationFailure(HilblocError):
    """A property that must hold (double count, biconditional, roundtrip) failed."""

    exit_code = 1


class UsageError(HilblocError):
    """Bad input: mixed rings, ill-defined maps, non-invertible modules."""

    exit_code = 2


class FieldMismatchError(UsageError):
    pass


class ScalarDivisionError(UsageError, ZeroDivisionError):
    pass


class ParseError(UsageError):
    """Syntax error with a 1-based line/column position."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.reason = message
        self.line = line
        self.column = column


class UndefinedNameError(ParseError):
    pass


class BoundExceeded(HilblocError):
    """A configured resource bound was hit; results are never truncated silently."""

    exit_code = 3


class CommandError(HilblocError):
    """Wraps a failure inside a session with the index of the failing command."""

    def __init__(self, index: int, command: str, cause: HilblocError, report: Optional[object] = None):
        super().__init__(f"command {index} ({command}): {cause}")
        self.index = index
        self.command = command
        self.cause = cause
        self.report = report

    @property
    def exit_code(self) -> int:  # type: ignore[override]
        return self.cause.exit_code


def exit_code_for(exc: Optional[BaseException]) -> int:
    if exc is None:
        return 0
    if isinstance(exc, HilblocError):
        return exc.exit_code
    if isinstance(exc, ZeroDivisionError):
        return UsageError.exit_code
    return 1
