"""
Core exception types for polyrealize.

Every error carries an ``exit_code`` that the CLI returns unchanged, the same
way VFS errors carry an errno.
"""

from __future__ import annotations


class PolyRealizeError(Exception):
    """Base exception for polyrealize operations."""

    exit_code: int = 1


class InputError(PolyRealizeError):
    """Raised when an argument or input file is invalid."""

    exit_code: int = 1


class ParseError(InputError):
    """
    Raised when system text does not follow the input grammar.

    Attributes:
        line: 1-based line number of the offending token (None if unknown)
        column: 1-based column number of the offending token (None if unknown)
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class UnknownVariableError(ParseError):
    """Raised when a term uses an identifier missing from the vars: header."""

    def __init__(self, name: str, line: int | None = None, column: int | None = None):
        self.name = name
        super().__init__(f"Unknown variable '{name}'", line, column)


class EmptySystemError(ParseError):
    """Raised when a system has no equations, or an equation is identically zero."""


class DimensionMismatchError(InputError, ValueError):
    """Raised when variable counts or vector lengths disagree."""


class DegreeError(InputError, ValueError):
    """Raised when a Macaulay degree violates a precondition."""


class GridTooSmallError(InputError):
    """Raised when a trajectory grid cannot hold a full difference equation."""


class NoStabilizationError(PolyRealizeError):
    """
    Raised when no degree gap appears before the maximal degree.

    Either the solution set is positive-dimensional or max_degree is too low;
    exhausting the schedule is inconclusive, not a certificate.
    """

    exit_code: int = 2

    def __init__(self, message: str, degrees_tried: list[int] | None = None):
        self.degrees_tried = degrees_tried or []
        super().__init__(message)


class NumericalError(PolyRealizeError):
    """Raised when a dense kernel fails (e.g. eigenvalue iteration did not converge)."""

    exit_code: int = 3


class DegenerateBasisError(NumericalError):
    """Raised when a null-space basis has fewer independent rows than columns."""


class DegenerateShiftError(NumericalError):
    """
    Raised when S0 Z_R loses column rank.

    Usually means undetected roots at infinity or a wrong affine root count.
    """


class RealizationError(PolyRealizeError):
    """Raised when a state-space realization cannot be formed at this degree."""

    exit_code: int = 3


class VerificationError(PolyRealizeError):
    """Raised when supplied roots do not satisfy the system."""

    exit_code: int = 4
