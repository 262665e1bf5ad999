"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`TaylorResError`,
so callers (the CLI in particular) can separate bad input from internal bugs.
"""

from __future__ import annotations


class TaylorResError(Exception):
    """Base class for all library errors."""


class InputError(TaylorResError):
    """The user supplied something malformed."""


class AlphabetError(InputError):
    """Exponent vectors of different lengths, or a bad factor alphabet."""


class DomainError(InputError):
    """An operation was applied outside its domain (e.g. a non-dividing quotient)."""


class MinimalityError(InputError):
    """One generator divides another."""


class DuplicationError(InputError):
    """The same generator appears twice."""


class TightnessError(InputError):
    """Some factor of the alphabet occurs in no generator."""


class RealizationError(InputError):
    """A linear realization is inconsistent (zero row, proportional rows, bad shape)."""


class LatticeError(InputError):
    """A poset or lattice does not have the required structure."""


class GradingError(LatticeError):
    """A rank function fails to be a grading."""


class SaturationError(InputError):
    """A factor set is not saturated in the chosen mode."""


class IncompleteOracleError(InputError):
    """A depth table is missing a saturated set it is required to cover."""


class FieldError(InputError):
    """Unknown field specification or non-prime modulus."""


class InputSyntaxError(InputError):
    """Syntax error in an input file, with 1-based line and column."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class InvariantViolation(TaylorResError):
    """An internal invariant failed; indicates a bug rather than bad input."""


class MalformedComplexError(InvariantViolation):
    """A boundary map does not square to zero."""


class SubcomplexViolationError(InvariantViolation):
    """The lift of the minimal resolution left a nonzero residual."""
