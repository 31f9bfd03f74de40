"""Error hierarchy for polybound."""

from __future__ import annotations

from enum import Enum
from typing import Any


class ErrorCode(str, Enum):
    """Stable error codes for programmatic handling and logging."""

    UNKNOWN = "unknown"

    # Input errors
    INPUT_INVALID = "input.invalid"
    DOMAIN_ERROR = "domain.error"
    STATE_UNSUPPORTED = "state.unsupported"
    SPEC_PARSE_FAILED = "spec.parse"

    # Potential / solver errors
    POTENTIAL_NONCONFINING = "potential.nonconfining"
    EXPONENT_TOO_LARGE = "solver.exponent_too_large"
    SOLVER_CONVERGENCE = "solver.convergence"

    # Special functions and root finding
    GAMMA_OVERFLOW = "gamma.overflow"
    ROOT_BRACKET = "root.bracket"

    # Persistence / reproduction
    CACHE_IO = "cache.io"
    TABLE_MISMATCH = "table.mismatch"


class PolyboundError(Exception):
    """Base exception for polybound with structured error metadata."""

    default_code: ErrorCode = ErrorCode.UNKNOWN
    exit_code: int = 2

    def __init__(
        self,
        message: str,
        *,
        error_code: ErrorCode | None = None,
        context: dict[str, Any] | None = None,
        cause: Exception | None = None,
    ) -> None:
        super().__init__(message)
        self.error_code: ErrorCode = error_code or self.default_code
        self.context: dict[str, Any] = context or {}
        self.cause = cause
        if cause is not None:
            self.__cause__ = cause


class InputValidationError(PolyboundError):
    """Invalid input payload (state labels, potential terms, config)."""

    default_code = ErrorCode.INPUT_INVALID


class DomainError(PolyboundError):
    """Argument outside the mathematical domain of a formula."""

    default_code = ErrorCode.DOMAIN_ERROR


class UnsupportedStateError(DomainError):
    """State/dimension combination with no defined closed form."""

    default_code = ErrorCode.STATE_UNSUPPORTED


class SpecParseError(InputValidationError):
    """Potential spec file could not be parsed; context carries field and line."""

    default_code = ErrorCode.SPEC_PARSE_FAILED


class NonConfiningPotentialError(DomainError):
    """Potential has no confining term, so the spectrum is not purely discrete."""

    default_code = ErrorCode.POTENTIAL_NONCONFINING


class ExponentTooLargeError(DomainError):
    """Largest exponent exceeds the solver's accuracy cap."""

    default_code = ErrorCode.EXPONENT_TOO_LARGE


class SolverConvergenceError(PolyboundError):
    """Eigenvalue could not be bracketed or refined; context carries the last bracket."""

    default_code = ErrorCode.SOLVER_CONVERGENCE
    exit_code = 3


class GammaOverflowError(DomainError):
    """Gamma-function P approximation overflowed."""

    default_code = ErrorCode.GAMMA_OVERFLOW


class RootBracketError(PolyboundError):
    """Scalar root could not be bracketed; context carries the final bracket."""

    default_code = ErrorCode.ROOT_BRACKET
    exit_code = 3


class CacheError(PolyboundError):
    """P-number cache could not be read or written."""

    default_code = ErrorCode.CACHE_IO
    exit_code = 4


class TableMismatchError(PolyboundError):
    """A reproduced table cell is outside tolerance."""

    default_code = ErrorCode.TABLE_MISMATCH
    exit_code = 1
