# src/rhosocial/tevie/errors.py
"""
Exception hierarchy for the solver.

Every error raised on purpose by the package derives from ``TevieError`` and
carries the process exit status the command line front end maps it to. Solver
non-convergence is deliberately absent here: it is reported through
``SolveReport.converged`` rather than raised.
"""
from typing import Optional


class TevieError(Exception):
    """Base class for all package errors."""

    exit_code: int = 1


class DomainError(TevieError, ValueError):
    """An operation was called outside its mathematical domain."""

    exit_code = 2


class ConfigurationError(TevieError):
    """A scene or run configuration is invalid.

    ``line`` is the 1-based line of the offending entry when the error comes
    from a text source, ``source`` the file it came from.
    """

    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        self.line = line
        self.source = source
        location = ""
        if source is not None and line is not None:
            location = f"{source}:{line}: "
        elif line is not None:
            location = f"line {line}: "
        elif source is not None:
            location = f"{source}: "
        super().__init__(f"{location}{message}")
        self.message = message


class DegenerateContrastError(DomainError):
    """A contrast value makes a diagonal scaling vanish."""


class ResourceError(TevieError):
    """A memory or problem-size budget would be exceeded."""

    exit_code = 4

    def __init__(self, message: str, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(f"{message} (required {required}, budget {budget})")


class SingularityError(TevieError):
    """A dense factorization met a numerically zero pivot."""

    exit_code = 3


class AccuracyError(TevieError):
    """A reference series did not reach its accuracy target."""

    exit_code = 1


class NumericalError(TevieError):
    """A dense eigen-decomposition failed."""

    exit_code = 3


__all__ = [
    'TevieError',
    'DomainError',
    'ConfigurationError',
    'DegenerateContrastError',
    'ResourceError',
    'SingularityError',
    'AccuracyError',
    'NumericalError',
]
