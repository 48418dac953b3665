"""Exception hierarchy for betactl.

Library code raises these; the CLI maps them to exit codes
(DomainError/HypothesisError/ConfigError -> 1, ConvergenceError/NumericalConsistencyError -> 2).
"""

from __future__ import annotations


class BetactlError(Exception):
    """Base class for all betactl errors."""


class DomainError(BetactlError, ValueError):
    """An argument lies outside the domain of the function being evaluated."""


class HypothesisError(DomainError):
    """A driver fails a sampled check of the hypotheses its solver relies on."""


class ConfigError(BetactlError):
    """Malformed parameters, grid strings, or config file values."""


class ConvergenceError(BetactlError):
    """A quadrature, series, or limit did not reach its tolerance."""


class RangeOverflowError(ConvergenceError):
    """A log-space accumulator left the double-precision range."""


class NumericalConsistencyError(BetactlError):
    """Two independent computations of the same quantity disagree."""


EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_CONVERGENCE = 2


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the CLI exit status."""
    if isinstance(exc, (ConvergenceError, NumericalConsistencyError)):
        return EXIT_CONVERGENCE
    return EXIT_DOMAIN
