"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: ValidationError -> 2,
NumericalError -> 3, UnreliableResultError -> 4.
"""


class RollwaveError(Exception):
    """Base class for all package errors."""


class ValidationError(RollwaveError):
    """Bad configuration or arguments (domain errors, schema violations)."""


class NumericalError(RollwaveError):
    """A numerical procedure failed (splitting loss, non-convergence, blow-up)."""


class UnreliableResultError(RollwaveError):
    """A result was computed but does not meet its reliability criterion."""
