"""Exception hierarchy shared by every potevt module."""


class PotError(Exception):
    """Base class for all errors raised by potevt."""


class InputError(PotError, ValueError):
    """Raw data could not be read or parsed."""


class DomainError(PotError, ValueError):
    """An argument lies outside the domain of the operation."""


class InsufficientDataError(PotError, ValueError):
    """Too few observations or exceedances to fit a model."""


class DegenerateDataError(PotError, ValueError):
    """Data has no spread (all values equal), so the likelihood is flat."""


class OutOfTailError(DomainError):
    """Requested confidence level lies below the modeled tail (alpha < 1 - m/N)."""


class DecompositionError(DomainError):
    """The alpha-quantile falls below the mean, so the region split is undefined."""


class ConfigError(PotError, ValueError):
    """Contradictory or invalid run configuration."""


class ConvergenceError(PotError):
    """The optimizer stopped at its iteration cap without meeting its tolerance."""
