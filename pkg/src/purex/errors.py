"""Exception types shared across the package."""


class PurexError(Exception):
    """Base class for package-specific errors."""


class DimensionError(PurexError, ValueError):
    """Matrix or vector shapes are incompatible with the operation."""


class NumericError(PurexError, ValueError):
    """Input contains non-finite entries or is otherwise numerically unusable."""


class ConvergenceError(PurexError, RuntimeError):
    """An iterative numerical procedure failed to converge."""


class ParameterError(PurexError, ValueError):
    """Physical or configuration parameters violate their constraints."""


class RegimeError(PurexError, ValueError):
    """Operation requested outside the parameter regime it supports."""


class DomainError(PurexError, ValueError):
    """Closed-form expression evaluated outside its case of validity."""


class EmptyExtractionError(PurexError, ValueError):
    """The conditional map has (numerically) no surviving component."""


class OrthogonalStartError(PurexError, ValueError):
    """Initial state has no overlap with the dominant eigenspace."""


class DegenerateSpectrumError(PurexError, ValueError):
    """Top of the spectrum is degenerate; the estimate is undefined."""


class ConfigError(PurexError, ValueError):
    """Command-line or config-file input could not be parsed."""
