"""Exception types shared across the package."""


class ShapleyError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(ShapleyError, ValueError):
    """Invalid configuration: bad dimensions, malformed matrices, unknown names."""


class DimensionError(ConfigurationError):
    """The requested input dimension is outside what a routine supports."""


class EvaluationError(ShapleyError, RuntimeError):
    """A model produced unusable output (non-finite values, domain violations)."""


class DomainError(ShapleyError, ValueError):
    """A uniform sample lies outside the open unit interval for an unbounded marginal."""
