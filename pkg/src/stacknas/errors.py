"""Exception hierarchy shared across the pipeline."""


class StackNASError(Exception):
    """Base class for all package errors."""


class ConfigError(StackNASError, ValueError):
    """Invalid configuration value or unknown key."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class DataError(StackNASError, ValueError):
    """Malformed or inconsistent input data."""


class ParseError(DataError):
    """Token string has the wrong shape or an out-of-domain character."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class StructureError(DataError):
    """Architecture tokens are well-formed but structurally invalid."""


class DomainError(DataError):
    """Value outside the domain of an operation."""


class SingularMatrixError(StackNASError, ValueError):
    """A linear system is numerically singular."""


class MetricUndefinedError(StackNASError, ValueError):
    """The metric has a zero denominator for this input."""
