"""Exception types raised by flagball."""


class FlagError(Exception):
    """Base class for all flagball errors."""


class DomainError(FlagError, ValueError):
    """An argument lies outside the domain of the operation."""


class ShapeError(FlagError, ValueError):
    """Array lengths or band-limits do not match."""


class PreconditionError(FlagError, ValueError):
    """An input violates a structural precondition (e.g. a kernel is not axisymmetric)."""


class ConfigurationError(FlagError, ValueError):
    """Inconsistent transform or tiling parameters."""


class NumericError(FlagError, ArithmeticError):
    """An iterative numerical procedure failed to converge."""


class FormatError(FlagError, IOError):
    """A serialized file is malformed, truncated or of an unsupported kind."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset
