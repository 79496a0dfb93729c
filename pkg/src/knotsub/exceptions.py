"""Exception hierarchy shared by every knotsub module."""


class KnotsubError(Exception):
    """Base class for all errors raised by knotsub."""

    kind = "error"


class InvalidInputError(KnotsubError, ValueError):
    """Malformed input: wrong shape, non-finite entries, bad indices."""

    kind = "invalid-input"


class UnsupportedDimensionError(InvalidInputError):
    kind = "unsupported-dimension"


class PreconditionError(KnotsubError, ValueError):
    """Input is well formed but violates an operation's precondition."""

    kind = "precondition"


class DomainError(KnotsubError, ValueError):
    """The requested object does not exist for this input."""

    kind = "domain"


class NotPeriodicError(KnotsubError, ValueError):
    kind = "not-periodic"
