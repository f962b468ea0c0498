"""Exception hierarchy shared by all modules."""


class GBKError(Exception):
    """Base class for every error raised by the package."""


class InvalidInputError(GBKError, ValueError):
    """Shapes, grades or dimensions do not fit together."""


class CapacityError(GBKError, ValueError):
    """Requested exterior power exceeds the supported size."""


class DegenerateInputError(GBKError, ValueError):
    """Vectors are (numerically) linearly dependent."""


class DomainError(GBKError, ValueError):
    """Point lies outside the domain where a function is defined."""


class PreconditionError(GBKError, ValueError):
    """A mathematical precondition of an operation does not hold."""


class NumericError(GBKError, ArithmeticError):
    """An iterative or finite-difference computation failed."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class NumericWarning(UserWarning):
    """A finite-difference result looks unreliable but was still returned."""
