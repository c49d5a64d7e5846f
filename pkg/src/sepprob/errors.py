"""Exception hierarchy shared by all modules.

The CLI maps ``ValidationError`` to exit code 2 and ``NumericalError`` to 3.
"""


class SepprobError(Exception):
    """Base class for library errors."""


class ValidationError(SepprobError, ValueError):
    """Bad input: wrong shape, out-of-range parameter, non-Hermitian matrix."""


class NumericalError(SepprobError, ArithmeticError):
    """A numerical procedure failed to deliver the requested accuracy."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not converge; carries the partial estimate."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class CheckpointError(ValidationError):
    """Checkpoint cannot be used to resume the requested run."""
