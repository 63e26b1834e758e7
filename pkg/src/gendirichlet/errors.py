"""Exception types shared by every module.

The command line maps :class:`ValidationError` to exit code 2 and
:class:`NumericalError` (with its subclasses) to exit code 3.
"""


class ValidationError(ValueError):
    """Raised when inputs violate a documented precondition."""


class NumericalError(ArithmeticError):
    """Raised when a computation cannot reach its requested accuracy."""


class PrecisionLossError(NumericalError):
    """Raised when a subtraction cancels every significant digit."""


class QuadratureError(NumericalError):
    """Raised when a quadrature fails to meet its tolerance.

    Attributes
    ----------
    achieved : float
        The error estimate that was actually reached.
    """

    def __init__(self, message, achieved=float("nan")):
        super().__init__(message)
        self.achieved = achieved


class AmbiguityError(NumericalError):
    """Raised when tolerance clustering cannot separate spectrum points."""
