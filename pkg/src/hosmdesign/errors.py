"""Exception hierarchy.

``ValueError`` subclasses mean the caller handed in something malformed;
``NumericalError`` subclasses mean well-formed input hit a numerical wall
(singular matrices, failed post-verification).  The CLI maps the two
families to exit codes 1 and 2.
"""


class DimensionError(ValueError):
    """Array shapes are inconsistent."""


class NonFiniteError(ValueError):
    """An array contains NaN or Inf."""


class NumericalError(ArithmeticError):
    """Base class for numerical breakdown."""


class SingularMatrixError(NumericalError):
    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot


class ConvergenceError(NumericalError):
    pass


class UncontrollableError(SingularMatrixError):
    pass


class RelativeDegreeError(NumericalError):
    """The output has no relative degree (it is decoupled from the input)."""


class ConditioningError(NumericalError):
    pass


class DesignVerificationError(NumericalError):
    def __init__(self, message, numerator=None, realized_r=None):
        super().__init__(message)
        self.numerator = numerator
        self.realized_r = realized_r
