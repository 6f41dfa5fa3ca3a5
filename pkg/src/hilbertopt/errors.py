"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands have incompatible dimensions."""


class NonFiniteError(ValueError):
    """A vector contains NaN or infinite entries."""


class RangeError(ArithmeticError):
    """Evaluation would overflow the float64 range."""


class NumericError(ArithmeticError):
    """A solver met a non-finite value or gradient.

    The offending iterate is kept on ``iterate``.
    """

    def __init__(self, message, iterate=None):
        super().__init__(message)
        self.iterate = iterate


class InfeasiblePointError(ValueError):
    """A point expected to lie in a feasible set does not."""


class OracleError(RuntimeError):
    """An independent reference solver failed to converge."""
