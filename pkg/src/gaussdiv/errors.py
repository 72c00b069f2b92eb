"""Exception types raised by gaussdiv.

Class names double as the short error codes written by the CLI, so keep
them stable.
"""


class GaussDivError(Exception):
    """Base class for all library errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class InvalidParameter(GaussDivError, ValueError):
    pass


class DimensionMismatch(GaussDivError, ValueError):
    pass


class InvalidNorm(GaussDivError, ValueError):
    """A density has squared L2 norm >= 1, so the embedded invariant is undefined."""


class DegenerateDenominator(GaussDivError, ArithmeticError):
    pass


class CauchySchwarzViolation(GaussDivError, ValueError):
    pass


class BelowValidityTime(GaussDivError, ValueError):
    def __init__(self, t: float, t_min: float):
        super().__init__(f"t={t!r} is not above the validity threshold t_min={t_min!r}")
        self.t = t
        self.t_min = t_min


class FactorizationFailure(GaussDivError, ArithmeticError):
    pass


class NumericalOverflow(GaussDivError, ArithmeticError):
    pass


class MaxDepthExceeded(GaussDivError, RuntimeError):
    """Adaptive quadrature hit its recursion limit; ``partial`` holds the estimate so far."""

    def __init__(self, partial: float, max_depth: int):
        super().__init__(f"adaptive quadrature exceeded max_depth={max_depth}; partial value {partial!r}")
        self.partial = partial
        self.max_depth = max_depth


class DimensionTooLarge(GaussDivError, ValueError):
    pass
