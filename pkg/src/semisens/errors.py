"""Exception hierarchy shared by every module."""


class SemisensError(Exception):
    """Base class for all errors raised by semisens."""


class TruncationDegreeError(SemisensError, ValueError):
    """A polynomial does not fit in the truncation degree of a functional or matrix."""


class DegreeConditionError(SemisensError, ValueError):
    """A generator term violates ``degree(p) <= order``."""


class DimensionError(SemisensError, ValueError):
    """Operands of incompatible truncation degree."""


class ExactScalarError(SemisensError, TypeError):
    """An exact (rational) operand was passed to a floating-only routine."""


class NumericFailure(SemisensError, ArithmeticError):
    """Non-finite values, or a series/scaling budget that was exhausted."""


class StationarityError(SemisensError, ValueError):
    """The reference functional is not stationary for the unperturbed generator."""

    def __init__(self, residual, tol):
        self.residual = residual
        self.tol = tol
        super().__init__(
            f"pi0 is not stationary for A_0: max residual {float(residual):.3e} > tol {tol:.3e}"
        )


class TailBoundError(SemisensError, ArithmeticError):
    """A truncated series could not be certified below the requested tolerance."""


class ConfigError(SemisensError, ValueError):
    """Invalid user-facing configuration (CLI flags, family documents)."""
