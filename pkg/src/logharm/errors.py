"""Exception hierarchy shared by every module of the package."""


class LogharmError(Exception):
    """Base class for all package errors."""


class ZeroConstantTerm(LogharmError, ZeroDivisionError):
    """Series division by a divisor that vanishes at the origin."""


class OutsideRadius(LogharmError, ValueError):
    """Evaluation requested beyond the trusted radius of a truncated series."""


class ExpressionSyntaxError(LogharmError, ValueError):
    """Malformed expression text; ``offset`` is the byte offset of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownIdentifier(ExpressionSyntaxError):
    pass


class SingularAtOrigin(LogharmError, ValueError):
    """An expression has a denominator vanishing at z=0."""


class DivisionNearZero(LogharmError, ZeroDivisionError):
    """Pointwise evaluation divided by a value of modulus below 1e-14."""


class BadNormalization(LogharmError, ValueError):
    pass


class DilatationNotVanishing(LogharmError, ValueError):
    """The dilatation has a(0) != 0, so the log-integral diverges at 0."""


class NotHerglotz(LogharmError, ValueError):
    pass


class NotRealCoefficient(LogharmError, ValueError):
    pass


class NotTypicallyReal(LogharmError, ValueError):
    pass


class DegenerateDenominator(LogharmError, ValueError):
    pass


class PreconditionFailed(LogharmError, ValueError):
    pass
