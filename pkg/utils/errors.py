"""
Exception hierarchy shared by every package of the toolkit.
"""
from typing import Optional


class H10Error(Exception):
    """Base class for all toolkit errors."""


class ShapeError(H10Error):
    """Register count, arity or index does not match the object it is applied to."""


class DomainError(H10Error):
    """Argument outside the domain of an operation."""


class DivisionByZeroError(H10Error, ZeroDivisionError):
    """Euclidean division by zero."""


class InvalidModulusError(H10Error):
    """Modulus is not prime where a prime is required."""


class DigitOverflowError(H10Error):
    """A cipher component does not fit in its digit width."""


class RegularityError(H10Error):
    """FRACTRAN program contains a zero denominator."""


class SelfLoopError(H10Error):
    """Minsky machine contains an instruction i: DEC a i."""


class UnsupportedStartError(H10Error):
    """Compiler requires a program starting at PC 1."""


class CompilerConstraintError(H10Error):
    """Register layout side conditions of the recursive-algorithm compiler are violated."""


class ClosednessError(H10Error):
    """Lambda term is open where a closed term is required."""


class ParseError(H10Error):
    """
    Malformed input document.

    Args:
        message: What went wrong
        position: Line/column of a JSON error or the schema path of a validation error
    """

    def __init__(self, message: str, position: Optional[str] = None):
        self.position = position
        if position:
            message = f"{message} (at {position})"
        super().__init__(message)
