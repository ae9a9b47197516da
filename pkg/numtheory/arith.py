"""
Exact integer kernels: Euclidean division, digit decompositions and bitwise helpers.
"""
import logging
from typing import List, Sequence, Tuple

from utils.errors import DivisionByZeroError, DomainError

logger = logging.getLogger(__name__)


def euclid_div(a: int, b: int) -> Tuple[int, int]:
    """
    Divide a by b over the naturals.

    Args:
        a: Dividend
        b: Divisor, must be positive

    Returns:
        (quotient, remainder) with a = quotient*b + remainder and remainder < b
    """
    if a < 0 or b < 0:
        raise DomainError(f"euclid_div expects naturals, got ({a}, {b})")
    if b == 0:
        raise DivisionByZeroError("euclid_div by zero")
    return divmod(a, b)


def tsub(a: int, b: int) -> int:
    """Truncated subtraction, so that 0 - 1 = 0."""
    return a - b if a > b else 0


def base_digits(c: int, q: int) -> List[int]:
    """
    Little-endian digits of c in base q.

    Args:
        c: Number to decompose
        q: Base, at least 2

    Returns:
        Digits without trailing zeros; the empty list for c = 0
    """
    if q < 2:
        raise DomainError(f"base must be at least 2, got {q}")
    if c < 0:
        raise DomainError(f"base_digits expects a natural, got {c}")
    digits = []
    while c:
        c, d = divmod(c, q)
        digits.append(d)
    return digits


def from_digits(digits: Sequence[int], q: int) -> int:
    """Inverse of base_digits."""
    value = 0
    for d in reversed(digits):
        value = value * q + d
    return value


def digitwise_and(x: int, y: int) -> int:
    """Bitwise AND of two naturals."""
    return x & y


def convexity_holds(pairs: Sequence[Tuple[int, int]]) -> bool:
    """
    Check the convexity equivalence on one list of pairs.

    The sum of 2*p*q equals the sum of p*p + q*q exactly when every pair has p = q.

    Returns:
        True when both sides of the equivalence agree
    """
    lhs = sum(2 * p * q for p, q in pairs)
    rhs = sum(p * p + q * q for p, q in pairs)
    return (lhs == rhs) == all(p == q for p, q in pairs)
