"""
Binomial coefficients, Lucas's theorem and the bitwise masked order a <= b.
"""
import logging

import gmpy2

from numtheory.arith import base_digits
from numtheory.primes import is_prime
from utils.errors import DomainError, InvalidModulusError

logger = logging.getLogger(__name__)


def binomial(m: int, n: int) -> int:
    """C(m, n) over the naturals; 0 when m < n."""
    if m < 0 or n < 0:
        raise DomainError(f"binomial expects naturals, got ({m}, {n})")
    if n > m:
        return 0
    return int(gmpy2.comb(m, n))


def lucas_binomial_mod(m: int, n: int, p: int) -> int:
    """
    C(m, n) mod p computed digit by digit in base p.

    Args:
        m: Upper argument
        n: Lower argument
        p: Prime modulus

    Returns:
        Product of C(m_i, n_i) over the base-p digits, reduced mod p
    """
    if not is_prime(p):
        raise InvalidModulusError(f"Lucas's theorem needs a prime modulus, got {p}")
    md, nd = base_digits(m, p), base_digits(n, p)
    if len(nd) > len(md):
        return 0
    result = 1
    for i, mi in enumerate(md):
        ni = nd[i] if i < len(nd) else 0
        result = result * binomial(mi, ni) % p
        if result == 0:
            break
    return result


def masked_le(a: int, b: int) -> bool:
    """True iff every binary digit of a is at most the matching digit of b."""
    return a & b == a


def binomial_digit(n: int, k: int) -> int:
    """
    The k-th digit of (1+Q)^n in base Q = 2^(n+1).

    Every C(n, k) is below 2^(n+1), so the digit is exactly C(n, k).
    """
    q = 1 << (n + 1)
    return ((1 + q) ** n >> ((n + 1) * k)) % q


def is_digit(c: int, q: int, n: int, d: int) -> bool:
    """
    d is the n-th digit of c in base q (digits beyond the leading one are 0).

    Follows the relational reading d < q and c = (a*q + d)*q^n + b with b < q^n,
    so base 1 accepts only the digit 0 and base 0 accepts nothing.
    """
    if q == 0:
        return False
    if q == 1:
        return d == 0
    return d < q and (c // q**n) % q == d
