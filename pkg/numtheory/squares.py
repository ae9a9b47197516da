"""
Lagrange four-square decompositions: Euler's product identity, the per-prime
descent and prime induction over the factorization.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import gmpy2

from numtheory.primes import prime_factor
from utils.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FourSquares:
    """Four integers whose squares sum to a target."""
    a: int
    b: int
    c: int
    d: int

    @property
    def total(self) -> int:
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


def euler_combine(x: FourSquares, y: FourSquares) -> FourSquares:
    """
    Euler's four-square identity.

    Args:
        x: Decomposition of some n
        y: Decomposition of some m

    Returns:
        A decomposition of n*m
    """
    a1, b1, c1, d1 = x.as_tuple()
    a2, b2, c2, d2 = y.as_tuple()
    return FourSquares(
        a1 * a2 + b1 * b2 + c1 * c2 + d1 * d2,
        a1 * b2 - b1 * a2 + d1 * c2 - c1 * d2,
        a1 * c2 - c1 * a2 + b1 * d2 - d1 * b2,
        a1 * d2 - d1 * a2 + c1 * b2 - b1 * c2,
    )


def lagrange_seed(p: int) -> Tuple[int, int, int]:
    """
    For an odd prime p find (a, b, n) with n*p = 1 + a^2 + b^2 and 0 < n < p.

    The sets {a^2} and {-(1 + b^2)} for a, b in [0, (p-1)/2] each hold
    (p+1)/2 distinct residues, so they intersect.
    """
    half = (p - 1) // 2
    squares = {}
    for a in range(half + 1):
        squares.setdefault(a * a % p, a)
    for b in range(half + 1):
        target = (-1 - b * b) % p
        a = squares.get(target)
        if a is not None:
            n = (1 + a * a + b * b) // p
            return a, b, n
    raise DomainError(f"{p} is not an odd prime")


def _centered(x: int, m: int) -> int:
    r = x % m
    return r - m if 2 * r > m else r


def four_squares_prime(p: int) -> FourSquares:
    """Four-square decomposition of a prime by descent."""
    if p == 2:
        return FourSquares(1, 1, 0, 0)
    a, b, m = lagrange_seed(p)
    x = FourSquares(a, b, 1, 0)
    while m > 1:
        y = FourSquares(*(_centered(v, m) for v in x.as_tuple()))
        r = y.total // m
        z = euler_combine(x, y)
        x = FourSquares(*(v // m for v in z.as_tuple()))
        m = r
        logger.debug(f"descent for {p}: multiplier now {m}")
    return FourSquares(*(abs(v) for v in x.as_tuple()))


@lru_cache(maxsize=4096)
def four_squares(n: int) -> FourSquares:
    """
    Four-square decomposition of any natural by prime induction.

    Args:
        n: Target

    Returns:
        FourSquares with non-negative entries summing in squares to n
    """
    if n < 0:
        raise DomainError(f"four_squares expects a natural, got {n}")
    if n < 2:
        return FourSquares(n, 0, 0, 0)
    factor = prime_factor(n)
    if factor.kind == "prime":
        return four_squares_prime(n)
    combined = euler_combine(four_squares(factor.factor), four_squares(n // factor.factor))
    return FourSquares(*(abs(v) for v in combined.as_tuple()))


def four_squares_brute(n: int) -> Optional[FourSquares]:
    """Exhaustive search over a >= b >= c >= d >= 0; the test oracle."""
    root = int(gmpy2.isqrt(n))
    for a in range(root, -1, -1):
        ra = n - a * a
        for b in range(min(a, int(gmpy2.isqrt(ra))), -1, -1):
            rb = ra - b * b
            for c in range(min(b, int(gmpy2.isqrt(rb))), -1, -1):
                rc = rb - c * c
                d = int(gmpy2.isqrt(rc))
                if d <= c and d * d == rc:
                    return FourSquares(a, b, c, d)
    return None
