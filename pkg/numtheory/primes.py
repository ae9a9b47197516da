"""
Primality, single prime factors and the two disjoint prime streams used by Goedel encodings.
"""
import logging
import threading
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import gmpy2
from sympy import factorint

import config
from utils.errors import DomainError

logger = logging.getLogger(__name__)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def _miller_rabin(n: int, bases: Sequence[int]) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    """
    Deterministic primality test.

    Trial division below the configured limit, Miller-Rabin with a fixed
    witness set up to its proven range, gmpy2 above that.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < config.PRIMES["trial_division_limit"]:
        f = 53
        root = gmpy2.isqrt(n)
        while f <= root:
            if n % f == 0:
                return False
            f += 2
        return True
    if n < config.PRIMES["miller_rabin_limit"]:
        return _miller_rabin(n, config.PRIMES["miller_rabin_bases"])
    return bool(gmpy2.is_prime(n, 50))


@dataclass(frozen=True)
class PrimeFactor:
    """Outcome of prime_factor: kind is 'small', 'prime' or 'composite'."""
    kind: str
    factor: Optional[int] = None


def prime_factor(n: int) -> PrimeFactor:
    """
    Classify n and, when composite, return one prime factor.

    Args:
        n: Natural number

    Returns:
        PrimeFactor('small') for n < 2, PrimeFactor('prime') for primes,
        PrimeFactor('composite', f) with f the least prime factor otherwise
    """
    if n < 0:
        raise DomainError(f"prime_factor expects a natural, got {n}")
    if n < 2:
        return PrimeFactor("small")
    if is_prime(n):
        return PrimeFactor("prime")
    if n % 2 == 0:
        return PrimeFactor("composite", 2)
    root = int(gmpy2.isqrt(n))
    f = 3
    while f <= min(root, 1_000_000):
        if n % f == 0:
            return PrimeFactor("composite", f)
        f += 2
    return PrimeFactor("composite", min(factorint(n)))


class PrimeStreams:
    """
    The two disjoint prime streams p_i (even positions) and q_i (odd positions)
    of the increasing enumeration 2, 3, 5, 7, 11, ...
    """

    def __init__(self, precompute: int = 0):
        """Initialize the stream table, optionally precomputing some primes."""
        self._primes: List[int] = [2]
        self._lock = threading.Lock()
        if precompute:
            self.nth_prime(precompute)
        logger.info("Prime streams initialized")

    def nth_prime(self, k: int) -> int:
        """Return the k-th prime, counting from 0."""
        if k < 0:
            raise DomainError(f"prime index must be non-negative, got {k}")
        with self._lock:
            primes = self._primes
            candidate = primes[-1] + (1 if primes[-1] == 2 else 2)
            while len(primes) <= k:
                if is_prime(candidate):
                    primes.append(candidate)
                candidate += 2
            return primes[k]

    def p_at(self, i: int) -> int:
        """The stream p_i, used for program counters."""
        return self.nth_prime(2 * i)

    def q_at(self, i: int) -> int:
        """The stream q_i, used for registers."""
        return self.nth_prime(2 * i + 1)

    def godel_decode(self, x: int, n: int) -> Tuple[int, List[int]]:
        """
        Invert pc/register Goedel numbers p_i * q_0^v_0 * ... * q_{n-1}^v_{n-1}.

        Args:
            x: Encoded state
            n: Number of registers

        Returns:
            (pc, registers)

        Raises:
            DomainError: x is not the code of any state
        """
        regs = []
        for j in range(n):
            q, e = self.q_at(j), 0
            while x % q == 0:
                x //= q
                e += 1
            regs.append(e)
        if x < 2:
            raise DomainError("value carries no program-counter prime")
        factors: Dict[int, int] = factorint(x)
        if len(factors) != 1 or next(iter(factors.values())) != 1:
            raise DomainError(f"value {x} left after registers is not a single prime")
        p = next(iter(factors))
        i = 0
        while self.p_at(i) < p:
            i += 1
        if self.p_at(i) != p:
            raise DomainError(f"prime {p} belongs to the register stream")
        return i, regs


_streams: Optional[PrimeStreams] = None
_streams_lock = threading.Lock()


def prime_streams() -> PrimeStreams:
    """Shared, memoized prime streams."""
    global _streams
    with _streams_lock:
        if _streams is None:
            _streams = PrimeStreams(config.PRIMES["precompute"])
        return _streams
