"""
The solution sequence alpha_b(n) of x^2 - b*x*y + y^2 = 1, its divisibility
properties and concrete witnesses for the alpha characterization.
"""
import logging
import threading
from typing import Dict, List

from sympy.ntheory.modular import crt

from utils.errors import DomainError

logger = logging.getLogger(__name__)

# Bases above this are evaluated without memoization
_MEMO_BASE_LIMIT = 1 << 20


class AlphaSeq:
    """
    Memoized alpha_b values for one base b, indexed from -1.
    """

    def __init__(self, b: int):
        """Initialize the table with the seeds alpha(-1) = -1 and alpha(0) = 0."""
        if b < 2:
            raise DomainError(f"Pell base must be at least 2, got {b}")
        self.b = b
        self._values: List[int] = [-1, 0]
        self._lock = threading.Lock()

    def __getitem__(self, n: int) -> int:
        if n < -1:
            raise DomainError(f"alpha is defined from index -1, got {n}")
        with self._lock:
            values = self._values
            while len(values) <= n + 1:
                values.append(self.b * values[-1] - values[-2])
            return values[n + 1]


_tables: Dict[int, AlphaSeq] = {}
_tables_lock = threading.Lock()


def alpha_seq(b: int) -> AlphaSeq:
    """Shared table for base b."""
    with _tables_lock:
        table = _tables.get(b)
        if table is None:
            table = AlphaSeq(b)
            if b <= _MEMO_BASE_LIMIT:
                _tables[b] = table
        return table


def alpha(b: int, n: int) -> int:
    """
    alpha_b(n) from the recurrence alpha(n+2) = b*alpha(n+1) - alpha(n).

    Args:
        b: Base, at least 2
        n: Index, at least -1

    Returns:
        The signed sequence value
    """
    if b < 2:
        raise DomainError(f"Pell base must be at least 2, got {b}")
    if b > _MEMO_BASE_LIMIT:
        if n < -1:
            raise DomainError(f"alpha is defined from index -1, got {n}")
        prev, cur = -1, 0
        for _ in range(n + 1):
            prev, cur = cur, b * cur - prev
        return cur
    return alpha_seq(b)[n]


def alpha_props_check(b: int, bound: int) -> Dict[str, List[tuple]]:
    """
    Check the divisibility and congruence properties of alpha_b up to bound.

    Properties:
        divides:  alpha(k) | alpha(m)  iff  k | m
        square:   alpha(k)^2 | alpha(m)  iff  k*alpha(k) | m
        mod:      alpha(n) = n  (mod b - 2)

    Returns:
        Mapping from property name to the list of violating index tuples
    """
    if b < 3:
        raise DomainError(f"alpha_props_check needs b >= 3, got {b}")
    report: Dict[str, List[tuple]] = {"divides": [], "square": [], "mod": []}
    seq = alpha_seq(b)
    for k in range(bound + 1):
        ak = seq[k]
        for m in range(bound + 1):
            am = seq[m]
            if _divides(ak, am) != _divides(k, m):
                report["divides"].append((k, m))
            if _divides(ak * ak, am) != _divides(k * ak, m):
                report["square"].append((k, m))
    for n in range(bound + 1):
        if (seq[n] - n) % (b - 2) != 0:
            report["mod"].append((n,))
    violations = sum(len(v) for v in report.values())
    logger.info(f"alpha properties for b={b} up to {bound}: {violations} violations")
    return report


def _divides(d: int, n: int) -> bool:
    if d == 0:
        return n == 0
    return n % d == 0


def alpha_witness(a: int, b: int, c: int) -> Dict[str, int]:
    """
    Witnesses of the main branch of the alpha characterization for a = alpha_b(c).

    The odd modulus t = alpha_b(j) exceeds 2a and 2c, the index m = j*t makes
    t^2 divide r = alpha_b(m), V = 2*alpha_b(m+1) - b*r is the companion, and
    v solves v = b (mod V), v = 2 (mod t) by the Chinese remainder theorem.

    Args:
        a: alpha_b(c)
        b: Base, at least 4
        c: Index

    Returns:
        Mapping from witness name to value
    """
    if b < 4:
        raise DomainError(f"alpha characterization needs b > 3, got {b}")
    if alpha(b, c) != a:
        raise DomainError(f"{a} is not alpha_{b}({c})")
    j = 1
    while True:
        t = alpha(b, j)
        if t % 2 == 1 and t > 2 * a and t > 2 * c:
            break
        j += 1
    m = j * t
    r, s = alpha(b, m), alpha(b, m + 1)
    big_v = 2 * s - b * r
    v0, modulus = crt([big_v, t], [b % big_v, 2 % t])
    v = int(v0)
    modulus = int(modulus)
    while v < b:
        v += modulus
    x, y = alpha(v, c), alpha(v, c + 1)
    witness = {
        "a1": alpha(b, c + 1),
        "t": t,
        "t1": alpha(b, j + 1),
        "h": (t - 1) // 2,
        "r": r,
        "s": s,
        "V": big_v,
        "v": v,
        "w1": (v - b) // big_v,
        "w2": (v - 2) // t,
        "x": x,
        "y": y,
        "z1": (x - a) // big_v,
        "z2": (x - c) // t,
    }
    logger.debug(f"alpha witness for ({a}, {b}, {c}) uses t={t}, m={m}")
    return witness
