"""
Cantor pairing and its right-nested extension to vectors.

pair(a, b) = tri(a+b) + b, with tri(s) = s(s+1)/2. A vector [v0, .., v_{m-1}] is
encoded as pair(v0, pair(v1, ... v_{m-1})); the empty vector is 0 and every
natural decodes to the empty vector.
"""
import logging
from typing import List, Sequence, Tuple

import gmpy2

from models.recalg import Proj, RecAlg
from murec.gadgets import compose, ra_unpair_fst, ra_unpair_snd
from utils.errors import DomainError, ShapeError

logger = logging.getLogger(__name__)


def tri(s: int) -> int:
    return s * (s + 1) // 2


def tri_root(x: int) -> int:
    """Largest s with tri(s) <= x."""
    return (int(gmpy2.isqrt(8 * x + 1)) - 1) // 2


def cantor_pair(a: int, b: int) -> int:
    if a < 0 or b < 0:
        raise DomainError(f"pairing expects naturals, got ({a}, {b})")
    return tri(a + b) + b


def cantor_unpair(x: int) -> Tuple[int, int]:
    if x < 0:
        raise DomainError(f"unpairing expects a natural, got {x}")
    s = tri_root(x)
    b = x - tri(s)
    return s - b, b


def pair_inj(v: Sequence[int]) -> int:
    """Code of the vector v."""
    if not v:
        return 0
    code = v[-1]
    for a in reversed(v[:-1]):
        code = cantor_pair(a, code)
    return code


def pair_pr(x: int, m: int) -> List[int]:
    """
    The length-m vector coded by x; pair_pr(pair_inj(v), len(v)) = v.

    Raises:
        DomainError: x is negative
    """
    if x < 0:
        raise DomainError(f"unpairing expects a natural, got {x}")
    out: List[int] = []
    for _ in range(m - 1):
        a, x = cantor_unpair(x)
        out.append(a)
    if m > 0:
        out.append(x)
    return out


def ra_project(i: int, m: int) -> RecAlg:
    """
    Unary algorithm x -> pair_pr(x, m)[i].

    Raises:
        ShapeError: i is not below m
    """
    if not 0 <= i < m:
        raise ShapeError(f"component {i} of a length-{m} vector")
    alg: RecAlg = Proj(1, 0)
    for _ in range(i):
        alg = compose(ra_unpair_snd(), alg)
    if i < m - 1:
        alg = compose(ra_unpair_fst(), alg)
    return alg
