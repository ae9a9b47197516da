"""
Diophantine characterization of a = alpha_b(c) with 3 < b.

Three Pell pairs for base b bound the index: (a, a1) places a on the sequence,
(t, t1) gives an odd modulus above 2a and 2c, and (r, s) a far term with
t^2 | r. The base v agrees with b modulo V = 2s - b*r and with 2 modulo t, so
the Pell pair (x, y) for base v satisfies x = a (mod V) and x = c (mod t).
"""
import logging
from functools import lru_cache
from typing import Dict, Optional

from dio.dsl import And, Divides, Eq, Exists, Lt, Shape, V
from dio.form import DioRelBuilder
from pell.alpha import alpha

logger = logging.getLogger(__name__)

# derive alpha_b(c) only below this index
DERIVE_INDEX_LIMIT = 10_000

WITNESSES = ("a1", "t", "t1", "h", "r", "s", "V", "v", "w1", "w2", "x", "y", "z1", "z2")


def _pell(x, y, base):
    """(x, y) solves y^2 + x^2 = 1 + base*x*y"""
    return Eq(y * y + x * x, 1 + base * x * y)


def alpha_oracle(a: int, b: int, c: int) -> bool:
    return b > 3 and alpha(b, c) == a


def alpha_derive(a: Optional[int], b: Optional[int], c: Optional[int]) -> Optional[Dict[int, int]]:
    if a is None and b is not None and c is not None and b > 3 and c <= DERIVE_INDEX_LIMIT:
        return {0: alpha(b, c)}
    return None


@lru_cache(maxsize=None)
def alpha_shape() -> Shape:
    a, b, c = V("a", "b", "c")
    a1, t, t1, h, r, s, big_v, v, w1, w2, x, y, z1, z2 = V(*WITNESSES)
    body = And(
        Lt(3, b),
        Exists(
            WITNESSES,
            And(
                _pell(a, a1, b),
                Lt(a, a1),
                _pell(t, t1, b),
                Lt(t, t1),
                Eq(t, 2 * h + 1),
                Lt(2 * a, t),
                Lt(2 * c, t),
                _pell(r, s, b),
                Lt(r, s),
                Lt(a, r),
                Divides(t * t, r),
                Eq(big_v + b * r, 2 * s),
                Eq(v, b + w1 * big_v),
                Eq(v, 2 + w2 * t),
                _pell(x, y, v),
                Lt(x, y),
                Eq(x, a + z1 * big_v),
                Eq(x, c + z2 * t),
            ),
        ),
    )
    return Shape("alpha", ("a", "b", "c"), body, oracle=alpha_oracle, derive=alpha_derive)


def alpha_formula() -> DioRelBuilder:
    """The relation (a, b, c) -> 3 < b and a = alpha_b(c) over x_0, x_1, x_2."""
    rel = alpha_shape().compile()
    logger.info(f"alpha formula size: {rel.size()}")
    return rel
