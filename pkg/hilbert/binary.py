"""
Digits, binomial coefficients and bitwise relations as Diophantine shapes.

C(n, k) is the k-th digit of (1 + Q)^n in base Q = 2^(n+1); a <= b bitwise iff
C(b, a) is odd; and z = x & y iff x = z + a, y = z + b with z below x and y
bitwise and a, b without common bits.
"""
import logging
from functools import lru_cache
from typing import Dict, Optional

from dio.dsl import And, Apply, Eq, Exists, Lt, Shape, V
from dio.form import DioRelBuilder
from hilbert.expo import expo_shape
from numtheory.binomial import binomial, is_digit, masked_le

logger = logging.getLogger(__name__)


def _digit_derive(c, q, n, d) -> Optional[Dict[int, int]]:
    if d is not None or None in (c, q, n) or q < 2:
        return None
    if n * (q.bit_length() - 1) > c.bit_length():
        # q^n > c
        return {3: 0}
    return {3: (c // q**n) % q}


@lru_cache(maxsize=None)
def is_digit_shape() -> Shape:
    """d is the n-th digit of c in base q"""
    c, q, n, d = V("c", "q", "n", "d")
    a, b, p = V("a", "b", "p")
    body = And(
        Lt(d, q),
        Exists(("a", "b", "p"), And(Apply(expo_shape(), (p, q, n)), Eq(c, (a * q + d) * p + b), Lt(b, p))),
    )
    return Shape("is_digit", ("c", "q", "n", "d"), body, oracle=is_digit, derive=_digit_derive)


def _binomial_derive(x, n, k) -> Optional[Dict[int, int]]:
    if x is None and n is not None and k is not None:
        return {0: binomial(n, k)}
    return None


@lru_cache(maxsize=None)
def binomial_shape() -> Shape:
    """x = C(n, k)"""
    x, n, k = V("x", "n", "k")
    e, big_q, c = V("e", "Q", "c")
    body = Exists(
        ("e", "Q", "c"),
        And(
            Eq(e, n + 1),
            Apply(expo_shape(), (big_q, 2, e)),
            Apply(expo_shape(), (c, 1 + big_q, n)),
            Apply(is_digit_shape(), (c, big_q, k, x)),
        ),
    )
    return Shape("binomial", ("x", "n", "k"), body, oracle=lambda x, n, k: x == binomial(n, k), derive=_binomial_derive)


@lru_cache(maxsize=None)
def masked_le_shape() -> Shape:
    """a <= b digit by digit in base 2"""
    a, b = V("a", "b")
    d, h = V("d", "h")
    body = Exists(("d", "h"), And(Apply(binomial_shape(), (d, b, a)), Eq(d, 2 * h + 1)))
    return Shape("masked_le", ("a", "b"), body, oracle=masked_le)


def _and_derive(z, x, y) -> Optional[Dict[int, int]]:
    if z is None and x is not None and y is not None:
        return {0: x & y}
    return None


@lru_cache(maxsize=None)
def and_shape() -> Shape:
    """z = x & y"""
    z, x, y = V("z", "x", "y")
    a, b = V("a", "b")
    le = masked_le_shape()
    body = Exists(
        ("a", "b"),
        And(
            Eq(x, z + a),
            Eq(y, z + b),
            Apply(le, (z, x)),
            Apply(le, (z, y)),
            Apply(le, (a, a + b)),
        ),
    )
    return Shape("and", ("z", "x", "y"), body, oracle=lambda z, x, y: z == x & y, derive=_and_derive)


def is_digit_formula() -> DioRelBuilder:
    """(c, q, n, d) over x_0 .. x_3"""
    return is_digit_shape().compile()
