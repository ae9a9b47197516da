"""
Diophantine exponential x = q^n.

n = 0 and q = 0 are separate branches. Otherwise, with u = alpha_{q+4}(n+1),
b = q + u + 4 and m = b*q - q^2 - 1, q is a root of L^2 - b*L + 1 modulo m, so
q*alpha_b(n) - alpha_b(n-1) = q^n (mod m); u >= q^n makes m > q^n, and x is the
least residue.
"""
import logging
from functools import lru_cache
from typing import Dict, Optional

from dio.dsl import And, Apply, Eq, Exists, Lt, Or, Shape, V
from dio.form import DioFunBuilder, Renaming, df_rename
from dio.shapes import fun_binary
from hilbert.alpha import alpha_shape

logger = logging.getLogger(__name__)

# derive q^n only while the result has at most this many bits
DERIVE_BITS_LIMIT = 1 << 16


def expo_oracle(x: int, q: int, n: int) -> bool:
    return x == q**n


def expo_derive(x: Optional[int], q: Optional[int], n: Optional[int]) -> Optional[Dict[int, int]]:
    if x is None and q is not None and n is not None and n * max(1, q.bit_length()) <= DERIVE_BITS_LIMIT:
        return {0: q**n}
    return None


def pos_expo_oracle(x: int, q: int, n: int) -> bool:
    return q > 0 and n > 0 and x == q**n


@lru_cache(maxsize=None)
def pos_expo_shape() -> Shape:
    """x = q^n for 0 < q and 0 < n, as a single conjunction."""
    x, q, n = V("x", "q", "n")
    n1, u, b, m, r, s, k = V("n1", "u", "b", "m", "r", "s", "k")
    alpha = alpha_shape()
    body = And(
        Lt(0, q),
        Exists(
            ("n1", "u", "b", "m", "r", "s", "k"),
            And(
                Eq(n, n1 + 1),
                Apply(alpha, (u, q + 4, n + 1)),
                Eq(b, q + u + 4),
                Eq(m + q * q + 1, b * q),
                Apply(alpha, (r, b, n)),
                Apply(alpha, (s, b, n1)),
                Eq(x + s + m * k, q * r),
                Lt(x, m),
            ),
        ),
    )
    return Shape("pos_expo", ("x", "q", "n"), body, oracle=pos_expo_oracle, derive=expo_derive)


@lru_cache(maxsize=None)
def expo_shape() -> Shape:
    x, q, n = V("x", "q", "n")
    body = Or(
        And(Eq(n, 0), Eq(x, 1)),
        And(Eq(q, 0), Lt(0, n), Eq(x, 0)),
        Apply(pos_expo_shape(), (x, q, n)),
    )
    return Shape("expo", ("x", "q", "n"), body, oracle=expo_oracle, derive=expo_derive)


def expo_formula() -> DioFunBuilder:
    """The function (q, n) -> q^n: output x_0, inputs x_1 = q and x_2 = n."""
    fun = expo_shape().compile_function()
    logger.info(f"exponential formula size: {fun.size()}")
    return fun


def fun_expo(f: DioFunBuilder, g: DioFunBuilder) -> DioFunBuilder:
    """nu -> f(nu) ^ g(nu)"""
    expo = expo_formula().form
    return fun_binary(f, g, lambda i, j, k: df_rename(expo, Renaming((i, j, k), 3)), "^")
