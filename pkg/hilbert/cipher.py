"""
Sparse ciphers: vectors (a_1, ..., a_n) with a_i < 2^q stored as sum a_i * r^(2^i).

With r = 2^(4q) every digit product and every carry of a cipher product stays
inside its own base-r digit, so masking the product with (r-1)*u' reads off the
componentwise products exactly.
"""
import logging
from dataclasses import dataclass
from typing import List, Sequence

import config
from numtheory.binomial import masked_le
from utils.errors import DigitOverflowError, DomainError, ShapeError

logger = logging.getLogger(__name__)


def cipher_base(q: int) -> int:
    """r = 2^(4q)"""
    return 1 << (config.CIPHER["digit_exponent"] * q)


@dataclass(frozen=True)
class Cipher:
    q: int
    n: int
    value: int

    @property
    def r(self) -> int:
        return cipher_base(self.q)


def cipher_encode(v: Sequence[int], q: int) -> Cipher:
    """
    Encode v as sum v[i-1] * r^(2^i), i = 1 .. len(v).

    Raises:
        DigitOverflowError: a component is not below 2^q
    """
    limit = 1 << q
    e = config.CIPHER["digit_exponent"] * q
    value = 0
    for i, a in enumerate(v, start=1):
        if not 0 <= a < limit:
            raise DigitOverflowError(f"component {a} does not fit in {q} bits")
        value |= a << (e << i)
    return Cipher(q, len(v), value)


def cipher_decode(c: Cipher) -> List[int]:
    e = config.CIPHER["digit_exponent"] * c.q
    digit = (1 << e) - 1
    out = [(c.value >> (e << i)) & digit for i in range(1, c.n + 1)]
    if cipher_encode(out, c.q).value != c.value:
        raise DomainError(f"value is not a sparse cipher of length {c.n} and width {c.q}")
    return out


def cipher_u(n: int, q: int) -> int:
    """The cipher of (1, ..., 1)."""
    r = cipher_base(q)
    return sum(r ** (1 << i) for i in range(1, n + 1))


def cipher_u_prime(n: int, q: int) -> int:
    """Digits 1 at positions 2^(i+1): the diagonal of u * u."""
    r = cipher_base(q)
    return sum(r ** (1 << (i + 1)) for i in range(1, n + 1))


def cipher_w(n: int, q: int) -> int:
    """Digits 1 at every position 1 .. 2^(n+1)."""
    r = cipher_base(q)
    return sum(r**k for k in range(1, (1 << (n + 1)) + 1))


def cipher_mask(n: int, q: int) -> int:
    """(r - 1) * u'"""
    return (cipher_base(q) - 1) * cipher_u_prime(n, q)


def digit_mask(n: int, q: int) -> int:
    """(2^q - 1) * u: every admissible digit at every cipher position."""
    return ((1 << q) - 1) * cipher_u(n, q)


def cipher_index(n: int, q: int) -> Cipher:
    """The cipher of (0, 1, ..., n-1)."""
    return cipher_encode(list(range(n)), q)


def _same_shape(b: Cipher, c: Cipher):
    if (b.q, b.n) != (c.q, c.n):
        raise ShapeError(f"ciphers of shapes ({b.q}, {b.n}) and ({c.q}, {c.n}) do not combine")


def cipher_add(b: Cipher, c: Cipher) -> Cipher:
    """Componentwise sum; the plain sum of the values when no component overflows."""
    _same_shape(b, c)
    return cipher_encode([x + y for x, y in zip(cipher_decode(b), cipher_decode(c))], b.q)


def cipher_mult_mask(b: Cipher, c: Cipher) -> int:
    """(b * c) & (r - 1) * u'"""
    _same_shape(b, c)
    return (b.value * c.value) & cipher_mask(b.n, b.q)


def cipher_scaled_mask(a: Cipher) -> int:
    """(a * u) & (r - 1) * u'"""
    return (a.value * cipher_u(a.n, a.q)) & cipher_mask(a.n, a.q)


def cipher_product_matches(a: Cipher, b: Cipher, c: Cipher) -> bool:
    """a = b * c componentwise, read through the masked products."""
    _same_shape(a, b)
    return cipher_scaled_mask(a) == cipher_mult_mask(b, c)


def cipher_digit_ok(value: int, n: int, q: int) -> bool:
    """value is a cipher of length n with components below 2^q"""
    return masked_le(value, digit_mask(n, q))
