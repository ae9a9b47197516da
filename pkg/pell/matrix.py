"""
2x2 integer matrices housing the Pell sequence: B_b and A_b(n) = B_b^n.
"""
import logging
from dataclasses import dataclass

from utils.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Mat2:
    """
    Exact 2x2 integer matrix.

        [r1c1, r1c2]
        [r2c1, r2c2]
    """
    r1c1: int
    r1c2: int
    r2c1: int
    r2c2: int

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.r1c1 * other.r1c1 + self.r1c2 * other.r2c1,
            self.r1c1 * other.r1c2 + self.r1c2 * other.r2c2,
            self.r2c1 * other.r1c1 + self.r2c2 * other.r2c1,
            self.r2c1 * other.r1c2 + self.r2c2 * other.r2c2,
        )

    def __pow__(self, e: int) -> "Mat2":
        if e < 0:
            raise DomainError(f"matrix power needs a natural exponent, got {e}")
        result, base = IDENTITY, self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def det(self) -> int:
        return self.r1c1 * self.r2c2 - self.r1c2 * self.r2c1

    def entries(self):
        return (self.r1c1, self.r1c2, self.r2c1, self.r2c2)


IDENTITY = Mat2(1, 0, 0, 1)


def mat_B(b: int) -> Mat2:
    """The step matrix [[b, -1], [1, 0]]."""
    if b < 2:
        raise DomainError(f"Pell base must be at least 2, got {b}")
    return Mat2(b, -1, 1, 0)


def mat_A(b: int, n: int) -> Mat2:
    """
    A_b(n) = B_b^n by fast exponentiation.

    Its entries are alpha(n+1), -alpha(n), alpha(n), -alpha(n-1).
    """
    return mat_B(b) ** n
