"""
Hilbert's tenth problem over the integers.

A natural-number equation p = q becomes the integer polynomial p' - q', where
every variable x_i is replaced by the sum of squares of four fresh integer
variables 4i .. 4i+3; by Lagrange every natural is such a sum.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Union

from dio.single import DioPoly, DioSingle, PAdd, PConst, PMul, PVar, poly_eval, poly_map_leaves, single_params
from numtheory.squares import four_squares
from solver.search import NoneUpTo, sat_z
from utils.errors import ShapeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class H10ZPoly:
    """Integer polynomial in variables 0 .. nvars-1; constants may be negative."""
    poly: DioPoly
    nvars: int


def h10_to_h10z(e: DioSingle, nvars: int) -> H10ZPoly:
    """
    Args:
        e: Parameter-free equation over variables below nvars

    Raises:
        ShapeError: e has parameters or a variable at or above nvars
    """
    if single_params(e):
        raise ShapeError("the integer reduction needs a parameter-free equation")
    squares: Dict[int, DioPoly] = {}

    def square_sum(leaf: DioPoly) -> DioPoly:
        if not isinstance(leaf, PVar):
            return leaf
        if leaf.u >= nvars:
            raise ShapeError(f"variable {leaf.u} outside 0 .. {nvars - 1}")
        if leaf.u not in squares:
            zs = [PVar(4 * leaf.u + k) for k in range(4)]
            sq = [PMul(z, z) for z in zs]
            squares[leaf.u] = PAdd(PAdd(sq[0], sq[1]), PAdd(sq[2], sq[3]))
        return squares[leaf.u]

    lhs = poly_map_leaves(e.lhs, square_sum)
    rhs = poly_map_leaves(e.rhs, square_sum)
    poly = PAdd(lhs, PMul(PConst(-1), rhs))
    logger.debug(f"integer polynomial over {4 * nvars} variables")
    return H10ZPoly(poly, 4 * nvars)


def h10z_eval(p: H10ZPoly, w: Sequence[int]) -> int:
    if len(w) != p.nvars:
        raise ShapeError(f"polynomial has {p.nvars} variables, got {len(w)} values")
    return poly_eval(p.poly, (), list(w))


def lift_witness(w: Sequence[int]) -> List[int]:
    """Four-square decompositions of a natural witness, flattened."""
    out: List[int] = []
    for v in w:
        out.extend(four_squares(v).as_tuple())
    return out


def h10z_solve(p: H10ZPoly, bound: int, shards: Optional[int] = None) -> Union[List[int], NoneUpTo]:
    """Least root in [-bound, bound]^nvars, or NoneUpTo(bound)."""
    return sat_z(p, bound, shards)
