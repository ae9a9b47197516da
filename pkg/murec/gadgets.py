"""
Primitive-recursive building blocks written as recursive algorithms.

Every gadget is built from constants, successor, projections, composition and
primitive recursion only, so it is total. Recursion always runs on the first
input; wrappers swap arguments where the cheaper recursion is on another one.
"""
import logging
from functools import lru_cache
from typing import Optional

from models.recalg import Comp, Cst, Proj, Rec, RecAlg, Succ
from utils.errors import ShapeError

logger = logging.getLogger(__name__)


def compose(f: RecAlg, *gs: RecAlg, arity: Optional[int] = None) -> RecAlg:
    """
    f(g_1(v), ..., g_k(v)).

    Args:
        f: Outer algorithm of arity len(gs)
        gs: Arguments, all of the same arity
        arity: Input count, required when gs is empty

    Raises:
        ShapeError: no argument and no arity given
    """
    if arity is None:
        if not gs:
            raise ShapeError("composition without arguments needs an explicit arity")
        arity = gs[0].arity
    return Comp(f, tuple(gs), arity)


def ra_const(n: int, k: int) -> RecAlg:
    """The constant n with k ignored inputs."""
    if k == 0:
        return Cst(n)
    return compose(Cst(n), arity=k)


def _succ_of(g: RecAlg) -> RecAlg:
    return compose(Succ(), g)


@lru_cache(maxsize=None)
def ra_add() -> RecAlg:
    """(x, y) -> x + y, recursing on x."""
    return Rec(Proj(1, 0), _succ_of(Proj(3, 1)))


@lru_cache(maxsize=None)
def ra_mult() -> RecAlg:
    """(x, y) -> x * y; recursion on x, each step adds y to the accumulator."""
    return Rec(ra_const(0, 1), compose(ra_add(), Proj(3, 2), Proj(3, 1)))


@lru_cache(maxsize=None)
def ra_pred() -> RecAlg:
    """x -> x - 1, truncated at 0."""
    return Rec(Cst(0), Proj(2, 0))


@lru_cache(maxsize=None)
def ra_tsub() -> RecAlg:
    """(x, y) -> x - y truncated, y predecessor steps applied to x."""
    down = Rec(Proj(1, 0), compose(ra_pred(), Proj(3, 1)))
    return compose(down, Proj(2, 1), Proj(2, 0))


@lru_cache(maxsize=None)
def ra_is_zero() -> RecAlg:
    """x -> 1 if x = 0 else 0."""
    return Rec(Cst(1), ra_const(0, 2))


@lru_cache(maxsize=None)
def ra_sign() -> RecAlg:
    """x -> 0 if x = 0 else 1."""
    return Rec(Cst(0), ra_const(1, 2))


@lru_cache(maxsize=None)
def ra_eq() -> RecAlg:
    """(x, y) -> 0 exactly when x = y, 1 otherwise."""
    x, y = Proj(2, 0), Proj(2, 1)
    distance = compose(ra_add(), compose(ra_tsub(), x, y), compose(ra_tsub(), y, x))
    return compose(ra_sign(), distance)


@lru_cache(maxsize=None)
def ra_tri() -> RecAlg:
    """x -> x(x+1)/2; the step adds n+1, recursing on the small summand."""
    return Rec(Cst(0), compose(ra_add(), _succ_of(Proj(2, 0)), Proj(2, 1)))


@lru_cache(maxsize=None)
def ra_tri_root() -> RecAlg:
    """
    x -> the largest s with s(s+1)/2 <= x.

    The root of x+1 is the root s of x, plus one exactly when (s+1)(s+2)/2 fits
    under x+1.
    """
    n, s = Proj(2, 0), Proj(2, 1)
    fits = compose(ra_is_zero(), compose(ra_tsub(), compose(ra_tri(), _succ_of(s)), _succ_of(n)))
    return Rec(Cst(0), compose(ra_add(), fits, s))


@lru_cache(maxsize=None)
def ra_unpair_snd() -> RecAlg:
    """x -> b where x = tri(a+b) + b."""
    x = Proj(1, 0)
    return compose(ra_tsub(), x, compose(ra_tri(), ra_tri_root()))


@lru_cache(maxsize=None)
def ra_unpair_fst() -> RecAlg:
    """x -> a where x = tri(a+b) + b."""
    return compose(ra_tsub(), ra_tri_root(), ra_unpair_snd())
