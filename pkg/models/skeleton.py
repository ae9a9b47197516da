"""
Untyped skeleton of recursive algorithms, its step-indexed evaluator and the
host-level recognizer built on it.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from models.recalg import Comp, Cst, Min, Proj, RecAlg, Rec, Succ, Zero
from utils.errors import ShapeError

logger = logging.getLogger(__name__)


class RecSkel:
    """Base of the skeleton constructors."""


@dataclass(frozen=True)
class SCst(RecSkel):
    n: int


@dataclass(frozen=True)
class SZero(RecSkel):
    pass


@dataclass(frozen=True)
class SSucc(RecSkel):
    pass


@dataclass(frozen=True)
class SProj(RecSkel):
    j: int


@dataclass(frozen=True)
class SComp(RecSkel):
    f: RecSkel
    g: RecSkel


@dataclass(frozen=True)
class SRec(RecSkel):
    f: RecSkel
    g: RecSkel


@dataclass(frozen=True)
class SMin(RecSkel):
    f: RecSkel


@dataclass(frozen=True)
class SNil(RecSkel):
    pass


@dataclass(frozen=True)
class SCons(RecSkel):
    f: RecSkel
    g: RecSkel


@dataclass(frozen=True)
class Inl:
    value: int


@dataclass(frozen=True)
class Inr:
    values: Tuple[int, ...]


SkelResult = Optional[Union[Inl, Inr]]


def skel_erase(f: RecAlg) -> RecSkel:
    """Forget arities: argument vectors become cons/nil chains."""
    if isinstance(f, Cst):
        return SCst(f.n)
    if isinstance(f, Zero):
        return SZero()
    if isinstance(f, Succ):
        return SSucc()
    if isinstance(f, Proj):
        return SProj(f.p)
    if isinstance(f, Comp):
        return SComp(skel_erase(f.f), skel_erase_vec(f.gs))
    if isinstance(f, Rec):
        return SRec(skel_erase(f.f), skel_erase(f.g))
    if isinstance(f, Min):
        return SMin(skel_erase(f.f))
    raise ShapeError(f"unknown recursive algorithm node {f!r}")


def skel_erase_vec(gs: Sequence[RecAlg]) -> RecSkel:
    chain: RecSkel = SNil()
    for g in reversed(gs):
        chain = SCons(skel_erase(g), chain)
    return chain


def skel_unerase(s: RecSkel, k: int) -> RecAlg:
    """
    Rebuild the arity-k algorithm whose erasure is s.

    Raises:
        ShapeError: s is not the erasure of any arity-k algorithm
    """
    if isinstance(s, SCst):
        if k != 0:
            raise ShapeError(f"constant used at arity {k}")
        return Cst(s.n)
    if isinstance(s, SZero):
        if k != 1:
            raise ShapeError(f"zero used at arity {k}")
        return Zero()
    if isinstance(s, SSucc):
        if k != 1:
            raise ShapeError(f"succ used at arity {k}")
        return Succ()
    if isinstance(s, SProj):
        return Proj(k, s.j)
    if isinstance(s, SComp):
        gs = []
        chain = s.g
        while isinstance(chain, SCons):
            gs.append(skel_unerase(chain.f, k))
            chain = chain.g
        if not isinstance(chain, SNil):
            raise ShapeError("composition arguments do not form a cons/nil chain")
        return Comp(skel_unerase(s.f, len(gs)), tuple(gs), k)
    if isinstance(s, SRec):
        if k < 1:
            raise ShapeError("recursion used at arity 0")
        return Rec(skel_unerase(s.f, k - 1), skel_unerase(s.g, k + 1))
    if isinstance(s, SMin):
        return Min(skel_unerase(s.f, k + 1))
    raise ShapeError(f"{type(s).__name__} is not a function skeleton")


def skel_valid(s: RecSkel, k: int) -> bool:
    """True when s is the erasure of some arity-k algorithm."""
    try:
        skel_unerase(s, k)
    except ShapeError:
        return False
    return True


def skel_eval(f: RecSkel, c: int, m: int, l: Sequence[int]) -> SkelResult:
    """
    Step-indexed evaluation of a skeleton.

    Args:
        f: Skeleton
        c: Step index
        m: Auxiliary counter of the unbounded search
        l: Input list

    Returns:
        Inl(value) for functions, Inr(values) for cons/nil chains, None when the
        index is too small, the search diverges or the skeleton is invalid
    """
    return _skel(f, c, m, tuple(l))


def _skel(f: RecSkel, c: int, m: int, l: Tuple[int, ...]) -> SkelResult:
    if c < 1:
        return None
    c -= 1
    if isinstance(f, SCst):
        return Inl(f.n)
    if isinstance(f, SZero):
        return Inl(0)
    if isinstance(f, SSucc):
        return Inl(l[0] + 1) if l else None
    if isinstance(f, SProj):
        return Inl(l[f.j]) if f.j < len(l) else None
    if isinstance(f, SComp):
        args = _skel(f.g, c, m, l)
        if not isinstance(args, Inr):
            return None
        x = _skel(f.f, c, m, args.values)
        return x if isinstance(x, Inl) else None
    if isinstance(f, SRec):
        return _skel_rec(f, c, m, l)
    if isinstance(f, SNil):
        return Inr(())
    if isinstance(f, SCons):
        values: List[int] = []
        while isinstance(f, SCons):
            x = _skel(f.f, c, m, l)
            if not isinstance(x, Inl):
                return None
            values.append(x.value)
            f = f.g
            if c < 1:
                return None
            c -= 1
        if not isinstance(f, SNil):
            return None
        return Inr(tuple(values))
    if isinstance(f, SMin):
        while True:
            x = _skel(f.f, c, 0, (m,) + l)
            if not isinstance(x, Inl):
                return None
            if x.value == 0:
                return Inl(m)
            if c < 1:
                return None
            c -= 1
            m += 1
    return None


def _skel_rec(f: SRec, c: int, m: int, l: Tuple[int, ...]) -> SkelResult:
    """Unfolds rec f g at index 1+c on (n :: rest) without host recursion."""
    if not l:
        return None
    n, rest = l[0], l[1:]
    # the call on j runs at index 1+c-(n-j); the base case at c-n
    if c - n < 0:
        return None
    y = _skel(f.f, c - n, m, rest)
    if not isinstance(y, Inl):
        return None
    for j in range(n):
        y = _skel(f.g, c - n + j + 1, m, (j, y.value) + rest)
        if not isinstance(y, Inl):
            return None
    return y


def wcbv_recognizer(f: RecAlg, v: Sequence[int], c: int) -> bool:
    """Host-level recognizer: the erasure of f evaluates to a value at index c."""
    return isinstance(skel_eval(skel_erase(f), c, 0, v), Inl)
