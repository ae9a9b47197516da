"""
Untyped lambda calculus in de Bruijn style with weak call-by-value evaluation
and Scott encodings of naturals and lists.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

from models.outcome import Halted, OutOfFuel, RunOutcome, Stuck
from utils.errors import ClosednessError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Var:
    n: int


@dataclass(frozen=True)
class App:
    s: "LTerm"
    t: "LTerm"


@dataclass(frozen=True)
class Lam:
    s: "LTerm"


LTerm = Union[Var, App, Lam]


def is_closed(t: LTerm, depth: int = 0) -> bool:
    """True when every variable of t is bound within depth extra binders."""
    stack = [(t, depth)]
    while stack:
        term, d = stack.pop()
        if isinstance(term, Var):
            if term.n >= d:
                return False
        elif isinstance(term, App):
            stack.append((term.s, d))
            stack.append((term.t, d))
        else:
            stack.append((term.s, d + 1))
    return True


def subst(s: LTerm, k: int, u: LTerm) -> LTerm:
    """
    Replace variable k of s by the closed term u.

    Raises:
        ClosednessError: u is open
    """
    if not is_closed(u):
        raise ClosednessError("only closed values can be substituted")
    return _subst(s, k, u)


def _subst(s: LTerm, k: int, u: LTerm) -> LTerm:
    if isinstance(s, Var):
        return u if s.n == k else s
    if isinstance(s, App):
        return App(_subst(s.s, k, u), _subst(s.t, k, u))
    return Lam(_subst(s.s, k + 1, u))


def _plug(term: LTerm, frames) -> LTerm:
    for kind, payload in reversed(frames):
        term = App(term, payload) if kind == "arg" else App(payload, term)
    return term


def l_eval(t: LTerm, fuel: int) -> RunOutcome:
    """
    Weak call-by-value evaluation: abstractions are values; an application
    evaluates its function, then its argument, then substitutes.

    Args:
        t: Closed term
        fuel: Maximum number of beta steps

    Returns:
        Halted(value, beta steps), OutOfFuel(current term) or Stuck(term)
    """
    if not is_closed(t):
        raise ClosednessError("evaluation is defined on closed terms only")
    frames: List[tuple] = []
    cur = t
    steps = 0
    while True:
        if isinstance(cur, App):
            frames.append(("arg", cur.t))
            cur = cur.s
            continue
        if isinstance(cur, Var):
            return Stuck(_plug(cur, frames))
        if not frames:
            return Halted(cur, steps)
        kind, payload = frames.pop()
        if kind == "arg":
            frames.append(("fun", cur))
            cur = payload
            continue
        if steps == fuel:
            return OutOfFuel(_plug(App(payload, cur), frames))
        steps += 1
        cur = _subst(payload.s, 0, cur)


def scott_encode_nat(n: int) -> LTerm:
    """0 = \\z.\\s. z and 1+n = \\z.\\s. s n."""
    if n < 0:
        raise DomainError(f"Scott numerals encode naturals, got {n}")
    term: LTerm = Lam(Lam(Var(1)))
    for _ in range(n):
        term = Lam(Lam(App(Var(0), term)))
    return term


def scott_encode_list(xs: Sequence[int]) -> LTerm:
    """[] = \\n.\\c. n and x :: xs = \\n.\\c. c x xs."""
    term: LTerm = Lam(Lam(Var(1)))
    for x in reversed(xs):
        term = Lam(Lam(App(App(Var(0), scott_encode_nat(x)), term)))
    return term


def scott_decode_nat(t: LTerm) -> Optional[int]:
    """Syntactic inverse of scott_encode_nat; None for other terms."""
    n = 0
    while True:
        if t == Lam(Lam(Var(1))):
            return n
        if isinstance(t, Lam) and isinstance(t.s, Lam) and isinstance(t.s.s, App) and t.s.s.s == Var(0):
            t = t.s.s.t
            n += 1
            continue
        return None


def scott_decode_list(t: LTerm) -> Optional[List[int]]:
    """Syntactic inverse of scott_encode_list; None for other terms."""
    out: List[int] = []
    while True:
        if t == Lam(Lam(Var(1))):
            return out
        body = t.s.s if isinstance(t, Lam) and isinstance(t.s, Lam) else None
        if isinstance(body, App) and isinstance(body.s, App) and body.s.s == Var(0):
            head = scott_decode_nat(body.s.t)
            if head is None:
                return None
            out.append(head)
            t = body.t
            continue
        return None


# Case-analysis markers: three binders cannot be confused with a Scott constructor
_NIL_MARK = Lam(Lam(Lam(Var(0))))
_IDENTITY = Lam(Var(0))
_PAIR = Lam(Lam(Lam(App(App(Var(0), Var(2)), Var(1)))))


def scott_case_nat(t: LTerm, fuel: int) -> Optional[int]:
    """
    Decode a numeral by repeated case analysis under l_eval.

    Applies the term to a zero marker and the identity: a zero selects the marker,
    a successor returns its predecessor.
    """
    n = 0
    while True:
        outcome = l_eval(App(App(t, _NIL_MARK), _IDENTITY), fuel)
        if not isinstance(outcome, Halted):
            return None
        if outcome.final == _NIL_MARK:
            return n
        t = outcome.final
        n += 1


def scott_case_list(t: LTerm, fuel: int) -> Optional[List[int]]:
    """Decode a list by case analysis, splitting each cell with a pairing continuation."""
    out: List[int] = []
    while True:
        outcome = l_eval(App(App(t, _NIL_MARK), _PAIR), fuel)
        if not isinstance(outcome, Halted):
            return None
        final = outcome.final
        if final == _NIL_MARK:
            return out
        # \f. f head tail
        if not (isinstance(final, Lam) and isinstance(final.s, App) and isinstance(final.s.s, App)):
            return None
        head = scott_case_nat(final.s.s.t, fuel)
        if head is None:
            return None
        out.append(head)
        t = final.s.t
