"""
Digit sequences and the reflexive-transitive closure of a Diophantine relation.

A chain z_0 R z_1 R ... R z_i is stored as the first i+1 digits of one number
c in some base q; a bounded universal quantifier checks every adjacent pair.
Binary relations are read over (x_1, x_0): R(u, v) holds at x_1 = u, x_0 = v.
"""
import logging
from typing import Callable, Optional, Set

from dio.dsl import And, Apply, Eq, Exists, Lt, Shape, V, apply_rel2
from dio.form import DioRelBuilder
from dio.shapes import fun_var
from hilbert.binary import is_digit_shape
from hilbert.bounded import bounded_forall
from hilbert.expo import pos_expo_shape

logger = logging.getLogger(__name__)

HostRel = Callable[[int, int], bool]


def seq_step_shape(r: DioRelBuilder) -> Shape:
    """
    (n, c, q): digits n and n+1 of c in base q > 1 are related by r.

    With p = q^n the digits are u and v in c = (a1*q + u)*p + b1 and
    c = (a2*q + v)*q*p + b2; the only exponential is conjunctive.
    """
    n, c, q = V("n", "c", "q")
    names = ("p1", "p", "a1", "b1", "u", "a2", "b2", "v")
    p1, p, a1, b1, u, a2, b2, v = V(*names)
    body = And(
        Lt(1, q),
        Exists(
            names,
            And(
                Apply(pos_expo_shape(), (p1, q, n + 1)),
                Eq(p1, q * p),
                Eq(c, (a1 * q + u) * p + b1),
                Lt(b1, p),
                Lt(u, q),
                Eq(c, (a2 * q + v) * p1 + b2),
                Lt(b2, p1),
                Lt(v, q),
                apply_rel2(r, u, v),
            ),
        ),
    )
    return Shape(f"step[{r.name}]", ("n", "c", "q"), body)


def is_seq_formula(r: DioRelBuilder) -> DioRelBuilder:
    """(c, q, i): the first i+1 digits of c in base q form an r-chain."""
    rel = bounded_forall(fun_var(2), seq_step_shape(r).compile())
    return DioRelBuilder(rel.form, 3, f"seq[{r.name}]")


def rel_iter_formula(r: DioRelBuilder) -> DioRelBuilder:
    """(v, u, i): r^i(u, v)."""
    v, u, i, c, q = V("v", "u", "i", "c", "q")
    digit = is_digit_shape()
    body = Exists(
        ("c", "q"),
        And(Apply(is_seq_formula(r), (c, q, i)), Apply(digit, (c, q, 0, u)), Apply(digit, (c, q, i, v))),
    )
    rel = Shape(f"iter[{r.name}]", ("v", "u", "i"), body).compile()
    logger.info(f"iterate of {r.name}: formula size {rel.size()}")
    return rel


def rt_closure_formula(r: DioRelBuilder) -> DioRelBuilder:
    """(v, u): r*(u, v), as exists i, r^i(u, v)."""
    v, u, i = V("v", "u", "i")
    body = Exists(("i",), Apply(rel_iter_formula(r), (v, u, i)))
    return Shape(f"closure[{r.name}]", ("v", "u"), body).compile()


def digit_at(c: int, q: int, n: int) -> Optional[int]:
    """The n-th base-q digit of c; None in base 0, where no digit exists."""
    if q == 0:
        return None
    if q == 1:
        return 0
    return (c // q**n) % q


def is_seq_host(r: HostRel, c: int, q: int, i: int) -> bool:
    """The first i+1 digits of c in base q > 1 form an r-chain; vacuous for i = 0."""
    if i > 0 and q < 2:
        return False
    for n in range(i):
        if not r(digit_at(c, q, n), digit_at(c, q, n + 1)):
            return False
    return True


def rel_iter_host(r: HostRel, u: int, v: int, i: int, bound: int) -> bool:
    """
    r^i(u, v) with every intermediate value at most bound.

    Example:
        >>> rel_iter_host(lambda a, b: b == a + 1, 2, 5, 3, 10)
        True
    """
    frontier: Set[int] = {u}
    for _ in range(i):
        frontier = {b for a in frontier for b in range(bound + 1) if r(a, b)}
        if not frontier:
            return False
    return v in frontier


def rt_closure_host(r: HostRel, u: int, v: int, bound: int) -> bool:
    """r*(u, v) through values at most bound."""
    seen: Set[int] = {u}
    frontier = [u]
    while frontier:
        if v in seen:
            return True
        frontier = sorted({b for a in frontier for b in range(bound + 1) if b not in seen and r(a, b)})
        seen.update(frontier)
    return v in seen
