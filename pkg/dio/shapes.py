"""
Closure combinators on de Bruijn builders.

Relations are read over x_0, x_1, ...; functions have their output in x_0 and
input i in x_{1+i}. Every combinator returns a plain formula, its meaning being
the composed host relation.
"""
import logging

from dio.form import (
    DfAdd,
    DfAnd,
    DfCst,
    DfEq,
    DfEx,
    DfMul,
    DfOr,
    DioFunBuilder,
    DioRelBuilder,
    Renaming,
    df_rename,
)

logger = logging.getLogger(__name__)


def rel_conj(a: DioRelBuilder, b: DioRelBuilder) -> DioRelBuilder:
    return DioRelBuilder(DfAnd(a.form, b.form), max(a.arity, b.arity), f"({a.name} & {b.name})")


def rel_disj(a: DioRelBuilder, b: DioRelBuilder) -> DioRelBuilder:
    return DioRelBuilder(DfOr(a.form, b.form), max(a.arity, b.arity), f"({a.name} | {b.name})")


def rel_exists(a: DioRelBuilder) -> DioRelBuilder:
    """nu -> exists n, a(n . nu)"""
    return DioRelBuilder(DfEx(a.form), max(0, a.arity - 1), f"ex {a.name}")


def rel_rename(rho: Renaming, a: DioRelBuilder) -> DioRelBuilder:
    """nu -> a(nu o rho)"""
    arity = max((rho(i) + 1 for i in range(a.arity)), default=0)
    return DioRelBuilder(df_rename(a.form, rho), arity, a.name)


def fun_var(i: int) -> DioFunBuilder:
    """nu -> nu(i)"""
    return DioFunBuilder(DfEq(0, 1 + i), i + 1, f"x{i}")


def fun_cst(n: int) -> DioFunBuilder:
    return DioFunBuilder(DfCst(0, n), 0, str(n))


def fun_binary(f: DioFunBuilder, g: DioFunBuilder, atom, op: str) -> DioFunBuilder:
    """
    Combine f and g through atom(out, left, right), a formula over three indices.
    """
    # under two binders: x0 = value of g, x1 = value of f, x2 = output, x_{3+i} = input i
    fr = df_rename(f.form, Renaming((1,), 3))
    gr = df_rename(g.form, Renaming((0,), 3))
    form = DfEx(DfEx(DfAnd(atom(2, 1, 0), DfAnd(fr, gr))))
    return DioFunBuilder(form, max(f.arity, g.arity), f"({f.name} {op} {g.name})")


def fun_plus(f: DioFunBuilder, g: DioFunBuilder) -> DioFunBuilder:
    return fun_binary(f, g, DfAdd, "+")


def fun_mult(f: DioFunBuilder, g: DioFunBuilder) -> DioFunBuilder:
    return fun_binary(f, g, DfMul, "*")


def fun_rename(rho: Renaming, f: DioFunBuilder) -> DioFunBuilder:
    """nu -> f(nu o rho)"""
    arity = max((rho(i) + 1 for i in range(f.arity)), default=0)
    return DioFunBuilder(df_rename(f.form, rho.lift()), arity, f.name)


def rel_fun_eq(f: DioFunBuilder, g: DioFunBuilder) -> DioRelBuilder:
    """nu -> f(nu) = g(nu)"""
    fr = df_rename(f.form, Renaming((1,), 2))
    gr = df_rename(g.form, Renaming((0,), 2))
    form = DfEx(DfEx(DfAnd(DfEq(1, 0), DfAnd(fr, gr))))
    return DioRelBuilder(form, max(f.arity, g.arity), f"{f.name} = {g.name}")


def _lift(f: DioFunBuilder, k: int) -> DioFunBuilder:
    return fun_rename(Renaming.shift(k), f)


def rel_true() -> DioRelBuilder:
    return DioRelBuilder(DfEx(DfCst(0, 0)), 0, "true")


def rel_false() -> DioRelBuilder:
    return DioRelBuilder(DfEx(DfAnd(DfCst(0, 0), DfCst(0, 1))), 0, "false")


def rel_le(f: DioFunBuilder, g: DioFunBuilder) -> DioRelBuilder:
    """exists a, a + f = g"""
    inner = rel_fun_eq(fun_plus(fun_var(0), _lift(f, 1)), _lift(g, 1))
    return DioRelBuilder(rel_exists(inner).form, max(f.arity, g.arity), f"{f.name} <= {g.name}")


def rel_lt(f: DioFunBuilder, g: DioFunBuilder) -> DioRelBuilder:
    """exists a, 1 + a + f = g"""
    lhs = fun_plus(fun_plus(fun_cst(1), fun_var(0)), _lift(f, 1))
    inner = rel_fun_eq(lhs, _lift(g, 1))
    return DioRelBuilder(rel_exists(inner).form, max(f.arity, g.arity), f"{f.name} < {g.name}")


def rel_ne(f: DioFunBuilder, g: DioFunBuilder) -> DioRelBuilder:
    return DioRelBuilder(rel_disj(rel_lt(f, g), rel_lt(g, f)).form, max(f.arity, g.arity), f"{f.name} != {g.name}")


def rel_divides(f: DioFunBuilder, g: DioFunBuilder) -> DioRelBuilder:
    """f | g, i.e. exists a, g = a * f"""
    inner = rel_fun_eq(_lift(g, 1), fun_mult(fun_var(0), _lift(f, 1)))
    return DioRelBuilder(rel_exists(inner).form, max(f.arity, g.arity), f"{f.name} | {g.name}")


def rel_ndivides(f: DioFunBuilder, g: DioFunBuilder) -> DioRelBuilder:
    """
    f does not divide g:
    (f = 0 and g != 0) or exists a b, g = a*f + b and 0 < b < f.
    """
    zero = rel_conj(rel_fun_eq(f, fun_cst(0)), rel_ne(g, fun_cst(0)))
    # under two binders x0 = b and x1 = a
    f2, g2 = _lift(f, 2), _lift(g, 2)
    euclid = rel_fun_eq(g2, fun_plus(fun_mult(fun_var(1), f2), fun_var(0)))
    remainder = rel_conj(rel_lt(fun_cst(0), fun_var(0)), rel_lt(fun_var(0), f2))
    split = rel_exists(rel_exists(rel_conj(euclid, remainder)))
    return DioRelBuilder(rel_disj(zero, split).form, max(f.arity, g.arity), f"{f.name} !| {g.name}")
