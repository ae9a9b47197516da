from dataclasses import replace

import pytest

from dio.closure import digit_at, is_seq_host, rel_iter_host, rt_closure_host
from dio.dsl import Divides, Le, NDivides, Ne, Shape
from dio.elem import (
    CAdd,
    CCst,
    CPar,
    CVar,
    elem_presolve,
    elem_used_vars,
    form_to_elem,
    presolved_assignment,
)
from dio.evaluate import df_eval_bounded
from dio.form import (
    DfAdd,
    DfAnd,
    DfCst,
    DfEq,
    DfEx,
    DfMul,
    DfOr,
    DioRelBuilder,
    Renaming,
    Valuation,
    atom_holds,
    df_arity,
    df_free_vars,
    df_rename,
    df_size,
)
from dio.oracle import chain_check, random_form
from dio.serialize import (
    dumps,
    elem_from_json,
    elem_to_json,
    form_from_json,
    form_from_sexpr,
    form_to_json,
    form_to_sexpr,
    poly_from_json,
    single_from_json,
    single_to_json,
)
from dio.shapes import fun_cst, fun_plus, fun_var, rel_disj, rel_divides, rel_false, rel_le, rel_ndivides, rel_ne, rel_rename, rel_true
from dio.single import (
    PAdd,
    PConst,
    PMul,
    PVar,
    elem_to_single,
    finitize_vars,
    poly_eval,
    project_params,
    single_eval,
    single_params,
    single_vars,
)
from solver.search import found, sat_cstrs
from utils.errors import DomainError, ParseError


def brute_holds(a, nu, bound, env=()):
    """Reference semantics: every existential tried over 0..bound."""
    def value(i):
        return env[i] if i < len(env) else nu(i - len(env))

    if isinstance(a, (DfCst, DfEq, DfAdd, DfMul)):
        return atom_holds(a, value)
    if isinstance(a, DfAnd):
        return brute_holds(a.left, nu, bound, env) and brute_holds(a.right, nu, bound, env)
    if isinstance(a, DfOr):
        return brute_holds(a.left, nu, bound, env) or brute_holds(a.right, nu, bound, env)
    return any(brute_holds(a.body, nu, bound, (w,) + tuple(env)) for w in range(bound + 1))


class TestForms:
    def test_valuation(self):
        nu = Valuation.of([3, 4])
        assert (nu(0), nu(1), nu(5)) == (3, 4, 0)
        lifted = nu.lift(7)
        assert (lifted(0), lifted(1), lifted(2)) == (7, 3, 4)
        with pytest.raises(DomainError):
            nu(-1)

    def test_renaming(self):
        assert Renaming.shift(2)(0) == 2
        rho = Renaming((1,), 3)
        assert (rho(0), rho(1), rho(4)) == (1, 3, 6)
        lifted = Renaming.shift(1).lift()
        assert (lifted(0), lifted(1)) == (0, 2)

    def test_size_counts_occurrences(self):
        assert df_size(DfEx(DfAnd(DfCst(0, 1), DfAdd(1, 0, 0)))) == 4
        atom = DfCst(0, 1)
        assert df_size(DfAnd(atom, atom)) == 3

    def test_free_vars(self):
        a = DfEx(DfAdd(0, 1, 3))
        assert df_free_vars(a) == {0, 2}
        assert df_arity(a) == 3
        assert df_arity(DfEx(DfCst(0, 2))) == 0

    def test_rename_keeps_bound_variables(self):
        renamed = df_rename(DfEx(DfEq(0, 1)), Renaming.shift(2))
        assert form_to_sexpr(renamed) == "(ex (= x0 x3))"


class TestBoundedEvaluation:
    def test_examples(self):
        double = DfEx(DfAdd(0, 1, 1))
        assert df_eval_bounded(double, Valuation.of([3]), 10)
        result = df_eval_bounded(double, Valuation.of([3]), 5)
        assert not result and repr(result) == "FalseUpTo(5)"
        square = DfEx(DfMul(1, 0, 0))
        assert df_eval_bounded(square, Valuation.of([9]), 5)
        assert not df_eval_bounded(square, Valuation.of([8]), 5)
        assert df_eval_bounded(DfOr(DfCst(0, 1), DfCst(0, 2)), Valuation.of([2]), 0)

    def test_against_brute_force(self, rng):
        for _ in range(300):
            a = random_form(rng, int(rng.integers(1, 7)), 2, max_const=3)
            nu = Valuation.of([int(x) for x in rng.integers(0, 4, size=2)])
            assert bool(df_eval_bounded(a, nu, 3)) == brute_holds(a, nu, 3), form_to_sexpr(a)

    def test_random_form_scope(self, rng):
        for _ in range(100):
            a = random_form(rng, int(rng.integers(1, 11)), 3)
            assert df_size(a) <= 10
            assert df_free_vars(a) <= {0, 1, 2}


class TestElementary:
    def test_atom_window(self):
        rep = form_to_elem(DfCst(0, 3))
        assert (rep.start, rep.width, rep.ref, len(rep.constraints)) == (0, 8, 7, 5)
        assert found(sat_cstrs(rep.with_ref_zero(), [3], 10))
        assert not found(sat_cstrs(rep.with_ref_zero(), [4], 10))

    def test_connective_layout(self):
        rep = form_to_elem(DfAnd(DfCst(0, 1), DfEq(0, 1)))
        assert (rep.width, rep.ref) == (17, 16)
        assert rep.constraints[0] == CAdd(16, 7, 15)
        ex = form_to_elem(DfEx(DfCst(0, 1)), start=4)
        assert (ex.start, ex.width, ex.ref, ex.witnesses) == (4, 9, 11, (12,))

    def test_width_bound(self, rng):
        for _ in range(200):
            a = random_form(rng, int(rng.integers(1, 11)), 3)
            rep = form_to_elem(a)
            assert rep.width <= 8 * df_size(a)
            assert all(rep.start <= u < rep.end for u in elem_used_vars(rep.constraints))

    def test_presolve(self):
        pre = elem_presolve([CVar(0, 1), CCst(1, 0), CAdd(2, 0, 3)])
        assert pre.constraints == (CCst(0, 0),)
        assert pre.alias == {0: 0, 1: 0, 2: 2, 3: 2}
        assert presolved_assignment(pre, {0: 0, 2: 5}) == {0: 0, 1: 0, 2: 5, 3: 5}

    def test_presolve_keeps_solutions(self, rng):
        for _ in range(50):
            a = random_form(rng, int(rng.integers(1, 8)), 2, max_const=3)
            nu = [int(x) for x in rng.integers(0, 4, size=2)]
            rep = form_to_elem(a)
            cs = rep.with_ref_zero()
            pre = elem_presolve(cs, rep.witnesses)
            limits = {u: None for u in elem_used_vars(cs)}
            limits.update({w: 3 for w in rep.witnesses})
            plain = sat_cstrs(cs, nu, 3, bounds=limits, order=rep.witnesses)
            reps = {u: None for u in elem_used_vars(pre.constraints)}
            reps.update({w: 3 for w in pre.witnesses})
            merged = sat_cstrs(pre.constraints, nu, 3, bounds=reps, order=pre.witnesses)
            assert found(plain) == found(merged)


class TestSingle:
    def test_poly_eval(self):
        x = PVar(0)
        p = PAdd(PMul(x, x), PConst(3))
        assert poly_eval(p, [], [4]) == 19

    def test_compression(self):
        e = elem_to_single([CCst(0, 2), CAdd(1, 0, 0)])
        assert single_eval(e, [], [2, 4])
        assert not single_eval(e, [], [2, 5])
        assert single_vars(e) == [0, 1]
        assert single_params(elem_to_single([CPar(0, 1)])) == [1]

    def test_finitize(self):
        n, e = finitize_vars(elem_to_single([CCst(5, 1), CVar(9, 5)]))
        assert n == 2
        assert single_vars(e) == [0, 1]
        assert single_eval(e, [], [1, 1])
        assert not single_eval(e, [], [1, 0])

    def test_project_params(self):
        e = project_params(elem_to_single([CPar(0, 3)]), 2)
        assert single_params(e) == []
        assert single_eval(e, [], [0])
        assert not single_eval(e, [], [1])


class TestSerialize:
    def test_existential_runs_fold(self):
        a = DfEx(DfEx(DfAdd(0, 1, 2)))
        assert form_to_json(a) == ["ex", 2, ["eq_add", 0, 1, 2]]
        assert form_to_sexpr(form_from_json(form_to_json(a))) == form_to_sexpr(a)

    def test_error_paths(self):
        with pytest.raises(ParseError) as err:
            form_from_json(["or", ["eq_cst", 0, 1], ["eq_cst", 0, -1]])
        assert err.value.position == "$[2][2]"
        with pytest.raises(ParseError):
            form_from_json(["and", ["eq_cst", 0, 1]])
        with pytest.raises(ParseError):
            form_from_json(["ex", 0, ["eq_cst", 0, 1]])

    def test_dumps_is_canonical(self):
        assert dumps({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'

    def test_sexpr(self):
        text = "(ex (and (= x0 1) (= x1 (+ x0 x0))))"
        assert form_to_sexpr(form_from_sexpr(text)) == text
        with pytest.raises(ParseError):
            form_from_sexpr("(and (= x0 1)")
        with pytest.raises(ParseError):
            form_from_sexpr("(xor (= x0 1) (= x0 2))")

    def test_signed_constants(self):
        with pytest.raises(ParseError):
            poly_from_json(["const", -2])
        assert poly_from_json(["const", -2], signed=True).n == -2

    def test_documents(self):
        rep = form_to_elem(DfEx(DfMul(0, 1, 1)))
        assert elem_from_json(elem_to_json(rep)) == rep
        e = elem_to_single(rep.with_ref_zero())
        assert single_to_json(single_from_json(single_to_json(e))) == single_to_json(e)


class TestBuilders:
    def test_functions(self):
        f = fun_plus(fun_var(0), fun_cst(2))
        assert f.holds_bounded(5, [3], 5)
        assert not f.holds_bounded(6, [3], 6)

    def test_relations(self):
        le = rel_le(fun_var(0), fun_var(1))
        assert le.holds_bounded([2, 5], 5)
        assert not le.holds_bounded([5, 2], 5)
        assert rel_divides(fun_var(0), fun_var(1)).holds_bounded([3, 12], 12)
        assert not rel_divides(fun_var(0), fun_var(1)).holds_bounded([5, 12], 12)
        assert rel_ndivides(fun_var(0), fun_var(1)).holds_bounded([5, 12], 12)
        assert not rel_ndivides(fun_var(0), fun_var(1)).holds_bounded([3, 12], 12)
        assert rel_true().holds_bounded([], 1)
        assert not rel_false().holds_bounded([], 1)

    def test_disjunction(self):
        one_or_two = rel_disj(DioRelBuilder(DfCst(0, 1), 1, "one"), DioRelBuilder(DfCst(0, 2), 1, "two"))
        assert one_or_two.arity == 1
        assert one_or_two.holds_bounded([1], 1) and one_or_two.holds_bounded([2], 1)
        assert not one_or_two.holds_bounded([3], 1)
        assert rel_ne(fun_var(0), fun_var(1)).holds_bounded([4, 1], 4)
        assert not rel_ne(fun_var(0), fun_var(1)).holds_bounded([3, 3], 4)

    def test_renaming_coherence(self, rng):
        eq = DioRelBuilder(DfEq(0, 1), 2, "eq")
        moved = rel_rename(Renaming((), 2), eq)
        assert moved.arity == 4
        assert moved.holds_bounded([9, 9, 5, 5], 1)
        assert not moved.holds_bounded([5, 5, 5, 6], 1)
        for _ in range(50):
            rho = Renaming(tuple(int(v) for v in rng.integers(0, 4, size=int(rng.integers(0, 3)))), int(rng.integers(0, 3)))
            nu = [int(v) for v in rng.integers(0, 3, size=6)]
            renamed = rel_rename(rho, eq)
            expected = eq.holds_bounded([nu[rho(0)], nu[rho(1)]], 1).holds
            assert renamed.holds_bounded(nu, 1).holds == expected, (rho, nu)

    def test_shapes(self):
        le5 = Shape("le5", ("x",), Le("x", 5))
        assert le5.holds([3], 10) and not le5.holds([6], 10)
        assert le5.compile().holds_bounded([3], 10)
        assert not le5.compile().holds_bounded([6], 10)
        assert Shape("div", ("d", "n"), Divides("d", "n")).holds([3, 12], 12)
        assert Shape("ndiv", ("d", "n"), NDivides("d", "n")).holds([5, 12], 12)
        assert Shape("ne", ("a", "b"), Ne("a", "b")).holds([1, 2], 3)
        assert not Shape("ne", ("a", "b"), Ne("a", "b")).holds([2, 2], 3)


class TestClosureHost:
    def test_digits(self):
        assert digit_at(7 * 64 + 3 * 8 + 5, 8, 1) == 3
        assert digit_at(9, 1, 4) == 0
        assert digit_at(9, 0, 0) is None

    def test_sequences(self):
        succ = lambda a, b: b == a + 1
        # digits 1, 2, 3 in base 10
        assert is_seq_host(succ, 321, 10, 2)
        assert not is_seq_host(succ, 331, 10, 2)
        assert is_seq_host(succ, 5, 0, 0)
        assert not is_seq_host(succ, 5, 1, 1)

    def test_iterates(self):
        succ = lambda a, b: b == a + 1
        assert rel_iter_host(succ, 2, 5, 3, 10)
        assert not rel_iter_host(succ, 2, 5, 2, 10)
        assert rel_iter_host(succ, 4, 4, 0, 10)
        assert rt_closure_host(succ, 1, 6, 10)
        assert not rt_closure_host(succ, 6, 1, 10)


def test_reduction_chain_agrees(rng):
    for _ in range(200):
        a = random_form(rng, int(rng.integers(1, 11)), 3)
        nu = [int(x) for x in rng.integers(0, 6, size=3)]
        verdict = chain_check(a, nu, 3)
        assert verdict.consistent, (form_to_sexpr(a), nu, verdict)


class TestChainCheck:
    def test_single_equation_searched(self):
        verdict = chain_check(DfCst(0, 3), [3], 3)
        assert verdict.form_holds and verdict.elem_holds
        assert verdict.single_holds is True
        assert verdict.consistent

    def test_single_equation_refuted(self):
        verdict = chain_check(DfCst(0, 3), [4], 3)
        assert not verdict.form_holds and not verdict.elem_holds
        assert verdict.single_holds is False
        assert verdict.consistent

    def test_large_box_left_unchecked(self):
        # eight variables in [0, 3] exceed the scanned box
        verdict = chain_check(DfAdd(0, 1, 2), [3, 1, 1], 3)
        assert not verdict.form_holds and not verdict.elem_holds
        assert verdict.single_holds is None
        assert verdict.consistent

    def test_mismatch_is_inconsistent(self):
        verdict = chain_check(DfCst(0, 3), [3], 3)
        assert not replace(verdict, single_holds=False).consistent
