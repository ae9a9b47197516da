import pytest

from models.codec import (
    fractran_from_json,
    fractran_to_json,
    lterm_from_json,
    lterm_to_json,
    mm_from_json,
    mm_to_json,
    recalg_from_json,
    recalg_to_json,
)
from models.fractran import FractranProg, fractran_run, fractran_step, fractran_trace
from models.lterm import (
    App,
    Lam,
    Var,
    is_closed,
    l_eval,
    scott_case_list,
    scott_case_nat,
    scott_decode_list,
    scott_decode_nat,
    scott_encode_list,
    scott_encode_nat,
    subst,
)
from models.minsky import Dec, Inc, MMProg, MMState, mm0_halts, mm_out_code, mm_run, mm_step, mm_trace
from models.outcome import Halted, OutOfFuel
from models.recalg import Comp, Cst, Min, Proj, Rec, Succ, Zero, has_min, ra_eval, ra_relational
from models.skeleton import (
    Inl,
    SComp,
    SCons,
    SCst,
    SNil,
    SProj,
    SZero,
    skel_erase,
    skel_eval,
    skel_unerase,
    skel_valid,
    wcbv_recognizer,
)
from utils.errors import ClosednessError, ParseError, RegularityError, ShapeError


def random_recalg(rng, arity: int, depth: int):
    """Well-typed algorithm of the given arity; Min nodes may diverge."""
    if depth == 0 or rng.random() < 0.3:
        if arity == 0:
            return Cst(int(rng.integers(4)))
        choice = int(rng.integers(3)) if arity == 1 else 0
        if choice == 1:
            return Zero()
        if choice == 2:
            return Succ()
        return Proj(arity, int(rng.integers(arity)))
    kind = int(rng.integers(3 if arity >= 1 else 2))
    if kind == 0:
        k = int(rng.integers(3))
        gs = tuple(random_recalg(rng, arity, depth - 1) for _ in range(k))
        return Comp(random_recalg(rng, k, depth - 1), gs, arity)
    if kind == 1:
        return Min(random_recalg(rng, arity + 1, depth - 1))
    return Rec(random_recalg(rng, arity - 1, depth - 1), random_recalg(rng, arity + 1, depth - 1))


def add_alg():
    return Rec(Proj(1, 0), Comp(Succ(), (Proj(3, 1),), 3))


class TestMinsky:
    def test_step_examples(self):
        assert mm_step(MMProg(1, (Inc(0),), 1), MMState(1, (5,))) == MMState(2, (6,))
        jumpy = MMProg(1, (Dec(0, 9),), 1)
        assert mm_step(jumpy, MMState(1, (0,))) == MMState(9, (0,))
        assert mm_step(jumpy, MMState(0, (7,))) is None

    def test_step_shape(self):
        with pytest.raises(ShapeError):
            mm_step(MMProg(1, (Inc(0),), 1), MMState(1, (1, 2)))

    def test_out_code(self):
        prog = MMProg(1, (Inc(0), Inc(0), Inc(0)), 1)
        assert mm_out_code(0, prog)
        assert not mm_out_code(2, prog)
        assert mm_out_code(4, prog)

    def test_run_examples(self):
        prog = MMProg(1, (Inc(0), Dec(0, 0)), 1)
        assert mm_run(prog, MMState(1, (0,)), 10) == Halted(MMState(3, (0,)), 2)
        assert mm_run(prog, MMState(7, (4,)), 0) == Halted(MMState(7, (4,)), 0)
        assert isinstance(mm_run(MMProg(1, (Dec(0, 1),), 1), MMState(1, (0,)), 100), OutOfFuel)

    def test_trace_and_initial(self, recognizer):
        st = MMState.initial([0], recognizer.n)
        states = list(mm_trace(recognizer, st, 10))
        assert states == [MMState(1, (0, 0)), MMState(3, (0, 0)), MMState(4, (0, 1))]
        assert list(mm_trace(recognizer, st, 2)) == states[:2]
        assert recognizer.self_loops() == [2]
        assert isinstance(mm_run(recognizer, MMState.initial([1], 2), 50), OutOfFuel)

    def test_bad_register(self):
        with pytest.raises(ShapeError):
            MMProg(1, (Inc(2),), 2)

    def test_halting_on_zero(self):
        prog = MMProg(1, (Dec(0, 0), Dec(0, 0)), 1)
        assert mm0_halts(prog, MMState(1, (2,)), 10) is False
        assert mm0_halts(prog, MMState(1, (1,)), 10) is True
        assert mm0_halts(MMProg(1, (Dec(0, 1),), 1), MMState(1, (0,)), 10) is None


class TestFractran:
    def test_step_examples(self, conway):
        assert fractran_step(conway, 7) == 5
        assert fractran_step(conway, 5) == 10
        assert fractran_step(FractranProg(()), 12) is None

    def test_conway_trace_never_halts(self, conway):
        assert list(fractran_trace(conway, 7, 4)) == [7, 5, 10, 20]
        assert list(fractran_trace(conway, 7, 1)) == [7]
        assert list(fractran_trace(FractranProg(()), 12, 5)) == [12]
        assert isinstance(fractran_run(conway, 7, 5), OutOfFuel)
        assert isinstance(fractran_run(conway, 7, 10**4), OutOfFuel)

    def test_run_examples(self):
        assert fractran_run(FractranProg(((3, 2),)), 2, 10) == Halted(3, 1)
        assert fractran_run(FractranProg(()), 42, 10) == Halted(42, 0)

    def test_regularity(self):
        prog = FractranProg(((1, 0),))
        assert not prog.regular
        with pytest.raises(RegularityError):
            fractran_step(prog, 3)


class TestRecAlg:
    def test_examples(self):
        assert ra_eval(Succ(), [4], 2) == 5
        twice = Comp(Succ(), (Comp(Succ(), (Proj(1, 0),), 1),), 1)
        assert ra_eval(twice, [3], 20) == 5
        assert ra_eval(Min(Proj(2, 0)), [9], 5) == 0

    def test_arity_checks(self):
        with pytest.raises(ShapeError):
            Comp(Succ(), (Proj(2, 0), Proj(2, 1)), 2)
        with pytest.raises(ShapeError):
            Rec(Cst(0), Succ())
        with pytest.raises(ShapeError):
            ra_eval(Succ(), [1, 2], 10)
        with pytest.raises(ShapeError):
            Proj(2, 2)

    def test_addition(self):
        for x in range(5):
            for y in range(5):
                assert ra_eval(add_alg(), [x, y], 50) == x + y

    def test_fuel_monotone(self, rng):
        for _ in range(200):
            f = random_recalg(rng, 1, 3)
            x = int(rng.integers(4))
            first = None
            for c in range(30):
                value = ra_eval(f, [x], c)
                if first is None and value is not None:
                    first = value
                if first is not None:
                    assert value == first

    def test_minimization_needs_defined_prefix(self):
        # f(x) = 1 - x truncated: nonzero at 0, zero at 1
        one_minus = Rec(Cst(1), Comp(Cst(0), (), 2))
        f = Comp(one_minus, (Proj(2, 0),), 2)
        assert ra_eval(Min(f), [0], 50) == 1
        assert ra_eval(Min(Comp(Succ(), (Proj(2, 0),), 2)), [0], 200) is None

    def test_relational(self):
        assert ra_relational(add_alg(), [2, 3], 5, 1000) is True
        assert ra_relational(add_alg(), [2, 3], 6, 1000) is False
        assert ra_relational(Min(Comp(Succ(), (Proj(2, 0),), 2)), [0], 0, 500) is None

    def test_has_min(self):
        assert has_min(Comp(Min(Proj(2, 0)), (Proj(1, 0),), 1))
        assert not has_min(add_alg())


class TestSkeleton:
    def test_erase_examples(self):
        assert skel_erase(Zero()) == SZero()
        f = Comp(add_alg(), (Proj(1, 0), Zero()), 1)
        assert skel_erase(f) == SComp(skel_erase(add_alg()), SCons(SProj(0), SCons(SZero(), SNil())))

    def test_eval_examples(self):
        assert skel_eval(SCst(7), 1, 0, []) == Inl(7)
        assert skel_eval(SCst(7), 0, 0, []) is None
        assert skel_eval(skel_erase(add_alg()), 64, 0, [2, 3]) == Inl(5)

    def test_unerase_roundtrip(self, rng):
        for _ in range(100):
            f = random_recalg(rng, 2, 3)
            assert skel_unerase(skel_erase(f), 2) == f
            assert skel_valid(skel_erase(f), 2)
        assert not skel_valid(SZero(), 2)
        assert not skel_valid(SComp(SCst(1), SCons(SZero(), SZero())), 1)

    def test_erase_correct(self, rng):
        for _ in range(300):
            k = int(rng.integers(0, 3))
            f = random_recalg(rng, k, 4)
            v = [int(x) for x in rng.integers(0, 5, size=k)]
            c = int(rng.integers(0, 65))
            value = ra_eval(f, v, c)
            result = skel_eval(skel_erase(f), c, 0, v)
            assert result == (None if value is None else Inl(value))
            assert wcbv_recognizer(f, v, c) == (value is not None)


class TestLambda:
    def test_values(self):
        ident = Lam(Var(0))
        assert l_eval(ident, 5) == Halted(ident, 0)
        k = Lam(Lam(Var(1)))
        assert l_eval(App(ident, k), 5) == Halted(k, 1)

    def test_open_terms(self):
        assert not is_closed(Lam(Var(1)))
        with pytest.raises(ClosednessError):
            l_eval(Var(0), 3)
        with pytest.raises(ClosednessError):
            subst(Var(0), 0, Var(0))

    def test_omega_runs_out(self):
        delta = Lam(App(Var(0), Var(0)))
        assert isinstance(l_eval(App(delta, delta), 50), OutOfFuel)

    def test_scott_numerals(self):
        assert scott_encode_nat(0) == Lam(Lam(Var(1)))
        for n in range(8):
            t = scott_encode_nat(n)
            assert is_closed(t)
            assert scott_decode_nat(t) == n
            assert scott_case_nat(t, 50) == n

    def test_scott_lists(self):
        for xs in ([], [1, 2], [0, 3, 0]):
            t = scott_encode_list(xs)
            assert scott_decode_list(t) == xs
            assert scott_case_list(t, 100) == xs
        assert scott_decode_list(scott_encode_nat(2)) is None

    def test_fuel_monotone(self):
        two = scott_encode_nat(2)
        term = App(App(two, Lam(Var(0))), Lam(Var(0)))
        outcome = l_eval(term, 10)
        assert outcome == Halted(scott_encode_nat(1), 3)
        assert l_eval(term, 100) == outcome
        assert isinstance(l_eval(term, 2), OutOfFuel)


class TestCodec:
    def test_mm_document(self, recognizer):
        doc = mm_to_json(recognizer)
        assert doc == {"start": 1, "regs": 2, "instrs": [{"DEC": [0, 3]}, {"DEC": [1, 2]}, {"INC": 1}]}
        assert mm_from_json(doc) == recognizer

    def test_fractran_document(self, conway):
        assert fractran_to_json(conway) == [[5, 7], [2, 1]]
        assert fractran_from_json([[5, 7], [2, 1]]) == conway

    def test_recalg_document(self):
        f = Min(Comp(add_alg(), (Proj(2, 0), Proj(2, 1)), 2))
        assert recalg_from_json(recalg_to_json(f)) == f
        assert recalg_to_json(Proj(3, 1)) == ["proj", 3, 1]
        with pytest.raises(ParseError):
            recalg_from_json(["loop"])

    def test_lterm_document(self):
        t = App(Lam(Var(0)), Lam(Lam(Var(1))))
        assert lterm_to_json(t) == ["app", ["lam", ["var", 0]], ["lam", ["lam", ["var", 1]]]]
        assert lterm_from_json(lterm_to_json(t)) == t
