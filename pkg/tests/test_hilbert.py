import itertools
import json
import logging

import pytest

import config
from compilers.bisim import fractran_lockstep
from compilers.mm_fractran import godel_encode
from dio.dsl import Le, Lt, Shape
from dio.evaluate import df_eval_bounded
from dio.form import Valuation
from dio.shapes import fun_cst, fun_var
from dio.single import DioSingle, PAdd, PConst, PMul, PPar, PVar, poly_eval, single_params, single_vars
from hilbert.alpha import WITNESSES, alpha_formula, alpha_shape
from hilbert.binary import and_shape, binomial_shape, is_digit_formula, is_digit_shape, masked_le_shape
from hilbert.bounded import FRAME, CipherPlan, bounded_forall, bounded_forall_host, bounded_forall_shape, simulate_bounded_forall
from hilbert.cipher import (
    Cipher,
    cipher_add,
    cipher_base,
    cipher_decode,
    cipher_digit_ok,
    cipher_encode,
    cipher_index,
    cipher_mask,
    cipher_mult_mask,
    cipher_product_matches,
    cipher_scaled_mask,
    cipher_u,
    cipher_u_prime,
    cipher_w,
)
from hilbert.dprm import dprm_pipeline, initial_code_formula
from hilbert.expo import expo_formula, expo_shape, pos_expo_shape
from hilbert.fractran_dio import fractran_halting_formula, fractran_halting_host, fractran_step_formula, fractran_stop_formula
from hilbert.godel import godel_exp_formula, godel_exp_value
from hilbert.h10z import h10_to_h10z, h10z_eval, h10z_solve, lift_witness
from models.fractran import FractranProg, fractran_step
from models.minsky import Inc, MMProg, MMState, mm_trace
from numtheory.binomial import binomial, is_digit, masked_le
from numtheory.primes import prime_streams
from pell.alpha import alpha, alpha_witness
from solver.search import NoneUpTo
from utils.errors import DigitOverflowError, DomainError, ShapeError, UnsupportedStartError

logger = logging.getLogger(__name__)

SHAPES = [(q, n) for q in (2, 3) for n in (1, 2, 3)]


def vectors(n: int, top: int):
    return itertools.product(range(top), repeat=n)


class TestCipher:
    @pytest.mark.parametrize("q, n", SHAPES)
    def test_roundtrip(self, q, n):
        for v in vectors(n, 1 << q):
            c = cipher_encode(v, q)
            assert c.n == n and c.r == cipher_base(q)
            assert cipher_decode(c) == list(v)
            assert cipher_digit_ok(c.value, n, q)

    @pytest.mark.parametrize("q, n", SHAPES)
    def test_parallel_add(self, q, n):
        limit = 1 << q
        for b in vectors(n, limit):
            for c in vectors(n, limit):
                cb, cc = cipher_encode(b, q), cipher_encode(c, q)
                if all(x + y < limit for x, y in zip(b, c)):
                    assert cipher_add(cb, cc).value == cb.value + cc.value
                else:
                    with pytest.raises(DigitOverflowError):
                        cipher_add(cb, cc)

    @pytest.mark.parametrize("q, n", SHAPES)
    def test_masked_product(self, q, n):
        limit = 1 << q
        for b in vectors(n, limit):
            cb = cipher_encode(b, q)
            for c in vectors(n, limit):
                if any(x * y >= limit for x, y in zip(b, c)):
                    continue
                cc = cipher_encode(c, q)
                product = [x * y for x, y in zip(b, c)]
                assert cipher_product_matches(cipher_encode(product, q), cb, cc)
                wrong = list(product)
                wrong[0] = (wrong[0] + 1) % limit
                assert not cipher_product_matches(cipher_encode(wrong, q), cb, cc)

    @pytest.mark.parametrize("q, n", SHAPES)
    def test_extreme_digit(self, q, n):
        top = (1 << q) - 1
        c = cipher_encode([top] * n, q)
        assert cipher_decode(c) == [top] * n
        assert cipher_digit_ok(c.value, n, q)
        ones = cipher_encode([1] * n, q)
        assert cipher_product_matches(c, c, ones)
        assert cipher_product_matches(c, ones, c)
        assert cipher_mult_mask(c, ones) == cipher_scaled_mask(c)

    @pytest.mark.parametrize("q, n", SHAPES)
    def test_constants(self, q, n):
        r = cipher_base(q)
        u = cipher_u(n, q)
        assert cipher_decode(Cipher(q, n, u)) == [1] * n
        assert (u * u) & cipher_mask(n, q) == cipher_u_prime(n, q)
        assert cipher_w(n, q) * (r - 1) == r ** ((1 << (n + 1)) + 1) - r
        assert cipher_decode(cipher_index(n, q)) == list(range(n))

    def test_errors(self):
        with pytest.raises(DigitOverflowError):
            cipher_encode([4], 2)
        with pytest.raises(DomainError):
            cipher_decode(Cipher(2, 1, 1))
        with pytest.raises(ShapeError):
            cipher_add(cipher_encode([1], 2), cipher_encode([1, 1], 2))
        r = cipher_base(2)
        assert not cipher_digit_ok((1 << 2) * r**2, 1, 2)


class TestBinaryShapes:
    def test_is_digit_against_host(self):
        shape = is_digit_shape()
        for q in (2, 3, 4):
            for n in range(4):
                for c in range(30):
                    for d in range(q + 1):
                        bound = c + q ** (n + 1)
                        assert shape.holds([c, q, n, d], bound) == is_digit(c, q, n, d), (c, q, n, d)

    def test_is_digit_formula(self):
        rel = is_digit_formula()
        assert rel.arity == 4
        # 45 = 231 in base 4, witnessed by 45 = (2*4 + 3)*4 + 1
        assert is_digit(45, 4, 1, 3)
        assert is_digit_shape().holds([45, 4, 1, 3], 1, fixed={"a": 2, "b": 1, "p": 4})
        assert not is_digit_shape().holds([45, 4, 1, 2], 1, fixed={"a": 2, "b": 1, "p": 4})
        # with n = 0 the power needs no Pell witnesses and every witness lies in [0, c]
        assert df_eval_bounded(rel.form, Valuation.of([45, 4, 0, 1]), 45)
        assert not df_eval_bounded(rel.form, Valuation.of([45, 4, 0, 2]), 45)

    def test_binomial(self):
        shape = binomial_shape()
        for n in range(8):
            for k in range(n + 2):
                assert shape.holds([binomial(n, k), n, k], 1)
                assert not shape.holds([binomial(n, k) + 1, n, k], 1)

    def test_masked_le(self):
        shape = masked_le_shape()
        for a in range(33):
            for b in range(33):
                assert shape.holds([a, b], 1) == masked_le(a, b), (a, b)

    def test_and(self):
        shape = and_shape()
        for x in range(16):
            for y in range(16):
                for z in range(16):
                    assert shape.holds([z, x, y], 1) == (z == x & y), (z, x, y)


class TestExponential:
    def test_positive_branch(self):
        shape = pos_expo_shape()
        for q in range(1, 5):
            for n in range(1, 5):
                x = q**n
                assert shape.holds([x, q, n], 1)
                assert not shape.holds([x + 1, q, n], 1)
                assert not shape.holds([x - 1, q, n], 1)

    def test_trivial_branches(self):
        shape = expo_shape()
        for q in range(5):
            assert shape.holds([1, q, 0], 1)
            assert not shape.holds([2, q, 0], 1)
        for n in range(1, 5):
            assert shape.holds([0, 0, n], 1)
            assert not shape.holds([1, 0, n], 1)
        assert not shape.holds([0, 0, 0], 1)

    def test_trivial_branches_compiled(self):
        fun = expo_formula()
        assert fun.arity == 2
        for q in (0, 1, 7):
            assert fun.holds_bounded(1, [q, 0], 4)
        for n in (1, 3):
            assert fun.holds_bounded(0, [0, n], 4)

    @pytest.mark.parametrize("b, c", [(4, 0), (4, 1), (4, 2), (5, 2), (6, 2)])
    def test_alpha_body_with_witness(self, b, c):
        a = alpha(b, c)
        w = alpha_witness(a, b, c)
        assert set(w) == set(WITNESSES)
        assert alpha_shape().holds([a, b, c], 1, fixed=w)
        assert not alpha_shape().holds([a + 1, b, c], 1, fixed=w)

    def test_formula_sizes(self):
        sizes = {"alpha": alpha_formula().size(), "expo": expo_formula().size()}
        for name, size in sizes.items():
            logger.info(f"{name} formula size {size}, reference {config.FORMULA_SIZES[name]}, delta {size - config.FORMULA_SIZES[name]}")
        with open(config.FORMULA_SIZES["golden_file"], encoding="utf-8") as f:
            assert json.load(f) == sizes


class TestBoundedForall:
    @pytest.fixture
    def le5(self):
        return Shape("le5", ("x",), Le("x", 5)).compile()

    @pytest.fixture
    def below(self):
        return Shape("below", ("x", "u"), Lt("x", "u")).compile()

    def test_plan_names(self, le5):
        plan = CipherPlan.for_relation(le5)
        assert set(FRAME) <= set(plan.names)
        assert len(set(plan.names)) == len(plan.names)
        assert plan.params == ()

    def test_host(self, le5):
        assert bounded_forall_host(6, le5, [], 10)
        assert not bounded_forall_host(7, le5, [], 10)

    def test_simulation(self, le5):
        sim = simulate_bounded_forall(4, le5, [], 10)
        assert sim.holds and sim.failed == () and sim.missing is None
        assert set(sim.witness) == set(CipherPlan.for_relation(le5).names)
        assert sim.witness["n"] == 4
        assert cipher_decode(Cipher(sim.witness["q"], 4, sim.witness["t"])) == [0, 1, 2, 3]
        assert bounded_forall_shape(fun_cst(4), le5).holds([], 1, fixed=sim.witness)

    def test_missing_index(self, le5, below):
        sim = simulate_bounded_forall(7, le5, [], 10)
        assert not sim.holds and sim.missing == 6
        assert simulate_bounded_forall(3, below, [2], 10).missing == 2

    def test_parameter(self, below):
        sim = simulate_bounded_forall(3, below, [3], 10)
        assert sim.holds and sim.failed == ()
        assert bounded_forall_shape(fun_var(0), below).holds([3], 1, fixed=sim.witness)

    def test_vacuous(self, below):
        sim = simulate_bounded_forall(0, below, [0], 5)
        assert sim.holds and sim.failed == ()
        assert sim.witness["u"] == 0

    def test_formula(self, le5):
        rel = bounded_forall(fun_cst(2), le5)
        assert rel.arity == 0
        # the cipher frame inlines the exponential at least five times
        assert rel.size() > 4 * expo_formula().size()


def random_fractran(rng) -> FractranProg:
    size = int(rng.integers(0, 4))
    return FractranProg(tuple((int(rng.integers(0, 10)), int(rng.integers(1, 10))) for _ in range(size)))


class TestFractranFormulas:
    def test_step_and_stop_match_host(self, rng):
        for _ in range(25):
            prog = random_fractran(rng)
            step = fractran_step_formula(prog)
            stop = fractran_stop_formula(prog)
            for x in range(61):
                succ = fractran_step(prog, x)
                bound = 9 * max(x, 1)
                assert bool(stop.holds_bounded([x], bound)) == (succ is None), (prog, x)
                if succ is not None:
                    assert step.holds_bounded([succ, x], 9 * max(x, succ, 1)), (prog, x)
                for y in {x, x + 1, 2 * x + 1, (succ or 0) + 1} - {succ}:
                    assert not step.holds_bounded([y, x], 9 * max(x, y, 1)), (prog, x, y)

    def test_empty_program_never_steps(self):
        prog = FractranProg(())
        assert not fractran_step_formula(prog).holds_bounded([0, 0], 3)
        assert fractran_stop_formula(prog).holds_bounded([5], 3)

    def test_halting_host(self, conway):
        assert not fractran_halting_host(conway, 7, 100)
        assert fractran_halting_host(FractranProg(((3, 2),)), 8, 10)

    def test_halting_formula_arity(self):
        rel = fractran_halting_formula(FractranProg(((3, 2),)), fun_var(0))
        assert rel.arity == 1
        assert rel.size() > 0


class TestGodel:
    def test_values(self):
        assert godel_exp_value([]) == 1
        assert godel_exp_value([1, 0, 2]) == 7 * 19**2

    def test_matches_machine_encoding(self):
        streams = prime_streams()
        for v in ([0], [2, 1], [1, 0, 3]):
            state = MMState(1, (0,) + tuple(v))
            assert godel_encode(state) == streams.p_at(1) * godel_exp_value(v)

    def test_formula_shape(self):
        assert godel_exp_formula(2).arity == 2
        assert godel_exp_formula(2).size() > godel_exp_formula(1).size()
        assert initial_code_formula(1).arity == 1


def random_poly(rng, nvars: int, depth: int):
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.6:
            return PVar(int(rng.integers(nvars)))
        return PConst(int(rng.integers(0, 4)))
    node = PAdd if rng.random() < 0.5 else PMul
    return node(random_poly(rng, nvars, depth - 1), random_poly(rng, nvars, depth - 1))


class TestIntegers:
    def test_planted_solutions_lift(self, rng):
        for _ in range(100):
            nvars = int(rng.integers(1, 4))
            w = [int(x) for x in rng.integers(0, 6, size=nvars)]
            lhs, rhs = random_poly(rng, nvars, 3), random_poly(rng, nvars, 3)
            gap = poly_eval(lhs, (), w) - poly_eval(rhs, (), w)
            e = DioSingle(lhs, PAdd(rhs, PConst(gap))) if gap >= 0 else DioSingle(PAdd(lhs, PConst(-gap)), rhs)
            p = h10_to_h10z(e, nvars)
            assert p.nvars == 4 * nvars
            assert h10z_eval(p, lift_witness(w)) == 0

    def test_unsolvable_instances(self):
        x = PVar(0)
        cases = [DioSingle(PAdd(PMul(PConst(a), x), PConst(c)), PConst(0)) for a, c in ((1, 1), (2, 3), (3, 1), (1, 5), (4, 2))]
        cases += [DioSingle(PAdd(PMul(x, x), PConst(c + 1)), PConst(c)) for c in range(5)]
        for e in cases:
            assert h10z_solve(h10_to_h10z(e, 1), 10) == NoneUpTo(10)

    def test_least_root(self):
        p = h10_to_h10z(DioSingle(PVar(0), PConst(2)), 1)
        assert h10z_solve(p, 10) == [-1, -1, 0, 0]
        assert h10z_solve(p, 10, shards=3) == [-1, -1, 0, 0]

    def test_rejects(self):
        with pytest.raises(ShapeError):
            h10_to_h10z(DioSingle(PPar(0), PConst(0)), 1)
        with pytest.raises(ShapeError):
            h10_to_h10z(DioSingle(PVar(3), PConst(0)), 2)
        with pytest.raises(ShapeError):
            h10z_eval(h10_to_h10z(DioSingle(PVar(0), PConst(0)), 1), [0, 0])


@pytest.mark.slow
class TestDprm:
    def test_pipeline(self, recognizer):
        result = dprm_pipeline(recognizer, 1)
        assert result.nparams == 1
        assert single_params(result.equation) in ([], [0])
        assert single_vars(result.equation) == list(range(result.nvars))
        assert result.machine.self_loops() == []
        assert len(result.fractran) == result.stages["fractions"] == 11
        assert result.formula.arity == 1
        assert result.stages["mm_instructions"] == 3
        assert result.stages["mm_loop_free_instructions"] == 6
        assert result.stages["variables"] == result.nvars

        assert fractran_lockstep(result.machine, [0, 0, 0], 200) is None
        assert fractran_lockstep(result.machine, [0, 1, 0], 200) is None
        step = fractran_step_formula(result.fractran)
        top = max(max(frac) for frac in result.fractran.fractions)
        for state in itertools.islice(mm_trace(result.machine, MMState.initial([0, 0], 3), 10), 5):
            x = godel_encode(state)
            y = fractran_step(result.fractran, x)
            if y is not None:
                assert step.holds_bounded([y, x], top * max(x, y))

        again = dprm_pipeline(recognizer, 1)
        assert again.digest == result.digest
        assert again.stages == result.stages

    def test_rejects(self, recognizer):
        with pytest.raises(UnsupportedStartError):
            dprm_pipeline(MMProg(2, (Inc(0),), 1), 1)
        with pytest.raises(ShapeError):
            dprm_pipeline(recognizer, 3)
