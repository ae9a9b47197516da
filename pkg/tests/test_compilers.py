import pytest

from compilers.bisim import deselfloop_agrees, fractran_lockstep, random_inputs, random_mm
from compilers.deselfloop import deselfloop_with_report, mm_remove_self_loops
from compilers.mm_env import MMNState, mmn_run
from compilers.mm_fractran import godel_encode, mm_to_fractran, mm_to_fractran_with_report
from compilers.ra_mm import finitize_registers, ra_compiled_holds, ra_mm_simulator, ra_to_mm
from models.fractran import FractranProg
from models.minsky import Dec, Inc, MMProg, MMState, mm_run
from models.outcome import Halted, OutOfFuel
from models.recalg import Cst, Min, Proj, Succ, ra_eval
from murec.gadgets import compose, ra_add, ra_is_zero, ra_mult, ra_tsub
from utils.errors import CompilerConstraintError, SelfLoopError, UnsupportedStartError


def tuples(arity: int, top: int):
    if arity == 0:
        yield ()
        return
    for head in range(top + 1):
        for rest in tuples(arity - 1, top):
            yield (head,) + rest


class TestDeselfloop:
    def test_layout(self, recognizer):
        target, report = deselfloop_with_report(recognizer)
        assert target.instrs == (Dec(1, 3), Dec(2, 5), Inc(2), Dec(0, 0), Dec(0, 6), Dec(0, 5))
        assert target.n == 3
        assert target.self_loops() == []
        assert report.to_json() == {
            "compiler": "mm-deselfloop",
            "source_size": 3,
            "target_size": 6,
            "registers": 3,
            "spare_registers": 1,
        }

    def test_empty_program_halts_immediately(self):
        target = mm_remove_self_loops(MMProg(1, (), 1))
        assert len(target) == 3
        assert mm_run(target, MMState.initial([0, 4], 2), 10) == Halted(MMState(0, (0, 4)), 1)

    def test_recognizer_behaviour_kept(self, recognizer):
        target = mm_remove_self_loops(recognizer)
        assert isinstance(mm_run(target, MMState.initial([0, 0], 3), 100), Halted)
        assert isinstance(mm_run(target, MMState.initial([0, 1], 3), 1000), OutOfFuel)

    def test_needs_start_one(self):
        with pytest.raises(UnsupportedStartError):
            mm_remove_self_loops(MMProg(2, (Inc(0),), 1))

    def test_random_programs_agree(self, rng):
        for _ in range(200):
            prog = random_mm(rng, 8, 3, self_loop_rate=0.3)
            inputs = random_inputs(rng, prog.n, 4)
            assert deselfloop_agrees(prog, inputs, 1000), (prog, inputs)


class TestFractranCompiler:
    def test_godel_encode(self):
        assert godel_encode(MMState(1, (2, 0, 1))) == 5 * 3**2 * 13
        assert godel_encode(MMState(0, ())) == 2

    def test_single_increment(self):
        assert mm_to_fractran(MMProg(1, (Inc(0),), 1)) == FractranProg(((11 * 3, 5),))

    def test_empty_program(self):
        target, report = mm_to_fractran_with_report(MMProg(1, (), 2))
        assert len(target) == 0
        assert report.target_size == 0 and report.registers == 2

    def test_rejects_self_loops(self, recognizer):
        with pytest.raises(SelfLoopError):
            mm_to_fractran(recognizer)

    def test_rejects_other_starts(self):
        with pytest.raises(UnsupportedStartError):
            mm_to_fractran(MMProg(0, (Inc(0),), 1))

    def test_deselflooped_recognizer_compiles(self, recognizer):
        target = mm_remove_self_loops(recognizer)
        assert fractran_lockstep(target, [0, 0, 0], 200) is None
        assert fractran_lockstep(target, [0, 2, 0], 200) is None

    def test_lockstep_random(self, rng):
        for _ in range(300):
            prog = random_mm(rng, 8, 3)
            inputs = random_inputs(rng, prog.n, 4)
            assert fractran_lockstep(prog, inputs, 200) is None, (prog, inputs)


def catalog():
    # f(x, y) = y - x truncated: the least x with f = 0 is y
    countdown = compose(ra_tsub(), Proj(2, 1), Proj(2, 0))
    return [
        pytest.param(Cst(3), id="const"),
        pytest.param(Succ(), id="succ"),
        pytest.param(Proj(3, 1), id="proj"),
        pytest.param(ra_add(), id="add"),
        pytest.param(ra_mult(), id="mult"),
        pytest.param(ra_tsub(), id="tsub"),
        pytest.param(ra_is_zero(), id="is_zero"),
        pytest.param(Min(countdown), id="min"),
    ]


class TestRecAlgCompiler:
    @pytest.mark.parametrize("f", catalog())
    def test_catalog_matches_evaluator(self, f):
        k = f.arity
        n, prog = ra_mm_simulator(f)
        assert prog.n == k + 1 + n
        for v in tuples(k, 5 if k < 3 else 3):
            expected = ra_eval(f, v, 500)
            assert expected is not None
            outcome = mm_run(prog, MMState.initial(list(v), prog.n), 10**6)
            assert isinstance(outcome, Halted), v
            want = v + (expected,) + (0,) * n
            assert outcome.final.regs == want, v

    def test_diverging_min(self):
        f = Min(compose(Succ(), Proj(2, 0)))
        _, prog = ra_mm_simulator(f)
        for x in range(3):
            assert isinstance(mm_run(prog, MMState.initial([x], prog.n), 10**4), OutOfFuel)

    def test_layout_constraints(self):
        with pytest.raises(CompilerConstraintError):
            ra_to_mm(ra_add(), 1, 0, 1, 3)
        with pytest.raises(CompilerConstraintError):
            ra_to_mm(ra_add(), 1, 0, 2, 2)

    def test_relocated_code(self, rng):
        code = ra_to_mm(ra_add(), 5, 2, 0, 6)
        assert finitize_registers(code, 2) > 4
        for v in ([0, 0], [2, 3], [4, 1]):
            assert ra_compiled_holds(ra_add(), code, 5, 2, 0, 6, v, 10**5, 500, rng) is True

    def test_relocated_subtraction(self, rng):
        code = ra_to_mm(ra_tsub(), 3, 1, 0, 4)
        for v in ([5, 2], [2, 5], [3, 3]):
            assert ra_compiled_holds(ra_tsub(), code, 3, 1, 0, 4, v, 10**5, 500, rng) is True

    def test_env_runner(self):
        code = [Dec(0, 3), Inc(1)]
        assert mmn_run(code, 1, 1, {0: 1}, 10) == Halted(MMNState.of(3, {1: 1}), 2)
        assert mmn_run(code, 1, 1, {}, 10) == Halted(MMNState.of(3, {}), 1)
        assert isinstance(mmn_run([Dec(0, 1)], 1, 1, {}, 5), OutOfFuel)
