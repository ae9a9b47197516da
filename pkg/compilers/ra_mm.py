"""
Compilation of recursive algorithms into Minsky machines over N-indexed registers.

Layout contract of ra_to_mm(f, i, p, o, m): the code sits at PC i, reads the
k inputs from registers p..p+k-1, leaves the result in o and returns every other
register to its initial value. Registers from m upwards are zero on entry and are
used as scratch; register m itself is never written and serves as the constant 0
behind unconditional jumps.
"""
import logging
import numpy as np
from typing import List, Optional, Sequence, Tuple

from compilers.mm_env import MMNState, mmn_run
from compilers.report import CompileReport
from models.minsky import Dec, Inc, MMInstr, MMProg
from models.outcome import Halted
from models.recalg import Comp, Cst, Min, Proj, RecAlg, Rec, Succ, Zero, ra_eval
from utils.errors import CompilerConstraintError, ShapeError

logger = logging.getLogger(__name__)


class _Code:
    """Instruction buffer with absolute PC values and forward-jump patching."""

    def __init__(self, start: int, zero: int):
        self.start = start
        self.zero = zero
        self.instrs: List[MMInstr] = []

    @property
    def pc(self) -> int:
        return self.start + len(self.instrs)

    def emit(self, instr: MMInstr) -> int:
        self.instrs.append(instr)
        return self.pc - 1

    def patch(self, at: int, instr: MMInstr):
        self.instrs[at - self.start] = instr

    def jump(self, target: int):
        self.emit(Dec(self.zero, target))

    def clear(self, r: int):
        s = self.pc
        self.emit(Dec(r, s + 2))
        self.jump(s)

    def move(self, src: int, dst: int):
        """dst += src; src := 0."""
        s = self.pc
        self.emit(Dec(src, s + 3))
        self.emit(Inc(dst))
        self.jump(s)

    def copy(self, src: int, dst: int, tmp: int):
        """dst += src through the zero register tmp; src is restored."""
        s = self.pc
        self.emit(Dec(src, s + 4))
        self.emit(Inc(dst))
        self.emit(Inc(tmp))
        self.jump(s)
        self.move(tmp, src)


def ra_to_mm(f: RecAlg, i: int, p: int, o: int, m: int) -> List[MMInstr]:
    """
    Compile f into code at PC i reading inputs at p and writing o.

    Args:
        f: Algorithm of arity k
        i: First PC of the code
        p: First input register
        o: Output register
        m: First scratch register

    Returns:
        Instructions; running them from PC i reaches PC i+len exactly when f terminates

    Raises:
        CompilerConstraintError: unless o < m, o outside [p, p+k) and p+k <= m
    """
    k = f.arity
    if not (o < m and not p <= o < p + k and p + k <= m):
        raise CompilerConstraintError(f"invalid layout i={i} p={p} o={o} m={m} for arity {k}")
    code = _Code(i, m)
    _compile(f, code, p, o, m)
    return code.instrs


def _compile(f: RecAlg, code: _Code, p: int, o: int, m: int):
    if isinstance(f, Cst):
        code.clear(o)
        for _ in range(f.n):
            code.emit(Inc(o))
    elif isinstance(f, Zero):
        code.clear(o)
    elif isinstance(f, Succ):
        code.clear(o)
        code.copy(p, o, m + 1)
        code.emit(Inc(o))
    elif isinstance(f, Proj):
        code.clear(o)
        code.copy(p + f.p, o, m + 1)
    elif isinstance(f, Comp):
        width = len(f.gs)
        sub = m + 1 + width
        for j, g in enumerate(f.gs):
            _sub_compile(g, code, p, m + 1 + j, sub)
        _sub_compile(f.f, code, m + 1, o, sub)
        for j in range(width):
            code.clear(m + 1 + j)
    elif isinstance(f, Rec):
        _compile_rec(f, code, p, o, m)
    elif isinstance(f, Min):
        _compile_min(f, code, p, o, m)
    else:
        raise ShapeError(f"unknown recursive algorithm node {f!r}")


def _sub_compile(f: RecAlg, code: _Code, p: int, o: int, m: int):
    outer_zero = code.zero
    code.zero = m
    _compile(f, code, p, o, m)
    code.zero = outer_zero


def _compile_rec(f: Rec, code: _Code, p: int, o: int, m: int):
    k = f.f.arity
    counter = m + 1
    acc = counter + 1
    saved = [counter + 2 + j for j in range(k)]
    steps = counter + 2 + k
    result = counter + 3 + k
    tmp = counter + 4 + k
    sub = counter + 5 + k
    for j in range(k):
        code.copy(p + 1 + j, saved[j], tmp)
    _sub_compile(f.f, code, p + 1, acc, sub)
    code.copy(p, steps, tmp)
    loop = code.pc
    exit_at = code.emit(Dec(steps, -1))
    # g reads (counter, acc, saved...) which are contiguous
    _sub_compile(f.g, code, counter, result, sub)
    code.clear(acc)
    code.move(result, acc)
    code.emit(Inc(counter))
    code.jump(loop)
    code.patch(exit_at, Dec(steps, code.pc))
    code.clear(o)
    code.move(acc, o)
    code.clear(counter)
    for r in saved:
        code.clear(r)


def _compile_min(f: Min, code: _Code, p: int, o: int, m: int):
    k = f.arity
    candidate = m + 1
    saved = [candidate + 1 + j for j in range(k)]
    result = candidate + 1 + k
    tmp = candidate + 2 + k
    sub = candidate + 3 + k
    for j in range(k):
        code.copy(p + j, saved[j], tmp)
    loop = code.pc
    _sub_compile(f.f, code, candidate, result, sub)
    found_at = code.emit(Dec(result, -1))
    code.clear(result)
    code.emit(Inc(candidate))
    code.jump(loop)
    code.patch(found_at, Dec(result, code.pc))
    code.clear(o)
    code.move(candidate, o)
    for r in saved:
        code.clear(r)


def max_register(code: Sequence[MMInstr]) -> int:
    return max((instr.reg for instr in code), default=-1)


def finitize_registers(code: Sequence[MMInstr], k: int) -> int:
    """Least n with every register of code below k+1+n."""
    return max(0, max_register(code) - k)


def ra_mm_simulator(f: RecAlg) -> Tuple[int, MMProg]:
    """
    Minsky machine with k+1+n registers that terminates from (1, v ++ 0) iff f(v) is defined.

    The result ends up in register k.
    """
    k = f.arity
    code = ra_to_mm(f, 1, 0, k, 1 + k)
    n = finitize_registers(code, k)
    prog = MMProg(1, tuple(code), k + 1 + n)
    logger.info(f"compiled a {f.size()}-node algorithm into {len(code)} instructions over {prog.n} registers")
    return n, prog


def ra_mm_with_report(f: RecAlg) -> Tuple[MMProg, CompileReport]:
    n, prog = ra_mm_simulator(f)
    return prog, CompileReport("murec-to-mm", f.size(), len(prog), prog.n, n)


def ra_compiled_holds(
    f: RecAlg,
    code: Sequence[MMInstr],
    i: int,
    p: int,
    o: int,
    m: int,
    v: Sequence[int],
    fuel: int,
    eval_fuel: int,
    rng: Optional[np.random.Generator] = None,
) -> Optional[bool]:
    """
    Check the compilation contract on one input.

    Registers below m other than the inputs get arbitrary values. When f(v) is
    defined within eval_fuel the code must reach PC i+len(code) within fuel with
    only o changed to the result; when it is not, the code must not halt within fuel.

    Returns:
        True or False, or None when neither evaluator decides within its budget
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    env = {r: int(rng.integers(4)) for r in range(m) if not p <= r < p + len(v)}
    for j, x in enumerate(v):
        env[p + j] = x
    expected = ra_eval(f, v, eval_fuel)
    outcome = mmn_run(code, i, i, env, fuel)
    if isinstance(outcome, Halted):
        if expected is None:
            return None
        want = dict(env)
        want[o] = expected
        return outcome.final == MMNState.of(i + len(code), want)
    return False if expected is not None else None

