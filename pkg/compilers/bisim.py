"""
Randomized cross-checks of the machine compilers against their sources.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

import config
from compilers.deselfloop import mm_remove_self_loops
from compilers.mm_fractran import godel_encode, mm_to_fractran
from models.fractran import fractran_step
from models.minsky import Dec, Inc, MMInstr, MMProg, MMState, mm_run, mm_step
from models.outcome import Halted

logger = logging.getLogger(__name__)


def random_mm(
    rng: np.random.Generator,
    max_instrs: int,
    max_regs: int,
    self_loop_rate: float = 0.0,
) -> MMProg:
    """
    Machine starting at PC 1 with 1 .. max_instrs instructions over 1 .. max_regs registers.

    Jumps land anywhere in 0 .. len+1; a jump to its own PC is drawn only with
    probability self_loop_rate and redrawn otherwise.
    """
    k = int(rng.integers(1, max_instrs + 1))
    n = int(rng.integers(1, max_regs + 1))
    instrs: List[MMInstr] = []
    for pc in range(1, k + 1):
        reg = int(rng.integers(n))
        if rng.random() < 0.5:
            instrs.append(Inc(reg))
            continue
        if rng.random() < self_loop_rate:
            jump = pc
        else:
            jump = int(rng.integers(k + 1))
            if jump >= pc:
                jump += 1
        instrs.append(Dec(reg, jump))
    return MMProg(1, tuple(instrs), n)


def random_inputs(rng: np.random.Generator, n: int, max_input: int) -> List[int]:
    return [int(x) for x in rng.integers(0, max_input + 1, size=n)]


@dataclass(frozen=True)
class Mismatch:
    """First step where two runs disagree."""
    step: int
    detail: str


def fractran_lockstep(prog: MMProg, inputs: Sequence[int], steps: int) -> Optional[Mismatch]:
    """
    Run prog and its FRACTRAN image side by side for at most steps steps.

    After every step the Goedel code of the machine state must equal the
    FRACTRAN state, and both must halt together.
    """
    fractran = mm_to_fractran(prog)
    st = MMState.initial(inputs, prog.n)
    x = godel_encode(st)
    for k in range(steps + 1):
        if godel_encode(st) != x:
            return Mismatch(k, f"state {st} encodes to {godel_encode(st)}, FRACTRAN is at {x}")
        if k == steps:
            break
        nst, nx = mm_step(prog, st), fractran_step(fractran, x)
        if (nst is None) != (nx is None):
            return Mismatch(k, "only one of the runs halted")
        if nst is None:
            break
        st, x = nst, nx
    return None


def deselfloop_agrees(prog: MMProg, inputs: Sequence[int], fuel: int, factor: Optional[int] = None) -> bool:
    """
    Halting of prog within fuel steps implies halting of the compiled machine
    within factor*fuel steps, and halting of the compiled machine within fuel
    steps implies halting of prog within fuel steps.
    """
    factor = factor or config.COMPILER["bisim_factor"]
    target = mm_remove_self_loops(prog)
    source_state = MMState.initial(inputs, prog.n)
    target_state = MMState.initial([0] + list(inputs), target.n)
    source_halts = isinstance(mm_run(prog, source_state, fuel), Halted)
    if source_halts and not isinstance(mm_run(target, target_state, factor * fuel), Halted):
        return False
    if isinstance(mm_run(target, target_state, fuel), Halted) and not source_halts:
        return False
    return True
