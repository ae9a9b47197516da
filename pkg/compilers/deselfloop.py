"""
Removal of self loops (i: DEC a i) from Minsky machines.
"""
import logging
from typing import Tuple

from compilers.report import CompileReport
from models.minsky import Dec, Inc, MMProg
from utils.errors import UnsupportedStartError

logger = logging.getLogger(__name__)


def mm_remove_self_loops(prog: MMProg) -> MMProg:
    """
    Compile prog into an equivalent machine with one extra register and no self loops.

    Register 0 of the result is a spare that stays 0; source register a becomes 1+a.
    A self loop is redirected to a two-instruction cycle at the end of the code,
    jumps leaving the code go to PC 0, and falling off the end reaches DEC 0 0.

    Args:
        prog: Machine starting at PC 1

    Returns:
        Machine with 1+n registers, start 1 and len(prog)+3 instructions
    """
    if prog.start != 1:
        raise UnsupportedStartError(f"self-loop removal needs start 1, got {prog.start}")
    k = len(prog)
    out = []
    for i, instr in enumerate(prog.instrs, 1):
        if isinstance(instr, Inc):
            out.append(Inc(1 + instr.reg))
        elif instr.jump == i:
            out.append(Dec(1 + instr.reg, 2 + k))
        elif 1 <= instr.jump <= k:
            out.append(Dec(1 + instr.reg, instr.jump))
        else:
            out.append(Dec(1 + instr.reg, 0))
    out.extend([Dec(0, 0), Dec(0, 3 + k), Dec(0, 2 + k)])
    target = MMProg(1, tuple(out), 1 + prog.n)
    logger.debug(f"removed {len(prog.self_loops())} self loops from a {k}-instruction machine")
    return target


def deselfloop_with_report(prog: MMProg) -> Tuple[MMProg, CompileReport]:
    target = mm_remove_self_loops(prog)
    report = CompileReport("mm-deselfloop", len(prog), len(target), target.n, 1)
    return target, report
