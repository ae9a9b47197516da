"""
Compilation of self-loop-free Minsky machines into regular FRACTRAN programs
and the Goedel encoding of machine states.
"""
import logging
from typing import Tuple

import gmpy2

from compilers.report import CompileReport
from models.fractran import FractranProg
from models.minsky import Inc, MMProg, MMState
from numtheory.primes import prime_streams
from utils.errors import SelfLoopError, UnsupportedStartError

logger = logging.getLogger(__name__)


def godel_encode(state: MMState) -> int:
    """p_pc * q_0^v_0 * ... * q_{n-1}^v_{n-1}."""
    streams = prime_streams()
    code = gmpy2.mpz(streams.p_at(state.pc))
    for j, v in enumerate(state.regs):
        if v:
            code *= gmpy2.mpz(streams.q_at(j)) ** v
    return int(code)


def mm_to_fractran(prog: MMProg) -> FractranProg:
    """
    Encode every instruction as one or two fractions, in program order.

        i: INC a    ->  p_{i+1} q_a / p_i
        i: DEC a j  ->  p_{i+1} / (p_i q_a),  p_j / p_i

    Raises:
        UnsupportedStartError: prog does not start at PC 1
        SelfLoopError: prog contains i: DEC a i
    """
    if prog.start != 1:
        raise UnsupportedStartError(f"FRACTRAN compilation needs start 1, got {prog.start}")
    loops = prog.self_loops()
    if loops:
        raise SelfLoopError(f"self loops at PC {loops}; remove them first")
    streams = prime_streams()
    p, q = streams.p_at, streams.q_at
    fractions = []
    for i, instr in enumerate(prog.instrs, prog.start):
        if isinstance(instr, Inc):
            fractions.append((p(i + 1) * q(instr.reg), p(i)))
        else:
            fractions.append((p(i + 1), p(i) * q(instr.reg)))
            fractions.append((p(instr.jump), p(i)))
    logger.debug(f"compiled {len(prog)} instructions into {len(fractions)} fractions")
    return FractranProg(tuple(fractions))


def mm_to_fractran_with_report(prog: MMProg) -> Tuple[FractranProg, CompileReport]:
    target = mm_to_fractran(prog)
    return target, CompileReport("mm-to-fractran", len(prog), len(target), prog.n, 0)
