"""
Minsky machines: INC / DEC-or-jump counter programs and their step semantics.
"""
import logging
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple, Union

from models.outcome import Halted, OutOfFuel, RunOutcome
from utils.errors import DomainError, ShapeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Inc:
    """INC reg: increment the register and the PC."""
    reg: int


@dataclass(frozen=True)
class Dec:
    """DEC reg jump: decrement and advance, or jump when the register is 0."""
    reg: int
    jump: int


MMInstr = Union[Inc, Dec]


@dataclass(frozen=True)
class MMProg:
    """
    Program (start, [i_0; ...; i_k]) over n registers.

    The instruction at PC value start + j is instrs[j].
    """
    start: int
    instrs: Tuple[MMInstr, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "instrs", tuple(self.instrs))
        if self.start < 0 or self.n < 0:
            raise DomainError(f"invalid machine header (start={self.start}, n={self.n})")
        for pc, instr in enumerate(self.instrs, self.start):
            if not 0 <= instr.reg < self.n:
                raise ShapeError(f"instruction at {pc} uses register {instr.reg} of {self.n}")
            if isinstance(instr, Dec) and instr.jump < 0:
                raise DomainError(f"instruction at {pc} jumps to {instr.jump}")

    def __len__(self) -> int:
        return len(self.instrs)

    def at(self, pc: int) -> Optional[MMInstr]:
        if mm_out_code(pc, self):
            return None
        return self.instrs[pc - self.start]

    def self_loops(self):
        """PC values i holding DEC a i."""
        return [
            pc for pc, instr in enumerate(self.instrs, self.start)
            if isinstance(instr, Dec) and instr.jump == pc
        ]


@dataclass(frozen=True)
class MMState:
    """PC value and register vector."""
    pc: int
    regs: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "regs", tuple(self.regs))

    @classmethod
    def initial(cls, inputs: Sequence[int], n: int, pc: int = 1) -> "MMState":
        """State at `pc` with the inputs in the first registers and zeros after."""
        if len(inputs) > n:
            raise ShapeError(f"{len(inputs)} inputs for a machine with {n} registers")
        return cls(pc, tuple(inputs) + (0,) * (n - len(inputs)))


def mm_out_code(i: int, prog: MMProg) -> bool:
    """True when PC value i lies outside the code of prog."""
    return i < prog.start or len(prog.instrs) + prog.start <= i


def mm_step(prog: MMProg, st: MMState) -> Optional[MMState]:
    """
    One computation step.

    Args:
        prog: The machine
        st: Current state, with exactly prog.n registers

    Returns:
        The successor state, or None when the PC is outside the code
    """
    if len(st.regs) != prog.n:
        raise ShapeError(f"state has {len(st.regs)} registers, machine expects {prog.n}")
    instr = prog.at(st.pc)
    if instr is None:
        return None
    regs = list(st.regs)
    if isinstance(instr, Inc):
        regs[instr.reg] += 1
        return MMState(st.pc + 1, tuple(regs))
    if regs[instr.reg] > 0:
        regs[instr.reg] -= 1
        return MMState(st.pc + 1, tuple(regs))
    return MMState(instr.jump, st.regs)


def mm_trace(prog: MMProg, st: MMState, fuel: int) -> Iterator[MMState]:
    """Yield the initial state and then each successor, at most fuel states in all."""
    for _ in range(fuel):
        yield st
        st = mm_step(prog, st)
        if st is None:
            return


def mm_run(prog: MMProg, st: MMState, fuel: int) -> RunOutcome:
    """
    Run at most fuel steps.

    Returns:
        Halted(final, steps) when a stuck state is reached, OutOfFuel(current) otherwise
    """
    steps = 0
    while True:
        nxt = mm_step(prog, st)
        if nxt is None:
            return Halted(st, steps)
        if steps == fuel:
            return OutOfFuel(st)
        st = nxt
        steps += 1


def mm0_halts(prog: MMProg, st: MMState, fuel: int) -> Optional[bool]:
    """
    Halting on zero: the run ends at PC 0 with every register 0.

    Returns:
        True or False once the run halts, None when fuel runs out
    """
    outcome = mm_run(prog, st, fuel)
    if isinstance(outcome, OutOfFuel):
        return None
    final = outcome.final
    return final.pc == 0 and not any(final.regs)
