"""
Minsky machines over N-indexed registers, run against finite-support environments.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Mapping, Sequence, Tuple

from models.minsky import Inc, MMInstr
from models.outcome import Halted, OutOfFuel, RunOutcome
from utils.errors import DomainError

logger = logging.getLogger(__name__)


def env_normalize(env: Mapping[int, int]) -> Dict[int, int]:
    """Drop zero entries so equal environments compare equal."""
    return {r: v for r, v in env.items() if v}


@dataclass(frozen=True)
class MMNState:
    """PC value and a finite-support register environment (absent means 0)."""
    pc: int
    env: Tuple[Tuple[int, int], ...]

    @classmethod
    def of(cls, pc: int, env: Mapping[int, int]) -> "MMNState":
        return cls(pc, tuple(sorted(env_normalize(env).items())))

    def as_dict(self) -> Dict[int, int]:
        return dict(self.env)


def mmn_run(code: Sequence[MMInstr], start: int, pc: int, env: Mapping[int, int], fuel: int) -> RunOutcome:
    """
    Run code placed at PC start from (pc, env).

    Returns:
        Halted(MMNState, steps) once the PC leaves [start, start+len(code)),
        OutOfFuel(MMNState) otherwise
    """
    if start < 0:
        raise DomainError(f"code start must be natural, got {start}")
    regs = env_normalize(env)
    end = start + len(code)
    steps = 0
    while start <= pc < end:
        if steps == fuel:
            return OutOfFuel(MMNState.of(pc, regs))
        instr = code[pc - start]
        if isinstance(instr, Inc):
            regs[instr.reg] = regs.get(instr.reg, 0) + 1
            pc += 1
        elif regs.get(instr.reg, 0) > 0:
            regs[instr.reg] -= 1
            pc += 1
        else:
            pc = instr.jump
        steps += 1
    return Halted(MMNState.of(pc, regs), steps)
