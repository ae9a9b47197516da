"""
FRACTRAN programs: lists of fractions acting on a single natural.
"""
import logging
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

from models.outcome import Halted, OutOfFuel, RunOutcome
from utils.errors import DomainError, RegularityError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FractranProg:
    """Ordered fractions num/den."""
    fractions: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        fractions = tuple((int(p), int(q)) for p, q in self.fractions)
        for p, q in fractions:
            if p < 0 or q < 0:
                raise DomainError(f"fraction {p}/{q} has a negative entry")
        object.__setattr__(self, "fractions", fractions)

    def __len__(self) -> int:
        return len(self.fractions)

    @property
    def regular(self) -> bool:
        return all(q != 0 for _, q in self.fractions)

    def require_regular(self):
        if not self.regular:
            raise RegularityError("FRACTRAN program has a zero denominator")


def fractran_step(prog: FractranProg, x: int) -> Optional[int]:
    """
    Apply the first fraction p/q with q | p*x.

    Returns:
        p*x/q, or None when no fraction applies
    """
    prog.require_regular()
    for p, q in prog.fractions:
        px = p * x
        if px % q == 0:
            return px // q
    return None


def fractran_trace(prog: FractranProg, x: int, fuel: int) -> Iterator[int]:
    """Yield x and then its successors, at most fuel states in all."""
    prog.require_regular()
    for _ in range(fuel):
        yield x
        x = fractran_step(prog, x)
        if x is None:
            return


def fractran_run(prog: FractranProg, x: int, fuel: int) -> RunOutcome:
    """Iterate fractran_step at most fuel times."""
    prog.require_regular()
    steps = 0
    while True:
        nxt = fractran_step(prog, x)
        if nxt is None:
            return Halted(x, steps)
        if steps == fuel:
            return OutOfFuel(x)
        x = nxt
        steps += 1
