"""
Fuel-bounded execution results shared by every interpreter.
"""
from dataclasses import dataclass
from typing import Generic, TypeVar, Union

S = TypeVar("S")


@dataclass(frozen=True)
class Halted(Generic[S]):
    """The run reached a state with no successor after `steps` steps."""
    final: S
    steps: int


@dataclass(frozen=True)
class OutOfFuel(Generic[S]):
    """The budget ran out; `current` is the state reached."""
    current: S


@dataclass(frozen=True)
class Stuck(Generic[S]):
    """Evaluation cannot proceed and the state is not a value."""
    current: S


RunOutcome = Union[Halted, OutOfFuel, Stuck]
