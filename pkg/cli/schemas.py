"""
Input document schemas for the command-line front end.

Models check the outer structure of every JSON input; the tagged trees inside
(formulas, polynomials, algorithms, terms) are decoded afterwards by the codecs,
which report their own paths.
"""
import json
import logging
from typing import Any, Dict, List, Optional, Tuple, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, PositiveInt, RootModel, ValidationError, field_validator

from utils.errors import ParseError

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)


class MMProgram(BaseModel):
    """{"start": 1, "regs": 2, "instrs": [{"INC": 0}, {"DEC": [0, 3]}]}"""
    model_config = ConfigDict(extra="forbid")

    start: NonNegativeInt = 1
    regs: NonNegativeInt
    instrs: List[Dict[str, Any]]

    @field_validator("instrs")
    @classmethod
    def check_instrs(cls, instrs: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
        for pos, item in enumerate(instrs):
            if len(item) != 1:
                raise ValueError(f"instruction {pos} must have exactly one key")
            (op, arg), = item.items()
            if op == "INC":
                ok = isinstance(arg, int) and not isinstance(arg, bool) and arg >= 0
            elif op == "DEC":
                ok = (
                    isinstance(arg, list) and len(arg) == 2
                    and all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in arg)
                )
            else:
                ok = False
            if not ok:
                raise ValueError(f"instruction {pos} must be {{'INC': reg}} or {{'DEC': [reg, jump]}}")
        return instrs


class FractranProgram(RootModel[List[Tuple[NonNegativeInt, NonNegativeInt]]]):
    """[[5, 7], [2, 1]]"""


class TaggedTree(RootModel[List[Any]]):
    """A tagged array such as ["comp", 2, f, [g, h]]; decoded by the codecs."""

    @field_validator("root")
    @classmethod
    def check_tag(cls, root: List[Any]) -> List[Any]:
        if not root or not isinstance(root[0], str):
            raise ValueError("expected a tagged array")
        return root


class SingleEquation(BaseModel):
    model_config = ConfigDict(extra="forbid")

    lhs: List[Any]
    rhs: List[Any]


class ElemDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    constraints: List[List[Any]]
    ref: NonNegativeInt
    start: NonNegativeInt = 0
    width: NonNegativeInt
    witnesses: List[NonNegativeInt] = Field(default_factory=list)


class IntPolynomial(BaseModel):
    """Integer polynomial with signed constants over variables 0 .. nvars-1."""
    model_config = ConfigDict(extra="forbid")

    poly: List[Any]
    nvars: NonNegativeInt


class DprmInput(BaseModel):
    model_config = ConfigDict(extra="forbid")

    machine: MMProgram
    inputs: NonNegativeInt


class Valuation(RootModel[List[NonNegativeInt]]):
    pass


class VerifySpec(BaseModel):
    """Sizes and seeds of the randomized cross-checks run by `verify`."""
    model_config = ConfigDict(extra="forbid")

    seed: int = 0
    samples: PositiveInt = 50
    max_instrs: PositiveInt = 8
    max_regs: PositiveInt = 3
    max_input: NonNegativeInt = 4
    steps: PositiveInt = 200
    fuel: PositiveInt = 1000
    max_size: PositiveInt = 6
    max_value: NonNegativeInt = 5
    bound: PositiveInt = 3
    shards: Optional[PositiveInt] = None


def _location(err: ValidationError) -> str:
    first = err.errors()[0]
    return "$" + "".join(f"[{part}]" if isinstance(part, int) else f".{part}" for part in first["loc"])


def parse_json(text: str) -> Any:
    """
    Raises:
        ParseError: text is not JSON; the position is the line and column
    """
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", f"line {e.lineno} column {e.colno}")


def validate(model: Type[M], doc: Any) -> M:
    """
    Raises:
        ParseError: doc does not match model; the position is the schema path
    """
    try:
        return model.model_validate(doc)
    except ValidationError as e:
        raise ParseError(e.errors()[0]["msg"], _location(e))
