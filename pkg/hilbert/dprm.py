"""
From a Minsky machine to one Diophantine equation.

The machine loses its self loops, becomes a FRACTRAN program, and the program
halting from the code of the initial state becomes a formula, then elementary
constraints, then a single equation whose variables are compacted and whose
parameters beyond the inputs are set to 0.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict

from compilers.deselfloop import mm_remove_self_loops
from compilers.mm_fractran import mm_to_fractran
from dio.elem import ElemRepr, form_to_elem
from dio.form import DioFunBuilder, DioRelBuilder
from dio.serialize import single_to_json
from dio.shapes import fun_cst, fun_mult
from dio.single import DioSingle, elem_to_single, finitize_vars, project_params, single_size
from hilbert.fractran_dio import fractran_halting_formula
from hilbert.godel import godel_exp_formula
from models.fractran import FractranProg
from models.minsky import MMProg
from numtheory.primes import prime_streams
from utils.digest import json_digest
from utils.errors import ShapeError, UnsupportedStartError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DprmResult:
    """
    The equation E over variables 0 .. nvars-1 and parameters 0 .. nparams-1.

    nu is recognized by the machine iff E has a solution at nu. stages holds
    the size of every intermediate artifact; the artifacts themselves are kept
    for inspection.
    """
    equation: DioSingle
    nvars: int
    nparams: int
    stages: Dict[str, int]
    digest: str
    machine: MMProg = field(repr=False, compare=False)
    fractran: FractranProg = field(repr=False, compare=False)
    formula: DioRelBuilder = field(repr=False, compare=False)
    elem: ElemRepr = field(repr=False, compare=False)


def initial_code_formula(n: int) -> DioFunBuilder:
    """nu -> code of the state at PC 1 with inputs nu in registers 1 .. n."""
    return DioFunBuilder(fun_mult(fun_cst(prime_streams().p_at(1)), godel_exp_formula(n)).form, n, "start")


def dprm_pipeline(prog: MMProg, n: int) -> DprmResult:
    """
    Args:
        prog: Machine starting at PC 1 whose first n registers are the inputs
        n: Number of inputs

    Raises:
        UnsupportedStartError: prog does not start at PC 1
        ShapeError: prog has fewer than n registers
    """
    if prog.start != 1:
        raise UnsupportedStartError(f"DPRM needs a machine starting at 1, got {prog.start}")
    if n > prog.n:
        raise ShapeError(f"{n} inputs for a machine with {prog.n} registers")
    machine = mm_remove_self_loops(prog)
    fractran = mm_to_fractran(machine)
    formula = fractran_halting_formula(fractran, initial_code_formula(n))
    elem = form_to_elem(formula.form)
    single = elem_to_single(elem.with_ref_zero())
    nvars, finite = finitize_vars(single)
    equation = project_params(finite, n)
    stages = {
        "mm_instructions": len(prog),
        "mm_loop_free_instructions": len(machine),
        "fractions": len(fractran),
        "formula_size": formula.size(),
        "elem_constraints": len(elem.constraints) + 1,
        "elem_width": elem.width,
        "single_size": single_size(equation),
        "variables": nvars,
    }
    for stage, size in stages.items():
        logger.info(f"dprm {stage}: {size}")
    digest = json_digest(single_to_json(equation))
    return DprmResult(equation, nvars, n, stages, digest, machine, fractran, formula, elem)
