"""
Command handlers of the command-line front end.

Each handler takes the parsed arguments as a dictionary and returns a result
dictionary with success, exit_code and, on failure, error. Exit codes: 0 done or
verified, 1 property violated, 2 usage or input error, 3 fuel or bound exhausted.
"""
import abc
import logging
from typing import Any, Dict, List, Optional

import numpy as np

import config
from cli.commands import parse_nat_list, read_text, write_text
from cli.schemas import (
    DprmInput,
    ElemDocument,
    FractranProgram,
    IntPolynomial,
    MMProgram,
    SingleEquation,
    TaggedTree,
    Valuation,
    VerifySpec,
    parse_json,
    validate,
)
from compilers.bisim import deselfloop_agrees, fractran_lockstep, random_inputs, random_mm
from compilers.deselfloop import deselfloop_with_report
from compilers.mm_fractran import mm_to_fractran_with_report
from compilers.ra_mm import ra_mm_with_report
from dio.elem import form_to_elem
from dio.form import df_size
from dio.oracle import chain_check, random_form
from dio.serialize import (
    cstrs_from_json,
    dumps,
    elem_from_json,
    elem_to_json,
    form_from_json,
    form_to_json,
    poly_from_json,
    poly_to_json,
    single_from_json,
    single_to_json,
)
from dio.single import elem_to_single, finitize_vars, single_size, single_vars
from hilbert.dprm import dprm_pipeline
from hilbert.fractran_dio import fractran_step_formula, fractran_stop_formula
from hilbert.h10z import H10ZPoly, h10_to_h10z, h10z_solve
from models.codec import (
    fractran_from_json,
    fractran_to_json,
    lterm_from_json,
    lterm_to_json,
    mm_from_json,
    mm_state_to_json,
    mm_to_json,
    recalg_from_json,
    recalg_to_json,
)
from models.fractran import fractran_run, fractran_trace
from models.lterm import App, l_eval, scott_decode_nat, scott_encode_nat
from models.minsky import MMState, mm_run, mm_trace
from models.outcome import Halted, OutOfFuel
from models.recalg import ra_eval
from murec.poly import ra_find
from solver.search import found, sat_cstrs, sat_single
from utils.errors import H10Error

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_EXHAUSTED = 0, 1, 2, 3

# Registry of command handlers
COMMAND_HANDLERS = {}


class CommandHandler(abc.ABC):
    """Base class for command handlers."""

    @classmethod
    def register(cls, command: str):
        """
        Register a handler for a subcommand.

        Args:
            command: The subcommand name
        """
        def decorator(handler_class):
            COMMAND_HANDLERS[command] = handler_class()
            return handler_class
        return decorator

    def handle(self, parameters: Dict[str, Any]) -> Dict[str, Any]:
        """
        Run the command, turning toolkit errors into usage failures.

        Args:
            parameters: Parsed command-line arguments

        Returns:
            Result of the command
        """
        try:
            return self.execute(parameters)
        except H10Error as e:
            logger.error(f"{type(e).__name__}: {e}")
            return {"success": False, "error": str(e), "exit_code": EXIT_USAGE}

    @abc.abstractmethod
    def execute(self, parameters: Dict[str, Any]) -> Dict[str, Any]:
        pass


def get_handler_for_command(command: str) -> Optional[CommandHandler]:
    return COMMAND_HANDLERS.get(command)


def _load(path: str) -> Any:
    return parse_json(read_text(path))


def _done(exit_code: int = EXIT_OK, **data) -> Dict[str, Any]:
    return {"success": exit_code == EXIT_OK, "exit_code": exit_code, "data": data}


def _write_report(path: Optional[str], report: Dict[str, Any]):
    if path:
        write_text(path, dumps(report))


@CommandHandler.register("run")
class RunHandler(CommandHandler):
    """Handler for `run mm|fractran|murec|lterm`."""

    def execute(self, parameters: Dict[str, Any]) -> Dict[str, Any]:
        model = parameters["model"]
        fuel = parameters.get("fuel") or config.FUEL[model]
        inputs = parse_nat_list(parameters.get("input") or "")
        doc = _load(parameters["program"])
        trace = parameters.get("trace", False)
        if trace and model not in ("mm", "fractran"):
            return {"success": False, "error": f"--trace is not available for {model}", "exit_code": EXIT_USAGE}
        logger.info(f"Running {model} program with fuel {fuel}")
        return getattr(self, f"_run_{model}")(doc, inputs, fuel, trace)

    def _run_mm(self, doc, inputs: List[int], fuel: int, trace: bool) -> Dict[str, Any]:
        prog = mm_from_json(validate(MMProgram, doc).model_dump())
        st = MMState.initial(inputs, prog.n, prog.start)
        if trace:
            write_text("-", "\n".join(dumps(mm_state_to_json(s)) for s in mm_trace(prog, st, fuel)))
        return self._outcome(mm_run(prog, st, fuel), mm_state_to_json, trace)

    def _run_fractran(self, doc, inputs: List[int], fuel: int, trace: bool) -> Dict[str, Any]:
        prog = fractran_from_json(validate(FractranProgram, doc).root)
        if len(inputs) != 1:
            return {"success": False, "error": "FRACTRAN takes exactly one input", "exit_code": EXIT_USAGE}
        if trace:
            write_text("-", "\n".join(str(x) for x in fractran_trace(prog, inputs[0], fuel)))
        return self._outcome(fractran_run(prog, inputs[0], fuel), lambda x: x, trace)

    def _run_murec(self, doc, inputs: List[int], fuel: int, trace: bool) -> Dict[str, Any]:
        f = recalg_from_json(validate(TaggedTree, doc).root)
        value = ra_eval(f, inputs, fuel)
        if value is None:
            write_text("-", dumps({"out_of_fuel": True}))
            return _done(EXIT_EXHAUSTED)
        write_text("-", dumps({"value": value}))
        return _done(value=value)

    def _run_lterm(self, doc, inputs: List[int], fuel: int, trace: bool) -> Dict[str, Any]:
        term = lterm_from_json(validate(TaggedTree, doc).root)
        for x in inputs:
            term = App(term, scott_encode_nat(x))
        outcome = l_eval(term, fuel)
        if isinstance(outcome, Halted):
            result = {"value": lterm_to_json(outcome.final), "nat": scott_decode_nat(outcome.final), "steps": outcome.steps}
            write_text("-", dumps(result))
            return _done(**result)
        if isinstance(outcome, OutOfFuel):
            write_text("-", dumps({"out_of_fuel": True}))
            return _done(EXIT_EXHAUSTED)
        write_text("-", dumps({"stuck": lterm_to_json(outcome.current)}))
        return _done(EXIT_VIOLATION)

    @staticmethod
    def _outcome(outcome, to_json, trace: bool) -> Dict[str, Any]:
        if isinstance(outcome, Halted):
            result = {"halted": True, "state": to_json(outcome.final), "steps": outcome.steps}
            if not trace:
                write_text("-", dumps(result))
            return _done(**result)
        if not trace:
            write_text("-", dumps({"out_of_fuel": True, "state": to_json(outcome.current)}))
        logger.info("Run ended without halting")
        return _done(EXIT_EXHAUSTED)


@CommandHandler.register("compile")
class CompileHandler(CommandHandler):
    """Handler for `compile mm-deselfloop|mm-to-fractran|murec-to-mm`."""

    def execute(self, parameters: Dict[str, Any]) -> Dict[str, Any]:
        compiler = parameters["compiler"]
        doc = _load(parameters["input_file"])
        if compiler == "murec-to-mm":
            target, report = ra_mm_with_report(recalg_from_json(validate(TaggedTree, doc).root))
            out = mm_to_json(target)
        else:
            prog = mm_from_json(validate(MMProgram, doc).model_dump())
            if compiler == "mm-deselfloop":
                target, report = deselfloop_with_report(prog)
                out = mm_to_json(target)
            else:
                target, report = mm_to_fractran_with_report(prog)
                out = fractran_to_json(target)
        logger.info(f"{compiler}: {report.source_size} -> {report.target_size}")
        write_text(parameters.get("output_file") or "-", dumps(out))
        _write_report(parameters.get("report"), report.to_json())
        return _done(**report.to_json())


@CommandHandler.register("reduce")
class ReduceHandler(CommandHandler):
    """Handler for the reduction steps of `reduce`."""

    def execute(self, parameters: Dict[str, Any]) -> Dict[str, Any]:
        reduction = parameters["reduction"]
        doc = _load(parameters["input_file"])
        out, report = getattr(self, "_" + reduction.replace("-", "_"))(doc)
        report = {"reduction": reduction, **report}
        logger.info(f"{reduction}: {report}")
        write_text(parameters.get("output_file") or "-", dumps(out))
        _write_report(parameters.get("report"), report)
        return _done(**report)

    def _form_to_elem(self, doc):
        a = form_from_json(validate(TaggedTree, doc).root)
        rep = form_to_elem(a)
        return elem_to_json(rep), {"formula_size": df_size(a), "constraints": len(rep.constraints) + 1, "width": rep.width}

    def _elem_to_single(self, doc):
        validate(ElemDocument, doc)
        rep = elem_from_json(doc)
        e = elem_to_single(rep.with_ref_zero())
        return single_to_json(e), {"constraints": len(rep.constraints) + 1, "single_size": single_size(e)}

    def _finitize(self, doc):
        validate(SingleEquation, doc)
        n, e = finitize_vars(single_from_json(doc))
        return single_to_json(e), {"variables": n}

    def _fractran_to_dio(self, doc):
        prog = fractran_from_json(validate(FractranProgram, doc).root)
        step, stop = fractran_step_formula(prog), fractran_stop_formula(prog)
        out = {"step": form_to_json(step.form), "stop": form_to_json(stop.form)}
        return out, {"fractions": len(prog), "step_size": step.size(), "stop_size": stop.size()}

    def _dprm(self, doc):
        spec = validate(DprmInput, doc)
        result = dprm_pipeline(mm_from_json(spec.machine.model_dump()), spec.inputs)
        out = {"equation": single_to_json(result.equation), "nparams": result.nparams, "nvars": result.nvars}
        return out, {"stages": result.stages, "digest": result.digest}

    def _h10_to_h10z(self, doc):
        validate(SingleEquation, doc)
        e = single_from_json(doc)
        p = h10_to_h10z(e, max(single_vars(e), default=-1) + 1)
        return {"poly": poly_to_json(p.poly), "nvars": p.nvars}, {"nvars": p.nvars}

    def _h10_to_murec(self, doc):
        validate(SingleEquation, doc)
        f = ra_find(single_from_json(doc))
        return recalg_to_json(f), {"arity": f.arity, "size": f.size()}


@CommandHandler.register("solve")
class SolveHandler(CommandHandler):
    """Handler for `solve cstrs|single|h10z`."""

    def execute(self, parameters: Dict[str, Any]) -> Dict[str, Any]:
        problem = parameters["problem"]
        bound = parameters.get("bound") or config.SOLVER["bound"]
        shards = parameters.get("shards")
        doc = _load(parameters["input_file"])
        nu: List[int] = []
        if parameters.get("valuation"):
            nu = validate(Valuation, _load(parameters["valuation"])).root
        logger.info(f"Solving {problem} up to {bound}")
        if problem == "cstrs":
            result = sat_cstrs(cstrs_from_json(doc), nu, bound, shards=shards)
            witness = None if not found(result) else {str(u): v for u, v in sorted(result.items())}
        elif problem == "single":
            validate(SingleEquation, doc)
            result = sat_single(single_from_json(doc), nu, bound, shards)
            witness = None if not found(result) else {str(u): v for u, v in sorted(result.items())}
        else:
            spec = validate(IntPolynomial, doc)
            result = h10z_solve(H10ZPoly(poly_from_json(spec.poly, signed=True), spec.nvars), bound, shards)
            witness = result if found(result) else None
        if witness is None:
            write_text("-", dumps({"none_up_to": bound}))
            return _done(EXIT_EXHAUSTED)
        write_text("-", dumps({"witness": witness}))
        return _done(witness=witness)


@CommandHandler.register("verify")
class VerifyHandler(CommandHandler):
    """Handler for `verify bisim|oracle`."""

    def execute(self, parameters: Dict[str, Any]) -> Dict[str, Any]:
        spec = validate(VerifySpec, _load(parameters["spec"]) if parameters.get("spec") else {})
        rng = np.random.default_rng(spec.seed)
        check = parameters["check"]
        logger.info(f"Verifying {check} on {spec.samples} samples with seed {spec.seed}")
        failures = self._bisim(spec, rng) if check == "bisim" else self._oracle(spec, rng)
        summary = {"check": check, "samples": spec.samples, "failures": failures}
        write_text("-", dumps(summary))
        if failures:
            logger.warning(f"{len(failures)} failing samples")
            return {"success": False, "exit_code": EXIT_VIOLATION, "data": summary}
        return _done(**summary)

    @staticmethod
    def _bisim(spec: VerifySpec, rng: np.random.Generator) -> List[Dict[str, Any]]:
        failures = []
        for sample in range(spec.samples):
            prog = random_mm(rng, spec.max_instrs, spec.max_regs)
            inputs = random_inputs(rng, prog.n, spec.max_input)
            mismatch = fractran_lockstep(prog, inputs, spec.steps)
            if mismatch is not None:
                failures.append({"sample": sample, "kind": "fractran", "step": mismatch.step, "detail": mismatch.detail})
            looped = random_mm(rng, spec.max_instrs, spec.max_regs, self_loop_rate=0.3)
            inputs = random_inputs(rng, looped.n, spec.max_input)
            if not deselfloop_agrees(looped, inputs, spec.fuel):
                failures.append({"sample": sample, "kind": "deselfloop", "program": mm_to_json(looped), "inputs": inputs})
        return failures

    @staticmethod
    def _oracle(spec: VerifySpec, rng: np.random.Generator) -> List[Dict[str, Any]]:
        failures = []
        for sample in range(spec.samples):
            nfree = int(rng.integers(1, 3))
            a = random_form(rng, int(rng.integers(1, spec.max_size + 1)), nfree)
            nu = random_inputs(rng, nfree, spec.max_value)
            verdict = chain_check(a, nu, spec.bound, spec.shards)
            if not verdict.consistent:
                failures.append({"sample": sample, "formula": form_to_json(a), "valuation": nu})
        return failures
