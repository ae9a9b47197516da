"""
JSON codecs for the computation models.

Documents are plain lists/dicts; cli.schemas validates raw input before these
decoders run, so decoders only translate and report unknown tags.
"""
import logging
from typing import Any, Dict, List

from models.fractran import FractranProg
from models.lterm import App, Lam, LTerm, Var
from models.minsky import Dec, Inc, MMProg, MMState
from models.recalg import Comp, Cst, Min, Proj, RecAlg, Rec, Succ, Zero
from utils.errors import ParseError

logger = logging.getLogger(__name__)


def mm_to_json(prog: MMProg) -> Dict[str, Any]:
    instrs = []
    for instr in prog.instrs:
        if isinstance(instr, Inc):
            instrs.append({"INC": instr.reg})
        else:
            instrs.append({"DEC": [instr.reg, instr.jump]})
    return {"start": prog.start, "regs": prog.n, "instrs": instrs}


def mm_from_json(doc: Dict[str, Any]) -> MMProg:
    instrs = []
    for pos, item in enumerate(doc["instrs"]):
        if "INC" in item:
            instrs.append(Inc(int(item["INC"])))
        elif "DEC" in item:
            reg, jump = item["DEC"]
            instrs.append(Dec(int(reg), int(jump)))
        else:
            raise ParseError("instruction is neither INC nor DEC", f"instrs.{pos}")
    return MMProg(int(doc.get("start", 1)), tuple(instrs), int(doc["regs"]))


def mm_state_to_json(st: MMState) -> Dict[str, Any]:
    return {"pc": st.pc, "regs": list(st.regs)}


def fractran_to_json(prog: FractranProg) -> List[List[int]]:
    return [[p, q] for p, q in prog.fractions]


def fractran_from_json(doc: List[List[int]]) -> FractranProg:
    return FractranProg(tuple((int(p), int(q)) for p, q in doc))


def recalg_to_json(f: RecAlg) -> list:
    if isinstance(f, Cst):
        return ["cst", f.n]
    if isinstance(f, Zero):
        return ["zero"]
    if isinstance(f, Succ):
        return ["succ"]
    if isinstance(f, Proj):
        return ["proj", f.k, f.p]
    if isinstance(f, Comp):
        return ["comp", f.i, recalg_to_json(f.f), [recalg_to_json(g) for g in f.gs]]
    if isinstance(f, Rec):
        return ["rec", recalg_to_json(f.f), recalg_to_json(f.g)]
    if isinstance(f, Min):
        return ["min", recalg_to_json(f.f)]
    raise ParseError(f"cannot serialize {type(f).__name__}")


def recalg_from_json(doc: list, path: str = "$") -> RecAlg:
    """Decode a tagged RecAlg tree; arity errors surface as ShapeError."""
    if not isinstance(doc, list) or not doc:
        raise ParseError("expected a tagged array", path)
    tag = doc[0]
    if tag == "cst":
        return Cst(int(doc[1]))
    if tag == "zero":
        return Zero()
    if tag == "succ":
        return Succ()
    if tag == "proj":
        return Proj(int(doc[1]), int(doc[2]))
    if tag == "comp":
        gs = tuple(recalg_from_json(g, f"{path}[3][{j}]") for j, g in enumerate(doc[3]))
        return Comp(recalg_from_json(doc[2], f"{path}[2]"), gs, int(doc[1]))
    if tag == "rec":
        return Rec(recalg_from_json(doc[1], f"{path}[1]"), recalg_from_json(doc[2], f"{path}[2]"))
    if tag == "min":
        return Min(recalg_from_json(doc[1], f"{path}[1]"))
    raise ParseError(f"unknown recursive algorithm tag {tag!r}", path)


def lterm_to_json(t: LTerm) -> list:
    if isinstance(t, Var):
        return ["var", t.n]
    if isinstance(t, App):
        return ["app", lterm_to_json(t.s), lterm_to_json(t.t)]
    return ["lam", lterm_to_json(t.s)]


def lterm_from_json(doc: list, path: str = "$") -> LTerm:
    if not isinstance(doc, list) or not doc:
        raise ParseError("expected a tagged array", path)
    tag = doc[0]
    if tag == "var":
        return Var(int(doc[1]))
    if tag == "app":
        return App(lterm_from_json(doc[1], f"{path}[1]"), lterm_from_json(doc[2], f"{path}[2]"))
    if tag == "lam":
        return Lam(lterm_from_json(doc[1], f"{path}[1]"))
    raise ParseError(f"unknown lambda term tag {tag!r}", path)
