"""
JSON and s-expression codecs for formulas, constraint lists and polynomials.

JSON values are plain lists and dicts; dumps() renders them with sorted keys and
compact separators so that equal objects give byte-identical text. Consecutive
existentials are folded into one ["ex", k, body] node. Decoders report the
JSON path of the first malformed node.
"""
import json
import re
from typing import Any, Dict, List, Sequence, Tuple

from dio.elem import CAdd, CCst, CMul, CPar, CVar, DioCstr, ElemRepr
from dio.form import ATOMS, DfAdd, DfAnd, DfCst, DfEq, DfEx, DfMul, DfOr, DioForm, df_ex_chain
from dio.single import LEAVES, DioPoly, DioSingle, PAdd, PConst, PMul, PPar, PVar
from utils.errors import ParseError

Json = Any

_FORM_ATOMS = {"eq_cst": (DfCst, 2), "eq_var": (DfEq, 2), "eq_add": (DfAdd, 3), "eq_mul": (DfMul, 3)}
_FORM_TAGS = {DfCst: "eq_cst", DfEq: "eq_var", DfAdd: "eq_add", DfMul: "eq_mul"}
_CSTRS = {"cst": (CCst, 2), "var": (CVar, 2), "par": (CPar, 2), "add": (CAdd, 3), "mul": (CMul, 3)}
_CSTR_TAGS = {CCst: "cst", CVar: "var", CPar: "par", CAdd: "add", CMul: "mul"}


def dumps(obj: Json) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _is_nat(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _tagged(node: Json, path: str) -> str:
    if not isinstance(node, list) or not node or not isinstance(node[0], str):
        raise ParseError("expected a tagged array", path)
    return node[0]


def _nat_args(node: list, arity: int, path: str) -> List[int]:
    args = node[1:]
    if len(args) != arity:
        raise ParseError(f"{node[0]} takes {arity} arguments, got {len(args)}", path)
    for k, x in enumerate(args):
        if not _is_nat(x):
            raise ParseError("expected a natural number", f"{path}[{k + 1}]")
    return args


def _atom_fields(node) -> List[int]:
    if isinstance(node, DfCst):
        return [node.i, node.n]
    if isinstance(node, DfEq):
        return [node.i, node.j]
    return [node.i, node.j, node.k]


def _ex_run(node: DfEx) -> Tuple[int, DioForm]:
    k = 0
    while isinstance(node, DfEx):
        k += 1
        node = node.body
    return k, node


def form_to_json(a: DioForm) -> Json:
    out: Dict[int, Json] = {}
    stack = [a]
    while stack:
        node = stack[-1]
        if id(node) in out:
            stack.pop()
            continue
        if isinstance(node, ATOMS):
            out[id(node)] = [_FORM_TAGS[type(node)]] + _atom_fields(node)
        elif isinstance(node, DfEx):
            k, body = _ex_run(node)
            if id(body) not in out:
                stack.append(body)
                continue
            out[id(node)] = ["ex", k, out[id(body)]]
        else:
            pending = [c for c in (node.right, node.left) if id(c) not in out]
            if pending:
                stack.extend(pending)
                continue
            tag = "and" if isinstance(node, DfAnd) else "or"
            out[id(node)] = [tag, out[id(node.left)], out[id(node.right)]]
        stack.pop()
    return out[id(a)]


def form_from_json(obj: Json, path: str = "$") -> DioForm:
    out: Dict[int, DioForm] = {}
    stack = [(obj, path, False)]
    while stack:
        node, p, done = stack.pop()
        tag = _tagged(node, p)
        if tag in _FORM_ATOMS:
            cls, arity = _FORM_ATOMS[tag]
            out[id(node)] = cls(*_nat_args(node, arity, p))
        elif tag in ("and", "or"):
            if len(node) != 3:
                raise ParseError(f"{tag} takes 2 operands", p)
            if done:
                cls = DfAnd if tag == "and" else DfOr
                out[id(node)] = cls(out[id(node[1])], out[id(node[2])])
            else:
                stack.extend([(node, p, True), (node[2], f"{p}[2]", False), (node[1], f"{p}[1]", False)])
        elif tag == "ex":
            if len(node) != 3 or not _is_nat(node[1]) or node[1] < 1:
                raise ParseError("ex takes a positive count and a body", p)
            if done:
                out[id(node)] = df_ex_chain(out[id(node[2])], node[1])
            else:
                stack.extend([(node, p, True), (node[2], f"{p}[2]", False)])
        else:
            raise ParseError(f"unknown formula tag {tag!r}", p)
    return out[id(obj)]


def cstrs_to_json(cs: Sequence[DioCstr]) -> Json:
    out = []
    for c in cs:
        tag = _CSTR_TAGS[type(c)]
        if isinstance(c, CCst):
            out.append([tag, c.u, c.n])
        elif isinstance(c, CVar):
            out.append([tag, c.u, c.v])
        elif isinstance(c, CPar):
            out.append([tag, c.u, c.i])
        else:
            out.append([tag, c.u, c.v, c.w])
    return out


def cstrs_from_json(obj: Json, path: str = "$") -> List[DioCstr]:
    if not isinstance(obj, list):
        raise ParseError("expected a list of constraints", path)
    out = []
    for k, node in enumerate(obj):
        p = f"{path}[{k}]"
        tag = _tagged(node, p)
        if tag not in _CSTRS:
            raise ParseError(f"unknown constraint tag {tag!r}", p)
        cls, arity = _CSTRS[tag]
        out.append(cls(*_nat_args(node, arity, p)))
    return out


def elem_to_json(rep: ElemRepr) -> Json:
    return {
        "constraints": cstrs_to_json(rep.constraints),
        "ref": rep.ref,
        "start": rep.start,
        "width": rep.width,
        "witnesses": list(rep.witnesses),
    }


def elem_from_json(obj: Json, path: str = "$") -> ElemRepr:
    if not isinstance(obj, dict):
        raise ParseError("expected an object", path)
    for key in ("ref", "start", "width"):
        if not _is_nat(obj.get(key)):
            raise ParseError("expected a natural number", f"{path}.{key}")
    witnesses = obj.get("witnesses", [])
    if not isinstance(witnesses, list) or not all(_is_nat(w) for w in witnesses):
        raise ParseError("expected a list of variables", f"{path}.witnesses")
    cs = cstrs_from_json(obj.get("constraints"), f"{path}.constraints")
    return ElemRepr(tuple(cs), obj["ref"], obj["start"], obj["width"], tuple(witnesses))


def poly_to_json(p: DioPoly) -> Json:
    out: Dict[int, Json] = {}
    stack = [p]
    while stack:
        node = stack[-1]
        if id(node) in out:
            stack.pop()
            continue
        if isinstance(node, LEAVES):
            if isinstance(node, PVar):
                out[id(node)] = ["var", node.u]
            elif isinstance(node, PPar):
                out[id(node)] = ["par", node.i]
            else:
                out[id(node)] = ["const", node.n]
        else:
            pending = [c for c in (node.right, node.left) if id(c) not in out]
            if pending:
                stack.extend(pending)
                continue
            tag = "add" if isinstance(node, PAdd) else "mul"
            out[id(node)] = [tag, out[id(node.left)], out[id(node.right)]]
        stack.pop()
    return out[id(p)]


def poly_from_json(obj: Json, path: str = "$", signed: bool = False) -> DioPoly:
    """Decode a polynomial; signed admits negative constants (integer polynomials)."""
    out: Dict[int, DioPoly] = {}
    stack = [(obj, path, False)]
    while stack:
        node, p, done = stack.pop()
        tag = _tagged(node, p)
        if tag in ("var", "par"):
            (x,) = _nat_args(node, 1, p)
            out[id(node)] = PVar(x) if tag == "var" else PPar(x)
        elif tag == "const":
            if len(node) != 2 or not (_is_int(node[1]) if signed else _is_nat(node[1])):
                raise ParseError("const takes one " + ("integer" if signed else "natural number"), p)
            out[id(node)] = PConst(node[1])
        elif tag in ("add", "mul"):
            if len(node) != 3:
                raise ParseError(f"{tag} takes 2 operands", p)
            if done:
                cls = PAdd if tag == "add" else PMul
                out[id(node)] = cls(out[id(node[1])], out[id(node[2])])
            else:
                stack.extend([(node, p, True), (node[2], f"{p}[2]", False), (node[1], f"{p}[1]", False)])
        else:
            raise ParseError(f"unknown polynomial tag {tag!r}", p)
    return out[id(obj)]


def single_to_json(e: DioSingle) -> Json:
    return {"lhs": poly_to_json(e.lhs), "rhs": poly_to_json(e.rhs)}


def single_from_json(obj: Json, path: str = "$") -> DioSingle:
    if not isinstance(obj, dict) or "lhs" not in obj or "rhs" not in obj:
        raise ParseError("expected an object with lhs and rhs", path)
    return DioSingle(poly_from_json(obj["lhs"], f"{path}.lhs"), poly_from_json(obj["rhs"], f"{path}.rhs"))


def _atom_sexpr(node) -> str:
    if isinstance(node, DfCst):
        return f"(= x{node.i} {node.n})"
    if isinstance(node, DfEq):
        return f"(= x{node.i} x{node.j})"
    op = "+" if isinstance(node, DfAdd) else "*"
    return f"(= x{node.i} ({op} x{node.j} x{node.k}))"


def form_to_sexpr(a: DioForm) -> str:
    """
    Example:
        >>> form_to_sexpr(DfEx(DfAnd(DfCst(0, 1), DfAdd(1, 0, 0))))
        '(ex (and (= x0 1) (= x1 (+ x0 x0))))'
    """
    parts: List[str] = []
    stack: List[Any] = [a]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
        elif isinstance(item, ATOMS):
            parts.append(_atom_sexpr(item))
        elif isinstance(item, DfEx):
            stack.extend([")", item.body, "(ex "])
        else:
            head = "(and " if isinstance(item, DfAnd) else "(or "
            stack.extend([")", item.right, " ", item.left, head])
    return "".join(parts)


_TOKEN = re.compile(r"\s*(?:(\()|(\))|([^\s()]+))")
_VAR = re.compile(r"x(\d+)$")


def _read_sexpr(text: str) -> Tuple[list, Dict[int, int]]:
    """Nested lists of atoms, with the character offset of each list."""
    positions: Dict[int, int] = {}
    stack: List[list] = [[]]
    at = 0
    while True:
        m = _TOKEN.match(text, at)
        if m is None or m.end() == at:
            if text[at:].strip():
                raise ParseError("unexpected character", f"offset {at}")
            break
        at = m.end()
        if m.group(1):
            fresh: list = []
            positions[id(fresh)] = m.start(1)
            stack[-1].append(fresh)
            stack.append(fresh)
        elif m.group(2):
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", f"offset {m.start(2)}")
            stack.pop()
        else:
            stack[-1].append(m.group(3))
    if len(stack) != 1:
        raise ParseError("unbalanced '('", f"offset {len(text)}")
    if len(stack[0]) != 1 or not isinstance(stack[0][0], list):
        raise ParseError("expected exactly one formula", "offset 0")
    return stack[0][0], positions


def _sexpr_var(tok, where: str) -> int:
    m = _VAR.match(tok) if isinstance(tok, str) else None
    if m is None:
        raise ParseError(f"expected a variable, got {tok!r}", where)
    return int(m.group(1))


def _sexpr_atom(node: list, where: str) -> DioForm:
    if len(node) != 3:
        raise ParseError("= takes two operands", where)
    i = _sexpr_var(node[1], where)
    rhs = node[2]
    if isinstance(rhs, list):
        if len(rhs) != 3 or rhs[0] not in ("+", "*"):
            raise ParseError("expected (+ xj xk) or (* xj xk)", where)
        cls = DfAdd if rhs[0] == "+" else DfMul
        return cls(i, _sexpr_var(rhs[1], where), _sexpr_var(rhs[2], where))
    if rhs.isdigit():
        return DfCst(i, int(rhs))
    return DfEq(i, _sexpr_var(rhs, where))


def form_from_sexpr(text: str) -> DioForm:
    tree, positions = _read_sexpr(text)
    out: Dict[int, DioForm] = {}
    stack = [(tree, False)]
    while stack:
        node, done = stack.pop()
        where = f"offset {positions.get(id(node), 0)}"
        if not isinstance(node, list) or not node or not isinstance(node[0], str):
            raise ParseError("expected a formula", where)
        head = node[0]
        if head == "=":
            out[id(node)] = _sexpr_atom(node, where)
        elif head == "ex":
            if len(node) != 2:
                raise ParseError("ex takes one body", where)
            if done:
                out[id(node)] = DfEx(out[id(node[1])])
            else:
                stack.extend([(node, True), (node[1], False)])
        elif head in ("and", "or"):
            if len(node) != 3:
                raise ParseError(f"{head} takes two operands", where)
            if done:
                cls = DfAnd if head == "and" else DfOr
                out[id(node)] = cls(out[id(node[1])], out[id(node[2])])
            else:
                stack.extend([(node, True), (node[2], False), (node[1], False)])
        else:
            raise ParseError(f"unknown head {head!r}", where)
    return out[id(tree)]
