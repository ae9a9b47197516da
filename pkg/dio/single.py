"""
Diophantine polynomials, single equations and the compression of constraint lists.

Polynomials are DAGs: elem_to_single shares the nodes of every variable and of
every constraint side, and all traversals memoize on node identity.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Sequence, Set, Tuple, Union

from dio.elem import CAdd, CCst, CMul, CPar, CVar, DioCstr
from utils.errors import ShapeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PVar:
    u: int


@dataclass(frozen=True, eq=False)
class PPar:
    i: int


@dataclass(frozen=True, eq=False)
class PConst:
    n: int


@dataclass(frozen=True, eq=False)
class PAdd:
    left: "DioPoly"
    right: "DioPoly"


@dataclass(frozen=True, eq=False)
class PMul:
    left: "DioPoly"
    right: "DioPoly"


DioPoly = Union[PVar, PPar, PConst, PAdd, PMul]
LEAVES = (PVar, PPar, PConst)


@dataclass(frozen=True)
class DioSingle:
    """lhs = rhs"""
    lhs: DioPoly
    rhs: DioPoly


Values = Union[Callable[[int], int], Sequence[int], Mapping[int, int]]


def _getter(values: Values, kind: str) -> Callable[[int], int]:
    if callable(values) and not isinstance(values, (list, tuple, dict)):
        return values

    def get(i: int) -> int:
        try:
            return values[i]
        except (IndexError, KeyError):
            raise ShapeError(f"{kind} index {i} out of range")

    return get


def poly_eval(p: DioPoly, nu: Values, phi: Values) -> int:
    """Value of p with parameters from nu and variables from phi."""
    par, var = _getter(nu, "parameter"), _getter(phi, "variable")
    memo: Dict[int, int] = {}
    stack = [p]
    while stack:
        node = stack[-1]
        if id(node) in memo:
            stack.pop()
            continue
        if isinstance(node, PConst):
            memo[id(node)] = node.n
        elif isinstance(node, PVar):
            memo[id(node)] = var(node.u)
        elif isinstance(node, PPar):
            memo[id(node)] = par(node.i)
        else:
            pending = [k for k in (node.left, node.right) if id(k) not in memo]
            if pending:
                stack.extend(pending)
                continue
            l, r = memo[id(node.left)], memo[id(node.right)]
            memo[id(node)] = l + r if isinstance(node, PAdd) else l * r
        stack.pop()
    return memo[id(p)]


def single_eval(e: DioSingle, nu: Values, phi: Values) -> bool:
    return poly_eval(e.lhs, nu, phi) == poly_eval(e.rhs, nu, phi)


def poly_size(p: DioPoly) -> int:
    """Node count of p as a tree."""
    sizes: Dict[int, int] = {}
    stack = [p]
    while stack:
        node = stack[-1]
        if id(node) in sizes:
            stack.pop()
            continue
        if isinstance(node, LEAVES):
            sizes[id(node)] = 1
        else:
            pending = [k for k in (node.left, node.right) if id(k) not in sizes]
            if pending:
                stack.extend(pending)
                continue
            sizes[id(node)] = 1 + sizes[id(node.left)] + sizes[id(node.right)]
        stack.pop()
    return sizes[id(p)]


def single_size(e: DioSingle) -> int:
    return poly_size(e.lhs) + poly_size(e.rhs)


def poly_leaves(p: DioPoly) -> List[DioPoly]:
    """Distinct leaf nodes of p."""
    seen: Set[int] = set()
    out = []
    stack = [p]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, LEAVES):
            out.append(node)
        else:
            stack.append(node.left)
            stack.append(node.right)
    return out


def single_vars(e: DioSingle) -> List[int]:
    """Sorted variables occurring in e."""
    return sorted({n.u for side in (e.lhs, e.rhs) for n in poly_leaves(side) if isinstance(n, PVar)})


def single_params(e: DioSingle) -> List[int]:
    return sorted({n.i for side in (e.lhs, e.rhs) for n in poly_leaves(side) if isinstance(n, PPar)})


def poly_map_leaves(p: DioPoly, f: Callable[[DioPoly], DioPoly]) -> DioPoly:
    """Rebuild p with every leaf replaced by f(leaf), keeping the sharing of p."""
    memo: Dict[int, DioPoly] = {}
    stack = [p]
    while stack:
        node = stack[-1]
        if id(node) in memo:
            stack.pop()
            continue
        if isinstance(node, LEAVES):
            memo[id(node)] = f(node)
        else:
            pending = [k for k in (node.left, node.right) if id(k) not in memo]
            if pending:
                stack.extend(pending)
                continue
            memo[id(node)] = type(node)(memo[id(node.left)], memo[id(node.right)])
        stack.pop()
    return memo[id(p)]


def balanced_sum(terms: List[DioPoly]) -> DioPoly:
    if not terms:
        return PConst(0)
    while len(terms) > 1:
        paired = [PAdd(terms[i], terms[i + 1]) for i in range(0, len(terms) - 1, 2)]
        if len(terms) % 2:
            paired.append(terms[-1])
        terms = paired
    return terms[0]


def cstr_sides(c: DioCstr, var: Callable[[int], DioPoly], par: Callable[[int], DioPoly]) -> Tuple[DioPoly, DioPoly]:
    """The constraint as an equation p = q."""
    if isinstance(c, CCst):
        return var(c.u), PConst(c.n)
    if isinstance(c, CVar):
        return var(c.u), var(c.v)
    if isinstance(c, CPar):
        return var(c.u), par(c.i)
    op = PAdd if isinstance(c, CAdd) else PMul
    return var(c.u), op(var(c.v), var(c.w))


def elem_to_single(cs: Sequence[DioCstr]) -> DioSingle:
    """
    One equation sum 2*p_i*q_i = sum (p_i*p_i + q_i*q_i) equivalent to all p_i = q_i.

    Every variable and parameter gets one shared leaf, so the result is linear
    in the length of cs.
    """
    variables: Dict[int, PVar] = {}
    params: Dict[int, PPar] = {}

    def var(u: int) -> PVar:
        if u not in variables:
            variables[u] = PVar(u)
        return variables[u]

    def par(i: int) -> PPar:
        if i not in params:
            params[i] = PPar(i)
        return params[i]

    two = PConst(2)
    lhs, rhs = [], []
    for c in cs:
        p, q = cstr_sides(c, var, par)
        lhs.append(PMul(two, PMul(p, q)))
        rhs.append(PAdd(PMul(p, p), PMul(q, q)))
    e = DioSingle(balanced_sum(lhs), balanced_sum(rhs))
    logger.debug(f"single equation from {len(cs)} constraints over {len(variables)} variables")
    return e


def finitize_vars(e: DioSingle) -> Tuple[int, DioSingle]:
    """
    Compact the variables of e to 0 .. n-1, keeping their order.

    Returns:
        (n, e') where n is the number of distinct variables of e
    """
    used = single_vars(e)
    index = {u: k for k, u in enumerate(used)}
    leaves: Dict[int, PVar] = {}

    def remap(leaf: DioPoly) -> DioPoly:
        if not isinstance(leaf, PVar):
            return leaf
        k = index[leaf.u]
        if k not in leaves:
            leaves[k] = PVar(k)
        return leaves[k]

    return len(used), DioSingle(poly_map_leaves(e.lhs, remap), poly_map_leaves(e.rhs, remap))


def project_params(e: DioSingle, n: int) -> DioSingle:
    """Replace every parameter x_i with i >= n by the constant 0."""
    zero = PConst(0)

    def project(leaf: DioPoly) -> DioPoly:
        return zero if isinstance(leaf, PPar) and leaf.i >= n else leaf

    return DioSingle(poly_map_leaves(e.lhs, project), poly_map_leaves(e.rhs, project))
