"""
Elementary Diophantine constraints and the translation of formulas into them.

A constraint relates variables u of a working copy U to constants, to other
working variables and to parameters x_i. form_to_elem places the representation
of a formula in a window [a, a+n) of working variables: the list of
constraints is always satisfiable, and adding "reference = 0" makes it
equivalent to the formula.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Sequence, Tuple, Union

from dio.form import ATOMS, DfAdd, DfAnd, DfCst, DfEq, DfEx, DioForm
from utils.errors import ShapeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CCst:
    """u = n"""
    u: int
    n: int


@dataclass(frozen=True)
class CVar:
    """u = v"""
    u: int
    v: int


@dataclass(frozen=True)
class CPar:
    """u = x_i"""
    u: int
    i: int


@dataclass(frozen=True)
class CAdd:
    """u = v + w"""
    u: int
    v: int
    w: int


@dataclass(frozen=True)
class CMul:
    """u = v * w"""
    u: int
    v: int
    w: int


DioCstr = Union[CCst, CVar, CPar, CAdd, CMul]
Assignment = Union[Sequence[int], Mapping[int, int]]


def cstr_vars(c: DioCstr) -> Tuple[int, ...]:
    """Working variables of a constraint."""
    if isinstance(c, (CCst, CPar)):
        return (c.u,)
    if isinstance(c, CVar):
        return (c.u, c.v)
    return (c.u, c.v, c.w)


def lookup(phi: Assignment, u: int) -> int:
    try:
        return phi[u]
    except (IndexError, KeyError):
        raise ShapeError(f"working variable u{u} has no value")


def cstr_eval(c: DioCstr, nu: Callable[[int], int], phi: Assignment) -> bool:
    """Truth of one constraint under parameters nu and working values phi."""
    x = lookup(phi, c.u)
    if isinstance(c, CCst):
        return x == c.n
    if isinstance(c, CVar):
        return x == lookup(phi, c.v)
    if isinstance(c, CPar):
        return x == nu(c.i)
    if isinstance(c, CAdd):
        return x == lookup(phi, c.v) + lookup(phi, c.w)
    return x == lookup(phi, c.v) * lookup(phi, c.w)


def cstrs_eval(cs: Sequence[DioCstr], nu: Callable[[int], int], phi: Assignment) -> bool:
    return all(cstr_eval(c, nu, phi) for c in cs)


@dataclass(frozen=True)
class ElemRepr:
    """
    Constraints over the window [start, start+width), with reference variable ref.

    witnesses lists the variables standing for the existentials of the source
    formula, in the order of their binders.
    """
    constraints: Tuple[DioCstr, ...]
    ref: int
    start: int
    width: int
    witnesses: Tuple[int, ...]

    @property
    def end(self) -> int:
        return self.start + self.width

    def with_ref_zero(self) -> List[DioCstr]:
        """(reference = 0) :: constraints"""
        return [CCst(self.ref, 0)] + list(self.constraints)


def _atom_cstrs(node, a: int, sigma: Callable[[int, int], DioCstr]) -> List[DioCstr]:
    """
    Seven constraints (five for x_i = n and x_i = x_j) over u_a .. u_{a+7}.

    u7 = u0 + u1, u0 + u2 = u1 + u5 with u2 standing for x_i and u5 for the
    right-hand side, so that u7 can be 0 exactly when x_i equals it.
    """
    u = [a + k for k in range(8)]
    out: List[DioCstr] = [CAdd(u[7], u[0], u[1]), CAdd(u[6], u[0], u[2]), CAdd(u[6], u[1], u[5])]
    if isinstance(node, DfCst):
        out.append(CCst(u[5], node.n))
    elif isinstance(node, DfEq):
        out.append(sigma(u[5], node.j))
    else:
        op = CAdd if isinstance(node, DfAdd) else CMul
        out.extend([op(u[5], u[3], u[4]), sigma(u[4], node.k), sigma(u[3], node.j)])
    out.append(sigma(u[2], node.i))
    return out


def form_to_elem(a: DioForm, start: int = 0) -> ElemRepr:
    """
    Elementary representation of a in the window starting at start.

    Atoms take 8 variables with reference u_{a+7}; a conjunction (disjunction)
    places its left operand at a, its right operand next to it and its
    reference r = r_left + r_right (r_left * r_right) in the following
    variable; an existential places its body at a and its witness right after.
    The window width never exceeds 8 * size(a).
    """
    width: Dict[int, int] = {}
    refoff: Dict[int, int] = {}
    stack = [(a, False)]
    while stack:
        node, done = stack.pop()
        if id(node) in width:
            continue
        if isinstance(node, ATOMS):
            width[id(node)], refoff[id(node)] = 8, 7
        elif isinstance(node, DfEx):
            if done:
                width[id(node)] = 1 + width[id(node.body)]
                refoff[id(node)] = refoff[id(node.body)]
            else:
                stack.append((node, True))
                stack.append((node.body, False))
        elif done:
            nb, nc = width[id(node.left)], width[id(node.right)]
            width[id(node)] = 1 + nb + nc
            refoff[id(node)] = nb + nc
        else:
            stack.append((node, True))
            stack.append((node.left, False))
            stack.append((node.right, False))

    constraints: List[DioCstr] = []
    witnesses: List[int] = []
    env: List[int] = []

    def sigma(u: int, i: int) -> DioCstr:
        if i < len(env):
            return CVar(u, env[len(env) - 1 - i])
        return CPar(u, i - len(env))

    emit = [(a, start)]
    while emit:
        node, at = emit.pop()
        if node is None:
            env.pop()
        elif isinstance(node, ATOMS):
            constraints.extend(_atom_cstrs(node, at, sigma))
        elif isinstance(node, DfEx):
            w = at + width[id(node.body)]
            witnesses.append(w)
            env.append(w)
            emit.append((None, at))
            emit.append((node.body, at))
        else:
            nb, nc = width[id(node.left)], width[id(node.right)]
            r = at + nb + nc
            rb = at + refoff[id(node.left)]
            rc = at + nb + refoff[id(node.right)]
            constraints.append((CAdd if isinstance(node, DfAnd) else CMul)(r, rb, rc))
            emit.append((node.right, at + nb))
            emit.append((node.left, at))
    repr_ = ElemRepr(tuple(constraints), start + refoff[id(a)], start, width[id(a)], tuple(witnesses))
    logger.debug(f"elementary representation: {len(constraints)} constraints in a window of {repr_.width}")
    return repr_


def elem_used_vars(cs: Sequence[DioCstr]) -> List[int]:
    """Sorted working variables occurring in cs."""
    used = set()
    for c in cs:
        used.update(cstr_vars(c))
    return sorted(used)


def elem_max_param(cs: Sequence[DioCstr]) -> int:
    """Largest parameter index occurring in cs, -1 when none."""
    return max((c.i for c in cs if isinstance(c, CPar)), default=-1)


@dataclass(frozen=True)
class Presolved:
    """
    A constraint list with aliased variables merged and zero classes folded.

    alias maps every working variable of the source list to the representative
    carrying its value; witnesses are the representatives of the source witnesses.
    """
    constraints: Tuple[DioCstr, ...]
    alias: Dict[int, int]
    witnesses: Tuple[int, ...]


def elem_presolve(cs: Sequence[DioCstr], witnesses: Sequence[int] = ()) -> Presolved:
    """
    Simplify cs without changing its solutions.

    Copies are merged; u = 0 spreads through u = v + w to v and w; an addend
    known to be 0 turns an addition into a copy, u = u + w forces w = 0, and a
    zero factor makes the product 0. Zero classes come back as u = 0.
    """
    parent: Dict[int, int] = {}

    def find(u: int) -> int:
        root = u
        while parent.get(root, root) != root:
            root = parent[root]
        while u != root:
            parent[u], u = root, parent.get(u, u)
        return root

    zero: set = set()

    def union(u: int, v: int) -> bool:
        a, b = find(u), find(v)
        if a == b:
            return False
        a, b = min(a, b), max(a, b)
        parent[b] = a
        if b in zero:
            zero.add(a)
        return True

    def set_zero(u: int) -> bool:
        r = find(u)
        if r in zero:
            return False
        zero.add(r)
        return True

    pending: List[DioCstr] = []
    for c in cs:
        if isinstance(c, CVar):
            union(c.u, c.v)
        else:
            if isinstance(c, CCst) and c.n == 0:
                set_zero(c.u)
            pending.append(c)
    changed = True
    while changed:
        changed = False
        kept: List[DioCstr] = []
        for c in pending:
            if isinstance(c, CAdd):
                u, v, w = find(c.u), find(c.v), find(c.w)
                if u in zero:
                    changed |= set_zero(v) | set_zero(w)
                    continue
                if v in zero or u == v:
                    changed |= union(u, w) if v in zero else set_zero(w)
                    continue
                if w in zero or u == w:
                    changed |= union(u, v) if w in zero else set_zero(v)
                    continue
            elif isinstance(c, CMul):
                if find(c.v) in zero or find(c.w) in zero:
                    changed |= set_zero(c.u)
                    continue
            kept.append(c)
        pending = kept

    used = {u for c in cs for u in cstr_vars(c)}
    alias = {u: find(u) for u in used}
    out: List[DioCstr] = []
    seen = set()
    for c in pending:
        if isinstance(c, CCst):
            c = CCst(find(c.u), c.n)
            if c.n == 0 and c.u in zero:
                continue
        elif isinstance(c, CPar):
            c = CPar(find(c.u), c.i)
        else:
            c = type(c)(find(c.u), find(c.v), find(c.w))
        if c not in seen:
            seen.add(c)
            out.append(c)
    out = [CCst(r, 0) for r in sorted(zero) if find(r) == r] + out
    reps = tuple(dict.fromkeys(alias[w] for w in witnesses if w in alias))
    logger.debug(f"presolve: {len(cs)} constraints down to {len(out)}, {len(set(alias.values()))} classes")
    return Presolved(tuple(out), alias, reps)


def presolved_assignment(pre: Presolved, phi: Mapping[int, int]) -> Dict[int, int]:
    """Extend an assignment of the representatives to every source variable."""
    return {u: phi[r] for u, r in pre.alias.items()}
