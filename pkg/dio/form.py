"""
Diophantine logic: formulas over de Bruijn variables, valuations, renamings and builders.

Atoms are x_i = n, x_i = x_j, x_i = x_j + x_k and x_i = x_j * x_k; connectives are
binary conjunction, binary disjunction and the existential, which binds x_0 of its
body. Formula nodes compare by identity so that shared sub-formulas stay shared
(a DAG) through every traversal; all traversals are iterative because existential
chains of generated formulas are far deeper than the interpreter stack.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple, Union

from utils.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DfCst:
    """x_i = n"""
    i: int
    n: int


@dataclass(frozen=True, eq=False)
class DfEq:
    """x_i = x_j"""
    i: int
    j: int


@dataclass(frozen=True, eq=False)
class DfAdd:
    """x_i = x_j + x_k"""
    i: int
    j: int
    k: int


@dataclass(frozen=True, eq=False)
class DfMul:
    """x_i = x_j * x_k"""
    i: int
    j: int
    k: int


@dataclass(frozen=True, eq=False)
class DfAnd:
    left: "DioForm"
    right: "DioForm"


@dataclass(frozen=True, eq=False)
class DfOr:
    left: "DioForm"
    right: "DioForm"


@dataclass(frozen=True, eq=False)
class DfEx:
    body: "DioForm"


DfAtom = Union[DfCst, DfEq, DfAdd, DfMul]
DioForm = Union[DfCst, DfEq, DfAdd, DfMul, DfAnd, DfOr, DfEx]
ATOMS = (DfCst, DfEq, DfAdd, DfMul)


def atom_vars(a: DfAtom) -> Tuple[int, ...]:
    if isinstance(a, DfCst):
        return (a.i,)
    if isinstance(a, DfEq):
        return (a.i, a.j)
    return (a.i, a.j, a.k)


def children(node: DioForm) -> Tuple[DioForm, ...]:
    if isinstance(node, (DfAnd, DfOr)):
        return (node.left, node.right)
    if isinstance(node, DfEx):
        return (node.body,)
    return ()


@dataclass(frozen=True)
class Valuation:
    """
    Total map from variable indices to naturals: an explicit prefix, then a constant tail.

    lift(n) is the de Bruijn extension: the new value becomes x_0 and every
    other variable moves up by one.
    """
    prefix: Tuple[int, ...] = ()
    default: int = 0

    def __call__(self, i: int) -> int:
        if i < 0:
            raise DomainError(f"negative variable index {i}")
        return self.prefix[i] if i < len(self.prefix) else self.default

    def lift(self, n: int) -> "Valuation":
        return Valuation((n,) + self.prefix, self.default)

    def compose(self, rho: "Renaming") -> "Valuation":
        """The valuation i -> self(rho(i))."""
        span = len(rho.prefix) + max(0, len(self.prefix) - rho.offset)
        return Valuation(tuple(self(rho(i)) for i in range(span)), self.default)

    @classmethod
    def of(cls, values: Sequence[int], default: int = 0) -> "Valuation":
        return cls(tuple(values), default)


@dataclass(frozen=True)
class Renaming:
    """
    Total renaming: i -> prefix[i] below len(prefix), i - len(prefix) + offset above.
    """
    prefix: Tuple[int, ...] = ()
    offset: int = 0

    def __call__(self, i: int) -> int:
        n = len(self.prefix)
        return self.prefix[i] if i < n else i - n + self.offset

    def lift(self) -> "Renaming":
        """Renaming under one binder: 0 stays, i+1 goes to rho(i)+1."""
        return Renaming((0,) + tuple(p + 1 for p in self.prefix), self.offset + 1)

    def compose(self, other: "Renaming") -> "Renaming":
        """The renaming i -> self(other(i))."""
        span = len(other.prefix) + max(0, len(self.prefix) - other.offset)
        return Renaming(tuple(self(other(i)) for i in range(span)), self(other(span)))

    @classmethod
    def shift(cls, k: int) -> "Renaming":
        return cls((), k)


IDENTITY = Renaming()


def df_size(a: DioForm) -> int:
    """Node count of the formula as a tree (shared sub-formulas count once per occurrence)."""
    sizes: Dict[int, int] = {}
    stack = [(a, False)]
    while stack:
        node, done = stack.pop()
        if id(node) in sizes:
            continue
        kids = children(node)
        if done or not kids:
            sizes[id(node)] = 1 + sum(sizes[id(k)] for k in kids)
        else:
            stack.append((node, True))
            stack.extend((k, False) for k in kids if id(k) not in sizes)
    return sizes[id(a)]


def df_free_vars(a: DioForm) -> Set[int]:
    """Indices of the free variables of a, relative to the top of the formula."""
    free: Set[int] = set()
    seen: Set[Tuple[int, int]] = set()
    stack = [(a, 0)]
    while stack:
        node, depth = stack.pop()
        key = (id(node), depth)
        if key in seen:
            continue
        seen.add(key)
        if isinstance(node, ATOMS):
            free.update(v - depth for v in atom_vars(node) if v >= depth)
        elif isinstance(node, DfEx):
            stack.append((node.body, depth + 1))
        else:
            stack.append((node.left, depth))
            stack.append((node.right, depth))
    return free


def df_arity(a: DioForm) -> int:
    """One more than the largest free variable, 0 for closed formulas."""
    free = df_free_vars(a)
    return max(free) + 1 if free else 0


def _rename_atom(node: DfAtom, f: Callable[[int], int]) -> DfAtom:
    if isinstance(node, DfCst):
        return DfCst(f(node.i), node.n)
    if isinstance(node, DfEq):
        return DfEq(f(node.i), f(node.j))
    return type(node)(f(node.i), f(node.j), f(node.k))


def df_rename(a: DioForm, rho: Renaming) -> DioForm:
    """
    Rename the free variables of a by rho.

    Under L binders variable i stays when i < L and becomes rho(i - L) + L otherwise.
    """
    if rho == IDENTITY:
        return a
    out: Dict[Tuple[int, int], DioForm] = {}
    stack = [(a, 0, False)]
    while stack:
        node, depth, done = stack.pop()
        key = (id(node), depth)
        if key in out:
            continue
        if isinstance(node, ATOMS):
            out[key] = _rename_atom(node, lambda i, d=depth: i if i < d else rho(i - d) + d)
        elif isinstance(node, DfEx):
            if done:
                out[key] = DfEx(out[(id(node.body), depth + 1)])
            else:
                stack.append((node, depth, True))
                stack.append((node.body, depth + 1, False))
        elif done:
            out[key] = type(node)(out[(id(node.left), depth)], out[(id(node.right), depth)])
        else:
            stack.append((node, depth, True))
            stack.append((node.left, depth, False))
            stack.append((node.right, depth, False))
    return out[(id(a), 0)]


def df_ex_chain(body: DioForm, k: int) -> DioForm:
    for _ in range(k):
        body = DfEx(body)
    return body


def df_conj(forms: Sequence[DioForm]) -> DioForm:
    """Balanced conjunction of a non-empty list."""
    return _balanced(list(forms), DfAnd)


def df_disj(forms: Sequence[DioForm]) -> DioForm:
    """Balanced disjunction of a non-empty list."""
    return _balanced(list(forms), DfOr)


def _balanced(forms: List[DioForm], node) -> DioForm:
    if not forms:
        raise DomainError("empty connective")
    while len(forms) > 1:
        paired = [node(forms[i], forms[i + 1]) for i in range(0, len(forms) - 1, 2)]
        if len(forms) % 2:
            paired.append(forms[-1])
        forms = paired
    return forms[0]


def df_eval_free(a: DioForm, nu: Valuation) -> bool:
    """Truth of an existential-free formula."""
    stack = [a]
    results: Dict[int, bool] = {}
    while stack:
        node = stack[-1]
        if id(node) in results:
            stack.pop()
            continue
        if isinstance(node, DfEx):
            raise DomainError("df_eval_free on a formula with an existential; use df_eval_bounded")
        if isinstance(node, ATOMS):
            results[id(node)] = atom_holds(node, nu)
            stack.pop()
            continue
        pending = [k for k in (node.left, node.right) if id(k) not in results]
        if pending:
            stack.extend(pending)
            continue
        l, r = results[id(node.left)], results[id(node.right)]
        results[id(node)] = (l and r) if isinstance(node, DfAnd) else (l or r)
        stack.pop()
    return results[id(a)]


def atom_holds(a: DfAtom, nu: Callable[[int], int]) -> bool:
    if isinstance(a, DfCst):
        return nu(a.i) == a.n
    if isinstance(a, DfEq):
        return nu(a.i) == nu(a.j)
    if isinstance(a, DfAdd):
        return nu(a.i) == nu(a.j) + nu(a.k)
    return nu(a.i) == nu(a.j) * nu(a.k)


@dataclass(frozen=True)
class DioRelBuilder:
    """A formula read as a relation over its free variables x_0 .. x_{arity-1}."""
    form: DioForm
    arity: int
    name: str = "relation"

    def size(self) -> int:
        return df_size(self.form)

    def holds_bounded(self, values: Sequence[int], bound: int):
        from dio.evaluate import df_eval_bounded
        return df_eval_bounded(self.form, Valuation.of(values), bound)


@dataclass(frozen=True)
class DioFunBuilder:
    """
    A formula defining a function: x_0 is the output and x_{1+i} the i-th input.
    """
    form: DioForm
    arity: int
    name: str = "function"

    def size(self) -> int:
        return df_size(self.form)

    def as_relation(self) -> DioRelBuilder:
        return DioRelBuilder(self.form, self.arity + 1, self.name)

    def holds_bounded(self, output: int, inputs: Sequence[int], bound: int):
        return self.as_relation().holds_bounded([output] + list(inputs), bound)
