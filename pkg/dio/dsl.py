"""
Named-variable layer over Diophantine logic.

Formulas are written with named variables, arithmetic terms and the usual
derived relations, grouped into Shapes with named parameters. A Shape compiles
to a de Bruijn formula whose free variable x_k is its k-th parameter, and it can
be evaluated directly with Shape.holds, where applied sub-shapes carrying a host
oracle are decided by that oracle.
"""
import itertools
import logging
from dataclasses import dataclass, fields
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from dio.form import (
    DfAdd,
    DfAnd,
    DfCst,
    DfEq,
    DfEx,
    DfMul,
    DioForm,
    DioFunBuilder,
    DioRelBuilder,
    Renaming,
    df_conj,
    df_disj,
)
from dio.shapes import rel_rename
from solver.propagate import AddProp, CopyProp, MulProp, OracleProp, Store
from utils.errors import ShapeError

logger = logging.getLogger(__name__)


class Term:
    def __add__(self, other) -> "Term":
        return Add(self, term(other))

    def __radd__(self, other) -> "Term":
        return Add(term(other), self)

    def __mul__(self, other) -> "Term":
        return Mul(self, term(other))

    def __rmul__(self, other) -> "Term":
        return Mul(term(other), self)


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Const(Term):
    n: int


@dataclass(frozen=True)
class Add(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term


def term(x: Union[Term, int, str]) -> Term:
    if isinstance(x, Term):
        return x
    if isinstance(x, int):
        return Const(x)
    return Var(x)


def V(*names: str) -> Tuple[Var, ...]:
    """Var objects for several names at once."""
    return tuple(Var(n) for n in names)


class Formula:
    pass


class Relation(Formula):
    """Binary relation between terms; ints and names are accepted for terms."""

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, term(getattr(self, f.name)))


@dataclass(frozen=True)
class Eq(Relation):
    left: Term
    right: Term


@dataclass(frozen=True)
class Lt(Relation):
    left: Term
    right: Term


@dataclass(frozen=True)
class Le(Relation):
    left: Term
    right: Term


@dataclass(frozen=True)
class Ne(Relation):
    left: Term
    right: Term


@dataclass(frozen=True)
class Divides(Relation):
    """divisor | dividend"""
    divisor: Term
    dividend: Term


@dataclass(frozen=True)
class NDivides(Relation):
    divisor: Term
    dividend: Term


@dataclass(frozen=True, init=False)
class And(Formula):
    parts: Tuple[Formula, ...]

    def __init__(self, *parts: Formula):
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True, init=False)
class Or(Formula):
    parts: Tuple[Formula, ...]

    def __init__(self, *parts: Formula):
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True)
class Exists(Formula):
    names: Tuple[str, ...]
    body: Formula

    def __init__(self, names: Sequence[str], body: Formula):
        object.__setattr__(self, "names", tuple(names))
        object.__setattr__(self, "body", body)


@dataclass(frozen=True)
class Apply(Formula):
    """A Shape, or a compiled builder, applied to argument terms in parameter order."""
    target: object
    args: Tuple[Term, ...]

    def __init__(self, target, args: Sequence[Union[Term, int, str]]):
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "args", tuple(term(a) for a in args))


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class FalseF(Formula):
    pass


def apply_rel2(r: DioRelBuilder, u: Union[Term, int, str], v: Union[Term, int, str]) -> Apply:
    """R(u, v) for a binary relation read over (x_1, x_0)."""
    return Apply(r, (v, u))


def _desugar(f: Formula, fresh: Callable[[], str]) -> Formula:
    """Rewrite the derived relations into Eq, And, Or and Exists."""
    if isinstance(f, Lt):
        k = fresh()
        return Exists([k], Eq(f.right, Add(Add(f.left, Var(k)), Const(1))))
    if isinstance(f, Le):
        k = fresh()
        return Exists([k], Eq(f.right, Add(f.left, Var(k))))
    if isinstance(f, Ne):
        return Or(Lt(f.left, f.right), Lt(f.right, f.left))
    if isinstance(f, Divides):
        k = fresh()
        return Exists([k], Eq(f.dividend, Mul(Var(k), f.divisor)))
    if isinstance(f, NDivides):
        a, b = fresh(), fresh()
        d, n = f.divisor, f.dividend
        return Or(
            And(Eq(d, Const(0)), Ne(n, Const(0))),
            Exists([a, b], And(Eq(n, Add(Mul(Var(a), d), Var(b))), Lt(Const(0), Var(b)), Lt(Var(b), d))),
        )
    return f


class Shape:
    """
    A named relation over params, defined by body.

    Args:
        name: Display name
        params: Parameter names; parameter k is x_k of the compiled formula
        body: Defining formula over the params
        oracle: Host predicate on the parameter values, used when the shape is applied
        derive: Given parameter values with None for unknowns, may return
            {position: value} for parameters that follow from the others
    """

    def __init__(
        self,
        name: str,
        params: Sequence[str],
        body: Formula,
        oracle: Optional[Callable[..., bool]] = None,
        derive: Optional[Callable[..., Optional[Dict[int, int]]]] = None,
    ):
        self.name = name
        self.params = tuple(params)
        self.body = body
        self.oracle = oracle
        self.derive = derive
        self._compiled: Optional[DioRelBuilder] = None

    def __repr__(self) -> str:
        return f"Shape({self.name}/{len(self.params)})"

    def compile(self) -> DioRelBuilder:
        if self._compiled is None:
            scope = {p: ("p", k) for k, p in enumerate(self.params)}
            form = _Compiler().formula(self.body, scope, 0)
            self._compiled = DioRelBuilder(form, len(self.params), self.name)
            logger.debug(f"compiled shape {self.name} to {self._compiled.size()} nodes")
        return self._compiled

    def compile_function(self) -> DioFunBuilder:
        """The shape read as a function: first parameter is the output."""
        rel = self.compile()
        return DioFunBuilder(rel.form, len(self.params) - 1, self.name)

    def holds(self, values: Union[Sequence[int], Mapping[str, int]], bound: int, fixed: Optional[Mapping[str, int]] = None) -> bool:
        """
        Evaluate the body at values.

        Existential witnesses that nothing determines are enumerated up to bound;
        values obtained by propagation or from an oracle may be of any size.
        fixed pins existential variables of this shape's own body by name.
        """
        if isinstance(values, Mapping):
            env = dict(values)
        else:
            if len(values) != len(self.params):
                raise ShapeError(f"{self.name} expects {len(self.params)} values, got {len(values)}")
            env = dict(zip(self.params, values))
        return _Evaluator(bound, dict(fixed or {})).holds(self.body, env, True)


Slot = Tuple[str, int]


class _Compiler:
    """Named formulas to de Bruijn formulas; bound variables are ('b', level), parameters ('p', k)."""

    def __init__(self):
        self._counter = itertools.count()

    def fresh(self) -> str:
        return f"#{next(self._counter)}"

    @staticmethod
    def index(slot: Slot, depth: int) -> int:
        kind, k = slot
        return depth - 1 - k if kind == "b" else depth + k

    @staticmethod
    def _bind(scope: Dict[str, Slot], names: Sequence[str], depth: int) -> List[Tuple[str, Optional[Slot]]]:
        """Bind names to the next binder levels in place; returns what they shadowed."""
        saved = [(name, scope.get(name)) for name in names]
        for k, name in enumerate(names):
            scope[name] = ("b", depth + k)
        return saved

    @staticmethod
    def _restore(scope: Dict[str, Slot], saved: List[Tuple[str, Optional[Slot]]]):
        for name, slot in reversed(saved):
            if slot is None:
                del scope[name]
            else:
                scope[name] = slot

    def _lookup(self, scope: Dict[str, Slot], name: str, depth: int) -> int:
        try:
            return self.index(scope[name], depth)
        except KeyError:
            raise ShapeError(f"unbound variable {name!r}")

    def formula(self, f: Formula, scope: Dict[str, Slot], depth: int) -> DioForm:
        f = _desugar(f, self.fresh)
        if isinstance(f, Eq):
            return self._eq(f, scope, depth)
        if isinstance(f, And):
            if not f.parts:
                return self.formula(TrueF(), scope, depth)
            return df_conj([self.formula(p, scope, depth) for p in f.parts])
        if isinstance(f, Or):
            if not f.parts:
                return self.formula(FalseF(), scope, depth)
            return df_disj([self.formula(p, scope, depth) for p in f.parts])
        if isinstance(f, Exists):
            saved = self._bind(scope, f.names, depth)
            body = self.formula(f.body, scope, depth + len(f.names))
            self._restore(scope, saved)
            for _ in f.names:
                body = DfEx(body)
            return body
        if isinstance(f, Apply):
            return self._apply(f, scope, depth)
        if isinstance(f, TrueF):
            return DfEx(DfCst(0, 0))
        if isinstance(f, FalseF):
            return DfEx(DfAnd(DfCst(0, 0), DfCst(0, 1)))
        raise ShapeError(f"cannot compile {f!r}")

    def _flatten(self, t: Term, temps: List[str], defs: List[Formula]) -> str:
        """Name a term, defining fresh temporaries for its compound parts."""
        if isinstance(t, Var):
            return t.name
        name = self.fresh()
        temps.append(name)
        if isinstance(t, Const):
            defs.append(Eq(Var(name), t))
        else:
            a = self._flatten(t.left, temps, defs)
            b = self._flatten(t.right, temps, defs)
            defs.append(Eq(Var(name), type(t)(Var(a), Var(b))))
        return name

    def _eq(self, f: Eq, scope: Dict[str, Slot], depth: int) -> DioForm:
        s, t = f.left, f.right
        if not isinstance(s, Var) and isinstance(t, Var):
            s, t = t, s
        if isinstance(s, Var):
            i = self._lookup(scope, s.name, depth)
            if isinstance(t, Var):
                return DfEq(i, self._lookup(scope, t.name, depth))
            if isinstance(t, Const):
                return DfCst(i, t.n)
            if isinstance(t.left, Var) and isinstance(t.right, Var):
                j = self._lookup(scope, t.left.name, depth)
                k = self._lookup(scope, t.right.name, depth)
                return (DfAdd if isinstance(t, Add) else DfMul)(i, j, k)
        temps: List[str] = []
        defs: List[Formula] = []
        if isinstance(s, Var):
            a = self._flatten(t.left, temps, defs)
            b = self._flatten(t.right, temps, defs)
            main = Eq(s, type(t)(Var(a), Var(b)))
        else:
            a = self._flatten(s, temps, defs)
            if isinstance(t, Const):
                main = Eq(Var(a), t)
            else:
                b = self._flatten(t.left, temps, defs)
                c = self._flatten(t.right, temps, defs)
                main = Eq(Var(a), type(t)(Var(b), Var(c)))
        return self.formula(Exists(temps, And(*defs, main)), scope, depth)

    def _apply(self, f: Apply, scope: Dict[str, Slot], depth: int) -> DioForm:
        temps: List[str] = []
        defs: List[Formula] = []
        names = [self._flatten(a, temps, defs) for a in f.args]
        saved = self._bind(scope, temps, depth)
        depth += len(temps)
        parts = [self.formula(d, scope, depth) for d in defs]
        target = f.target
        if isinstance(target, Shape):
            if len(names) != len(target.params):
                raise ShapeError(f"{target.name} expects {len(target.params)} arguments, got {len(names)}")
            inner_scope = {}
            for p, n in zip(target.params, names):
                if n not in scope:
                    raise ShapeError(f"unbound variable {n!r}")
                inner_scope[p] = scope[n]
            parts.append(self.formula(target.body, inner_scope, depth))
        else:
            rel = target.as_relation() if isinstance(target, DioFunBuilder) else target
            if len(names) != rel.arity:
                raise ShapeError(f"{rel.name} expects {rel.arity} arguments, got {len(names)}")
            prefix = tuple(self._lookup(scope, n, depth) for n in names)
            # free variables of a builder all lie below its arity
            parts.append(rel_rename(Renaming(prefix, depth), rel).form)
        self._restore(scope, saved)
        body = df_conj(parts)
        for _ in temps:
            body = DfEx(body)
        return body


class _Evaluator:
    """Layered bounded evaluation of named formulas with the propagation store."""

    def __init__(self, bound: int, fixed: Dict[str, int]):
        self.bound = bound
        self.fixed = fixed
        self._counter = itertools.count()

    def fresh(self) -> str:
        return f"#{next(self._counter)}"

    def holds(self, f: Formula, env: Dict[str, int], pinned: bool) -> bool:
        f = _desugar(f, self.fresh)
        if isinstance(f, Or):
            return any(self.holds(p, env, pinned) for p in f.parts)
        return self._block(f, env, pinned)

    def _block(self, f: Formula, env: Dict[str, int], pinned: bool) -> bool:
        store = Store()
        scope = {name: store.const(v) for name, v in env.items()}
        deferred = []
        stack = [(f, scope, pinned)]
        while stack:
            node, sc, pin = stack.pop()
            node = _desugar(node, self.fresh)
            if isinstance(node, And):
                stack.extend((p, sc, pin) for p in reversed(node.parts))
            elif isinstance(node, Exists):
                inner = dict(sc)
                for name in node.names:
                    if pin and name in self.fixed:
                        inner[name] = store.cell(self.fixed[name], self.fixed[name])
                    else:
                        inner[name] = store.cell(0, None, self.bound)
                stack.append((node.body, inner, pin))
            elif isinstance(node, Eq):
                store.post(CopyProp(self._term(store, node.left, sc), self._term(store, node.right, sc)))
            elif isinstance(node, Apply):
                cells = [self._term(store, a, sc) for a in node.args]
                target = node.target
                if isinstance(target, Shape):
                    if len(cells) != len(target.params):
                        raise ShapeError(f"{target.name} expects {len(target.params)} arguments, got {len(cells)}")
                    if target.oracle is not None:
                        store.post(OracleProp(cells, target.oracle, target.derive, target.name))
                    else:
                        stack.append((target.body, dict(zip(target.params, cells)), False))
                else:
                    deferred.append(("builder", target, cells))
            elif isinstance(node, TrueF):
                continue
            elif isinstance(node, FalseF):
                return False
            else:
                deferred.append(("formula", node, sc, pin))
        for solution in store.solutions(smallest_first=True):
            if all(self._deferred_holds(item, solution) for item in deferred):
                return True
        return False

    def _deferred_holds(self, item, solution: List[int]) -> bool:
        if item[0] == "builder":
            _, target, cells = item
            rel = target.as_relation() if isinstance(target, DioFunBuilder) else target
            return bool(rel.holds_bounded([solution[c] for c in cells], self.bound))
        _, node, sc, pin = item
        return self.holds(node, {name: solution[c] for name, c in sc.items()}, pin)

    def _term(self, store: Store, t: Term, sc: Dict[str, int]) -> int:
        if isinstance(t, Var):
            try:
                return sc[t.name]
            except KeyError:
                raise ShapeError(f"unbound variable {t.name!r}")
        if isinstance(t, Const):
            return store.const(t.n)
        a = self._term(store, t.left, sc)
        b = self._term(store, t.right, sc)
        out = store.cell(0, None, self.bound)
        store.post((AddProp if isinstance(t, Add) else MulProp)(out, a, b))
        return out
