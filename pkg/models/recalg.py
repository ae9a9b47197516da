"""
Arity-typed mu-recursive algorithms and their cost-aware evaluation.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from utils.errors import ShapeError

logger = logging.getLogger(__name__)


class RecAlg:
    """Base of the recursive-algorithm constructors; `arity` is the input count."""

    arity: int

    def size(self) -> int:
        """Node count."""
        total, stack = 0, [self]
        while stack:
            node = stack.pop()
            total += 1
            stack.extend(node.children())
        return total

    def children(self) -> Tuple["RecAlg", ...]:
        return ()


@dataclass(frozen=True)
class Cst(RecAlg):
    n: int

    @property
    def arity(self) -> int:
        return 0


@dataclass(frozen=True)
class Zero(RecAlg):
    @property
    def arity(self) -> int:
        return 1


@dataclass(frozen=True)
class Succ(RecAlg):
    @property
    def arity(self) -> int:
        return 1


@dataclass(frozen=True)
class Proj(RecAlg):
    """Projection onto input p of k."""
    k: int
    p: int

    def __post_init__(self):
        if not 0 <= self.p < self.k:
            raise ShapeError(f"projection index {self.p} out of arity {self.k}")

    @property
    def arity(self) -> int:
        return self.k


@dataclass(frozen=True)
class Comp(RecAlg):
    """f applied to the results of gs, each g taking the `i` inputs."""
    f: RecAlg
    gs: Tuple[RecAlg, ...]
    i: int

    def __post_init__(self):
        object.__setattr__(self, "gs", tuple(self.gs))
        if self.f.arity != len(self.gs):
            raise ShapeError(f"composition of an arity-{self.f.arity} function with {len(self.gs)} arguments")
        for g in self.gs:
            if g.arity != self.i:
                raise ShapeError(f"composed argument has arity {g.arity}, expected {self.i}")

    @property
    def arity(self) -> int:
        return self.i

    def children(self):
        return (self.f,) + self.gs


@dataclass(frozen=True)
class Rec(RecAlg):
    """Primitive recursion on the first input: f for 0, g(n, rec(n, v), v) for 1+n."""
    f: RecAlg
    g: RecAlg

    def __post_init__(self):
        if self.g.arity != 2 + self.f.arity:
            raise ShapeError(f"recursion step has arity {self.g.arity}, expected {2 + self.f.arity}")

    @property
    def arity(self) -> int:
        return 1 + self.f.arity

    def children(self):
        return (self.f, self.g)


@dataclass(frozen=True)
class Min(RecAlg):
    """Least x with f(x, v) = 0 and f defined and nonzero below x."""
    f: RecAlg

    def __post_init__(self):
        if self.f.arity < 1:
            raise ShapeError("minimization needs a function of arity at least 1")

    @property
    def arity(self) -> int:
        return self.f.arity - 1

    def children(self):
        return (self.f,)


def has_min(f: RecAlg) -> bool:
    """True when f contains a minimization node."""
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Min):
            return True
        stack.extend(node.children())
    return False


def _check_inputs(f: RecAlg, v: Sequence[int]):
    if len(v) != f.arity:
        raise ShapeError(f"{len(v)} inputs for an algorithm of arity {f.arity}")


def ra_eval(f: RecAlg, v: Sequence[int], fuel: int) -> Optional[int]:
    """
    Cost-aware evaluation: the value x with f(v) = x at cost at most fuel.

    Costs follow the step-indexed discipline: a node evaluated at 1+c runs its
    subterms at c (composition arguments at c-1-j, minimization candidate p at c-p).

    Args:
        f: Algorithm
        v: Inputs, as many as f.arity
        fuel: Step index

    Returns:
        The result, or None when fuel does not suffice
    """
    _check_inputs(f, v)
    return _eval(f, tuple(v), fuel)


def _eval(f: RecAlg, v: Tuple[int, ...], c: int) -> Optional[int]:
    if c < 1:
        return None
    if isinstance(f, Cst):
        return f.n
    if isinstance(f, Zero):
        return 0
    if isinstance(f, Succ):
        return v[0] + 1
    if isinstance(f, Proj):
        return v[f.p]
    if isinstance(f, Comp):
        k = len(f.gs)
        if c - 1 - k < 1:
            return None
        w = []
        for j, g in enumerate(f.gs):
            x = _eval(g, v, c - 2 - j)
            if x is None:
                return None
            w.append(x)
        return _eval(f.f, tuple(w), c - 1)
    if isinstance(f, Rec):
        n, rest = v[0], v[1:]
        if c - n < 1:
            return None
        y = _eval(f.f, rest, c - n - 1)
        for j in range(n):
            if y is None:
                return None
            y = _eval(f.g, (j, y) + rest, c - n + j)
        return y
    if isinstance(f, Min):
        return _search(f.f, v, c, 0)
    raise ShapeError(f"unknown recursive algorithm node {f!r}")


def _search(f: RecAlg, v: Tuple[int, ...], c: int, m: int) -> Optional[int]:
    """Minimization at step index c, first candidate m."""
    x = m
    while c - (x - m) >= 1:
        r = _eval(f, (x,) + v, c - (x - m) - 1)
        if r is None:
            return None
        if r == 0:
            return x
        x += 1
    return None


def ra_relational(f: RecAlg, v: Sequence[int], x: int, budget: int) -> Optional[bool]:
    """
    Decide the relational judgement f(v) = x by plain evaluation with a work budget.

    Independent of the step-index discipline of ra_eval: every node visit costs one
    unit of budget.

    Returns:
        True or False when evaluation finishes within budget, None otherwise
    """
    _check_inputs(f, v)
    counter = [budget]
    try:
        return _relational(f, tuple(v), counter) == x
    except _BudgetExhausted:
        return None


class _BudgetExhausted(Exception):
    pass


def _relational(f: RecAlg, v: Tuple[int, ...], counter) -> int:
    counter[0] -= 1
    if counter[0] < 0:
        raise _BudgetExhausted()
    if isinstance(f, Cst):
        return f.n
    if isinstance(f, Zero):
        return 0
    if isinstance(f, Succ):
        return v[0] + 1
    if isinstance(f, Proj):
        return v[f.p]
    if isinstance(f, Comp):
        w = tuple(_relational(g, v, counter) for g in f.gs)
        return _relational(f.f, w, counter)
    if isinstance(f, Rec):
        n, rest = v[0], v[1:]
        y = _relational(f.f, rest, counter)
        for j in range(n):
            y = _relational(f.g, (j, y) + rest, counter)
        return y
    if isinstance(f, Min):
        x = 0
        while _relational(f.f, (x,) + v, counter) != 0:
            x += 1
        return x
    raise ShapeError(f"unknown recursive algorithm node {f!r}")
