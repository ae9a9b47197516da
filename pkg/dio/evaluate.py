"""
Bounded semantics of Diophantine logic.

df_eval_bounded decides A under nu with every existential witness drawn from
[0, B]. Consecutive existentials and existentials nested under conjunctions are
lifted into one block whose atoms become propagators over the witnesses; the
block's solutions are enumerated and disjunctions below it are decided per
solution, each as a block of its own.
"""
import logging
from dataclasses import dataclass
from typing import List, Tuple

from dio.form import DfAdd, DfAnd, DfCst, DfEq, DfEx, DfMul, DfOr, DioForm, Valuation
from solver.propagate import AddProp, CopyProp, MulProp, Store

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundedTruth:
    """True, or FalseUpTo(bound): no witnesses up to bound make the formula true."""
    holds: bool
    bound: int

    def __bool__(self) -> bool:
        return self.holds

    def __repr__(self) -> str:
        return "True" if self.holds else f"FalseUpTo({self.bound})"


def false_up_to(bound: int) -> BoundedTruth:
    return BoundedTruth(False, bound)


def df_eval_bounded(a: DioForm, nu: Valuation, bound: int) -> BoundedTruth:
    """
    Decide a under nu with existential witnesses bounded by bound.

    Args:
        a: Formula
        nu: Valuation of the free variables
        bound: Largest witness value tried for each existential

    Returns:
        BoundedTruth(True, bound) or FalseUpTo(bound)
    """
    return BoundedTruth(_holds(a, nu, bound), bound)


def _holds(a: DioForm, nu: Valuation, bound: int) -> bool:
    if isinstance(a, DfOr):
        # left spines of disjunctions are walked without recursion
        rights = []
        while isinstance(a, DfOr):
            rights.append(a.right)
            a = a.left
        if _block_holds(a, nu, bound):
            return True
        return any(_holds(r, nu, bound) for r in reversed(rights))
    return _block_holds(a, nu, bound)


def _block_holds(a: DioForm, nu: Valuation, bound: int) -> bool:
    store = Store()
    outer = {}

    def cell(env: Tuple[int, ...], i: int) -> int:
        if i < len(env):
            return env[len(env) - 1 - i]
        j = i - len(env)
        if j not in outer:
            outer[j] = store.const(nu(j))
        return outer[j]

    deferred: List[Tuple[DioForm, Tuple[int, ...]]] = []
    stack: List[Tuple[DioForm, Tuple[int, ...]]] = [(a, ())]
    while stack:
        node, env = stack.pop()
        if isinstance(node, DfEx):
            w = store.cell(0, bound)
            stack.append((node.body, env + (w,)))
        elif isinstance(node, DfAnd):
            stack.append((node.right, env))
            stack.append((node.left, env))
        elif isinstance(node, DfCst):
            store.post(CopyProp(cell(env, node.i), store.const(node.n)))
        elif isinstance(node, DfEq):
            store.post(CopyProp(cell(env, node.i), cell(env, node.j)))
        elif isinstance(node, DfAdd):
            store.post(AddProp(cell(env, node.i), cell(env, node.j), cell(env, node.k)))
        elif isinstance(node, DfMul):
            store.post(MulProp(cell(env, node.i), cell(env, node.j), cell(env, node.k)))
        else:
            deferred.append((node, env))
    for solution in store.solutions(smallest_first=True):
        if all(_holds(f, _extend(nu, env, solution), bound) for f, env in deferred):
            return True
    return False


def _extend(nu: Valuation, env: Tuple[int, ...], solution: List[int]) -> Valuation:
    """nu lifted by the witnesses of env, innermost first."""
    return Valuation(tuple(solution[c] for c in reversed(env)) + nu.prefix, nu.default)
