"""
Single Diophantine equations as recursive algorithms.

ra_test decides, totally, whether a code x unpairs to a solution; ra_find wraps
it in one unbounded minimization, so the equation is solvable at v exactly when
ra_find halts at v.
"""
import logging
from typing import Dict, List, Optional

from dio.single import DioPoly, DioSingle, PAdd, PConst, PMul, PPar, PVar, single_params, single_vars
from models.recalg import Min, Proj, RecAlg
from murec.gadgets import compose, ra_add, ra_const, ra_eq, ra_mult
from murec.pairing import ra_project
from utils.errors import ShapeError

logger = logging.getLogger(__name__)


def _leaf_alg(node: DioPoly, m: int, n: int) -> RecAlg:
    k = m + n
    if isinstance(node, PConst):
        return ra_const(node.n, k)
    if isinstance(node, PVar):
        if node.u >= m:
            raise ShapeError(f"variable {node.u} outside 0 .. {m - 1}")
        return Proj(k, node.u)
    if node.i >= n:
        raise ShapeError(f"parameter {node.i} outside 0 .. {n - 1}")
    return Proj(k, m + node.i)


def ra_eval_poly(p: DioPoly, m: int, n: int) -> RecAlg:
    """
    Algorithm of arity m+n computing p on the inputs w ++ v.

    Args:
        p: Polynomial over variables below m and parameters below n
        m: Variable count
        n: Parameter count

    Raises:
        ShapeError: p mentions a variable or parameter out of range
    """
    memo: Dict[int, RecAlg] = {}
    stack = [p]
    while stack:
        node = stack[-1]
        if id(node) in memo:
            stack.pop()
            continue
        if isinstance(node, (PAdd, PMul)):
            pending = [c for c in (node.left, node.right) if id(c) not in memo]
            if pending:
                stack.extend(pending)
                continue
            op = ra_add() if isinstance(node, PAdd) else ra_mult()
            memo[id(node)] = compose(op, memo[id(node.left)], memo[id(node.right)])
        else:
            memo[id(node)] = _leaf_alg(node, m, n)
        stack.pop()
    return memo[id(p)]


def _dims(e: DioSingle, m: Optional[int], n: Optional[int]):
    if m is None:
        m = max(single_vars(e), default=-1) + 1
    if n is None:
        n = max(single_params(e), default=-1) + 1
    return m, n


def ra_test(e: DioSingle, m: Optional[int] = None, n: Optional[int] = None) -> RecAlg:
    """
    Total algorithm of arity 1+n returning 0 on (x, v) iff pair_pr(x, m) solves e at v.

    Args:
        e: Equation over variables below m and parameters below n
        m: Variable count, defaults to one past the largest variable
        n: Parameter count, defaults to one past the largest parameter
    """
    m, n = _dims(e, m, n)
    code = Proj(1 + n, 0)
    args: List[RecAlg] = [compose(ra_project(j, m), code) for j in range(m)]
    args += [Proj(1 + n, 1 + i) for i in range(n)]
    sides = [compose(ra_eval_poly(side, m, n), *args, arity=1 + n) for side in (e.lhs, e.rhs)]
    return compose(ra_eq(), *sides)


def ra_find(e: DioSingle, m: Optional[int] = None, n: Optional[int] = None) -> RecAlg:
    """
    Algorithm of arity n halting at v iff e has a solution at v.

    The result is the least code of a solution.
    """
    m, n = _dims(e, m, n)
    alg = Min(ra_test(e, m, n))
    logger.info(f"search algorithm over {m} variables and {n} parameters: size {alg.size()}")
    return alg
