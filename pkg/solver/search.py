"""
Bounded satisfiability oracles.

sat_cstrs searches constraint lists with the propagation store; sat_single and
sat_z scan hypercubes, the trailing coordinates vectorized as numpy object
arrays so that arithmetic stays exact. All searches return the lexicographically
least witness; sharding splits the leading coordinate and min-reduces the
per-shard answers, so the result does not depend on the number of shards.
"""
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

import config
from dio.elem import CAdd, CCst, CPar, CVar, DioCstr, elem_used_vars
from dio.form import Valuation
from dio.single import LEAVES, DioPoly, DioSingle, PAdd, PConst, PPar, single_vars
from solver.propagate import AddProp, CopyProp, MulProp, Store
from utils.errors import ShapeError

logger = logging.getLogger(__name__)

Assignment = Dict[int, int]


@dataclass(frozen=True)
class NoneUpTo:
    """No witness with every coordinate within the bound."""
    bound: int

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return f"NoneUpTo({self.bound})"


SatResult = Union[Assignment, NoneUpTo]


def found(result) -> bool:
    """True for a witness (the empty assignment included)."""
    return not isinstance(result, NoneUpTo)


def _as_valuation(nu) -> Callable[[int], int]:
    if nu is None:
        return Valuation()
    return nu if callable(nu) else Valuation.of(nu)


def _split(lo: int, hi: int, k: int) -> List[Tuple[int, int]]:
    """At most k contiguous non-empty ranges covering [lo, hi]."""
    total = hi - lo + 1
    k = max(1, min(k, total))
    step, extra = divmod(total, k)
    out, at = [], lo
    for s in range(k):
        size = step + (1 if s < extra else 0)
        out.append((at, at + size - 1))
        at += size
    return out


def _run_shards(jobs: Sequence[Callable[[], Optional[Assignment]]]) -> List[Optional[Assignment]]:
    if len(jobs) == 1:
        return [jobs[0]()]
    with ThreadPoolExecutor(max_workers=len(jobs)) as pool:
        return list(pool.map(lambda job: job(), jobs))


def sat_cstrs(
    cs: Sequence[DioCstr],
    nu,
    bound: int,
    bounds: Optional[Mapping[int, Optional[int]]] = None,
    order: Optional[Sequence[int]] = None,
    shards: Optional[int] = None,
) -> SatResult:
    """
    Least assignment of the used variables satisfying every constraint.

    Args:
        cs: Constraint list
        nu: Parameter valuation (callable or sequence)
        bound: Default upper bound of every variable
        bounds: Per-variable upper bounds overriding bound; None means unbounded
        order: Variables compared (and branched) first; the rest follow by index
        shards: Number of slices of the leading variable searched independently

    Returns:
        {u: value} for the least witness in the order above, or NoneUpTo(bound)
    """
    par = _as_valuation(nu)
    used = elem_used_vars(cs)
    if not used:
        return {}
    first = [u for u in (order or ()) if u in set(used)]
    sequence = first + [u for u in used if u not in set(first)]
    limits = {u: (bounds.get(u, bound) if bounds is not None else bound) for u in used}
    lead = sequence[0]
    lead_top = limits[lead] if limits[lead] is not None else config.SOLVER["value_cap"]
    ranges = _split(0, lead_top, shards or config.SOLVER["shards"])
    jobs = [lambda r=r: _sat_cstrs_range(cs, par, limits, sequence, r) for r in ranges]
    witnesses = [w for w in _run_shards(jobs) if w is not None]
    if not witnesses:
        logger.debug(f"no witness for {len(cs)} constraints up to {bound}")
        return NoneUpTo(bound)
    return min(witnesses, key=lambda w: tuple(w[u] for u in sequence))


def _sat_cstrs_range(
    cs: Sequence[DioCstr],
    par: Callable[[int], int],
    limits: Mapping[int, Optional[int]],
    sequence: Sequence[int],
    lead_range: Tuple[int, int],
) -> Optional[Assignment]:
    store = Store()
    cell = {}
    for u in sequence:
        if u == sequence[0]:
            cell[u] = store.cell(lead_range[0], lead_range[1])
        else:
            cell[u] = store.cell(0, limits[u])
    for c in cs:
        if isinstance(c, CCst):
            store.post(CopyProp(cell[c.u], store.const(c.n)))
        elif isinstance(c, CVar):
            store.post(CopyProp(cell[c.u], cell[c.v]))
        elif isinstance(c, CPar):
            store.post(CopyProp(cell[c.u], store.const(par(c.i))))
        elif isinstance(c, CAdd):
            store.post(AddProp(cell[c.u], cell[c.v], cell[c.w]))
        else:
            store.post(MulProp(cell[c.u], cell[c.v], cell[c.w]))
    solution = store.first(order=[cell[u] for u in sequence])
    if solution is None:
        return None
    return {u: solution[cell[u]] for u in sequence}


def _vec_eval(p: DioPoly, par: Callable[[int], int], columns: Mapping[int, object]):
    """Evaluate p with variables bound to scalars or numpy object arrays."""
    memo: Dict[int, object] = {}
    stack = [p]
    while stack:
        node = stack[-1]
        if id(node) in memo:
            stack.pop()
            continue
        if isinstance(node, LEAVES):
            if isinstance(node, PConst):
                memo[id(node)] = node.n
            elif isinstance(node, PPar):
                memo[id(node)] = par(node.i)
            else:
                try:
                    memo[id(node)] = columns[node.u]
                except KeyError:
                    raise ShapeError(f"variable {node.u} outside the search space")
            stack.pop()
            continue
        pending = [k for k in (node.left, node.right) if id(k) not in memo]
        if pending:
            stack.extend(pending)
            continue
        l, r = memo[id(node.left)], memo[id(node.right)]
        memo[id(node)] = l + r if isinstance(node, PAdd) else l * r
        stack.pop()
    return memo[id(p)]


def _grid_search(
    lhs: DioPoly,
    rhs: DioPoly,
    names: Sequence[int],
    domains: Sequence[Sequence[int]],
    par: Callable[[int], int],
    shards: int,
) -> Optional[Assignment]:
    """Least point of the box domains[0] x ... x domains[k-1], in lexicographic order, where lhs equals rhs."""
    k = len(names)
    if k == 0:
        return {} if _vec_eval(lhs, par, {}) == _vec_eval(rhs, par, {}) else None
    inner = min(k, config.SOLVER["chunk_dims"])
    outer = k - inner
    grid = np.array(list(itertools.product(*domains[outer:])), dtype=object).T
    size = grid.shape[1]

    def scan(first_values: Sequence[int]) -> Optional[Assignment]:
        heads = itertools.product(first_values, *domains[1:outer]) if outer else [()]
        for head in heads:
            columns = {names[j]: head[j] for j in range(outer)}
            columns.update({names[outer + j]: grid[j] for j in range(inner)})
            eq = np.broadcast_to(np.asarray(_vec_eval(lhs, par, columns) == _vec_eval(rhs, par, columns), dtype=bool), (size,))
            hits = np.flatnonzero(eq)
            if hits.size:
                at = int(hits[0])
                point = list(head) + [grid[j][at] for j in range(inner)]
                return {u: int(v) for u, v in zip(names, point)}
        return None

    if outer == 0:
        return scan(())
    lead = domains[0]
    slices = _split(0, len(lead) - 1, shards)
    jobs = [lambda s=s: scan(lead[s[0]:s[1] + 1]) for s in slices]
    witnesses = [w for w in _run_shards(jobs) if w is not None]
    if not witnesses:
        return None
    return min(witnesses, key=lambda w: tuple(w[u] for u in names))


def sat_single(
    e: DioSingle,
    nu,
    bound: int,
    shards: Optional[int] = None,
    bounds: Optional[Mapping[int, int]] = None,
) -> SatResult:
    """
    Least witness of e over [0, bound]^vars(e), or NoneUpTo(bound).

    Args:
        bounds: Per-variable upper bounds replacing bound
    """
    names = single_vars(e)
    bounds = bounds or {}
    domains = [range(bounds.get(u, bound) + 1) for u in names]
    w = _grid_search(e.lhs, e.rhs, names, domains, _as_valuation(nu), shards or config.SOLVER["shards"])
    return NoneUpTo(bound) if w is None else w


def _no_params(i: int) -> int:
    raise ShapeError(f"parameter x{i} in a parameter-free polynomial")


def sat_z(p, bound: int, shards: Optional[int] = None) -> Union[List[int], NoneUpTo]:
    """
    Least root of an integer polynomial over [-bound, bound]^nvars.

    Args:
        p: Polynomial with attributes poly (signed constants allowed) and nvars

    Returns:
        Values of variables 0 .. nvars-1, or NoneUpTo(bound)
    """
    names = list(range(p.nvars))
    domain = list(range(-bound, bound + 1))
    w = _grid_search(p.poly, PConst(0), names, [domain] * len(names), _no_params, shards or config.SOLVER["shards"])
    if w is None:
        return NoneUpTo(bound)
    return [w[u] for u in names]
