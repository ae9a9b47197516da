"""
Cross-check of the reduction chain formula -> constraints -> single equation.

For a formula A and a valuation, bounded truth of A must agree with bounded
satisfiability of its constraint list, the existential witnesses bounded like
df_eval_bounded and every helper variable left to propagation, and with bounded
satisfiability of its single equation. The single equation is also evaluated at
the constraint witness, and at a perturbation of it that breaks a constraint.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence

import numpy as np

import config
from dio.elem import cstrs_eval, elem_used_vars, form_to_elem
from dio.evaluate import df_eval_bounded
from dio.form import DfAdd, DfAnd, DfCst, DfEq, DfEx, DfMul, DfOr, DioForm, Valuation, df_size
from dio.single import DioSingle, elem_to_single, single_eval
from solver.search import found, sat_cstrs, sat_single

logger = logging.getLogger(__name__)


def random_form(rng: np.random.Generator, size: int, nfree: int, max_const: int = 5, depth: int = 0) -> DioForm:
    """
    Formula with at most size nodes whose free variables are below nfree.

    Args:
        nfree: Number of free variables, at least 1
        depth: Number of enclosing existentials
    """
    scope = nfree + depth
    if size <= 1:
        kind = int(rng.integers(4))
        pick = lambda: int(rng.integers(scope))
        if kind == 0:
            return DfCst(pick(), int(rng.integers(max_const + 1)))
        if kind == 1:
            return DfEq(pick(), pick())
        return (DfAdd if kind == 2 else DfMul)(pick(), pick(), pick())
    kind = 2 if size == 2 else int(rng.integers(3))
    if kind == 2:
        return DfEx(random_form(rng, size - 1, nfree, max_const, depth + 1))
    left = int(rng.integers(1, size - 1))
    right = size - 1 - left
    node = DfAnd if kind == 0 else DfOr
    return node(random_form(rng, left, nfree, max_const, depth), random_form(rng, right, nfree, max_const, depth))


@dataclass(frozen=True)
class ChainVerdict:
    form_holds: bool
    elem_holds: bool
    single_holds: Optional[bool]
    single_at_witness: Optional[bool]
    single_rejects_perturbation: Optional[bool]
    width_ok: bool

    @property
    def consistent(self) -> bool:
        return (
            self.form_holds == self.elem_holds
            and self.single_holds in (None, self.elem_holds)
            and self.single_at_witness in (None, True)
            and self.single_rejects_perturbation in (None, True)
            and self.width_ok
        )


def single_box_holds(e: DioSingle, nu: Sequence[int], tops: Mapping[int, int], shards: Optional[int] = None) -> Optional[bool]:
    """
    Satisfiability of e with each variable u in [0, tops[u]].

    Returns:
        None when the box has more points than config.SOLVER["single_check_points"]
    """
    points = math.prod(top + 1 for top in tops.values())
    if points > config.SOLVER["single_check_points"]:
        logger.debug(f"single equation box of {points} points left unchecked")
        return None
    return found(sat_single(e, nu, max(tops.values(), default=0), shards, bounds=tops))


def chain_check(a: DioForm, nu: Sequence[int], bound: int, shards: Optional[int] = None) -> ChainVerdict:
    """
    Compare the three stages of the chain on one instance.

    The single equation is searched over [0, phi(u)] per variable when the
    constraints have a witness phi, and over [0, bound] otherwise; both boxes lie
    inside the space searched for the constraints.

    Args:
        a: Formula whose free variables are covered by nu
        nu: Values of the free variables
        bound: Witness bound of every existential
    """
    form_holds = bool(df_eval_bounded(a, Valuation.of(nu), bound))
    rep = form_to_elem(a)
    cs = rep.with_ref_zero()
    used = elem_used_vars(cs)
    limits: Dict[int, Optional[int]] = {u: None for u in used}
    limits.update({w: bound for w in rep.witnesses})
    phi = sat_cstrs(cs, nu, bound, bounds=limits, order=rep.witnesses, shards=shards)
    elem_holds = found(phi)
    e = elem_to_single(cs)
    at_witness = rejects = None
    if elem_holds:
        single_holds = single_box_holds(e, nu, {u: phi[u] for u in used}, shards)
        at_witness = single_eval(e, nu, phi)
        broken = dict(phi)
        broken[rep.ref] = phi[rep.ref] + 1
        rejects = not cstrs_eval(cs, Valuation.of(nu), broken) and not single_eval(e, nu, broken)
    else:
        single_holds = single_box_holds(e, nu, {u: bound for u in used}, shards)
    verdict = ChainVerdict(form_holds, elem_holds, single_holds, at_witness, rejects, rep.width <= 8 * df_size(a))
    if not verdict.consistent:
        logger.warning(f"chain mismatch at {nu} with bound {bound}: {verdict}")
    return verdict
