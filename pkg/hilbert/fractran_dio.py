"""
FRACTRAN step, stop and halting predicates as Diophantine relations.

step(x, y) for [p/q :: Q'] is q*y = p*x, or q does not divide p*x and
step_Q'(x, y); the empty program has no step. stop(x) says that no fraction
applies. Halting from f(nu) composes the reflexive-transitive closure of step
with stop.
"""
import logging

from dio.closure import rt_closure_formula
from dio.dsl import And, Apply, Eq, Exists, FalseF, Formula, NDivides, Or, Shape, V, Var
from dio.form import DioFunBuilder, DioRelBuilder
from models.fractran import FractranProg, fractran_run
from models.outcome import Halted

logger = logging.getLogger(__name__)


def fractran_step_shape(prog: FractranProg) -> Shape:
    """(y, x): x steps to y."""
    prog.require_regular()
    y, x = V("y", "x")
    body: Formula = FalseF()
    for p, q in reversed(prog.fractions):
        body = Or(Eq(q * y, p * x), And(NDivides(q, p * x), body))
    return Shape("fractran_step", ("y", "x"), body)


def fractran_step_formula(prog: FractranProg) -> DioRelBuilder:
    """
    Relation over (x_1, x_0) = (current, next).

    Raises:
        RegularityError: prog has a zero denominator
    """
    return fractran_step_shape(prog).compile()


def fractran_stop_shape(prog: FractranProg) -> Shape:
    prog.require_regular()
    (x,) = V("x")
    return Shape("fractran_stop", ("x",), And(*(NDivides(q, p * x) for p, q in prog.fractions)))


def fractran_stop_formula(prog: FractranProg) -> DioRelBuilder:
    """Relation over x_0: no fraction of prog applies."""
    return fractran_stop_shape(prog).compile()


def fractran_halting_formula(prog: FractranProg, start: DioFunBuilder) -> DioRelBuilder:
    """
    nu -> prog halts when started from start(nu).

    The result is a relation over the inputs of start.
    """
    step = fractran_step_formula(prog)
    stop = fractran_stop_formula(prog)
    closure = rt_closure_formula(step)
    params = tuple(f"p{i}" for i in range(start.arity))
    s, y = V("s", "y")
    body = Exists(
        ("s", "y"),
        And(Apply(start, (s,) + tuple(Var(p) for p in params)), Apply(closure, (y, s)), Apply(stop, (y,))),
    )
    rel = Shape("fractran_halting", params, body).compile()
    logger.info(f"halting formula for {len(prog)} fractions: size {rel.size()}")
    return rel


def fractran_halting_host(prog: FractranProg, x: int, fuel: int) -> bool:
    """prog halts from x within fuel steps."""
    outcome = fractran_run(prog, x, fuel)
    if not isinstance(outcome, Halted):
        logger.debug(f"no halt from {x} within {fuel} steps")
    return isinstance(outcome, Halted)
