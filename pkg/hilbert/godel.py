"""
The Goedel encoding of register vectors as a Diophantine function.
"""
import logging

import gmpy2

from dio.form import DioFunBuilder
from dio.shapes import fun_cst, fun_mult, fun_var
from hilbert.expo import fun_expo
from numtheory.primes import prime_streams

logger = logging.getLogger(__name__)


def godel_exp_formula(n: int) -> DioFunBuilder:
    """
    nu -> q_1^nu(0) * ... * q_n^nu(n-1), the register primes hard-coded.

    Register 0 of a machine without self loops is the spare, so input i sits in
    register 1+i.
    """
    streams = prime_streams()
    fun = fun_cst(1)
    for i in range(n):
        fun = fun_mult(fun, fun_expo(fun_cst(streams.q_at(i + 1)), fun_var(i)))
    logger.debug(f"goedel exponent formula for {n} registers: size {fun.size()}")
    return DioFunBuilder(fun.form, n, f"godel{n}")


def godel_exp_value(values) -> int:
    """Host value of godel_exp_formula(len(values)) at values."""
    streams = prime_streams()
    code = gmpy2.mpz(1)
    for i, v in enumerate(values):
        code *= gmpy2.mpz(streams.q_at(i + 1)) ** v
    return int(code)
