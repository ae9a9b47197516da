import itertools

import pytest

from dio.elem import CAdd, CCst, CMul, CPar, CVar, cstrs_eval, elem_used_vars
from dio.form import Valuation
from dio.single import DioSingle, PAdd, PConst, PMul, PPar, PVar
from hilbert.h10z import H10ZPoly
from solver.propagate import AddProp, CopyProp, MulProp, OracleProp, Store
from solver.search import NoneUpTo, found, sat_cstrs, sat_single, sat_z
from utils.errors import ShapeError


def random_cstrs(rng, nvars: int, count: int):
    out = []
    for _ in range(count):
        u, v, w = (int(x) for x in rng.integers(0, nvars, size=3))
        kind = int(rng.integers(5))
        if kind == 0:
            out.append(CCst(u, int(rng.integers(0, 4))))
        elif kind == 1:
            out.append(CVar(u, v))
        elif kind == 2:
            out.append(CPar(u, int(rng.integers(0, 2))))
        elif kind == 3:
            out.append(CAdd(u, v, w))
        else:
            out.append(CMul(u, v, w))
    return out


def brute_cstrs(cs, nu, bound):
    used = elem_used_vars(cs)
    for point in itertools.product(range(bound + 1), repeat=len(used)):
        phi = dict(zip(used, point))
        if cstrs_eval(cs, nu, phi):
            return phi
    return NoneUpTo(bound)


class TestStore:
    def test_addition_example(self):
        s = Store()
        x, y = s.cell(hi=5), s.cell(hi=5)
        s.post(AddProp(s.const(7), x, y))
        assert next(s.solutions())[:2] == [2, 5]

    def test_enumerates_in_order(self):
        s = Store()
        x, y = s.cell(hi=3), s.cell(hi=3)
        s.post(AddProp(s.const(3), x, y))
        assert [sol[:2] for sol in s.solutions()] == [[0, 3], [1, 2], [2, 1], [3, 0]]

    def test_propagation_fixes_products(self):
        s = Store()
        x = s.cell()
        s.post(MulProp(s.const(12), x, s.const(4)))
        assert s.first()[x] == 3
        s2 = Store()
        y = s2.cell()
        s2.post(MulProp(s2.const(13), y, s2.const(4)))
        assert s2.first() is None

    def test_copy_and_oracle(self):
        s = Store()
        x, y = s.cell(hi=9), s.cell(hi=9)
        s.post(CopyProp(x, y))
        s.post(OracleProp([x], lambda v: v % 4 == 3))
        assert [sol[x] for sol in s.solutions()] == [3, 7]

    def test_oracle_derives(self):
        s = Store()
        x, y = s.cell(), s.cell()
        s.post(CopyProp(x, s.const(5)))
        s.post(OracleProp([y, x], lambda a, b: a == b * b, lambda a, b: {0: b * b} if a is None and b is not None else None))
        assert s.first()[y] == 25

    def test_limit_caps_branching(self):
        s = Store()
        x = s.cell(limit=3)
        s.post(OracleProp([x], lambda v: v == 5))
        assert s.first() is None


class TestConstraints:
    def test_examples(self):
        cs = [CAdd(0, 1, 2), CPar(0, 0)]
        assert sat_cstrs(cs, [5], 5) == {0: 5, 1: 0, 2: 5}
        assert sat_cstrs(cs, [6], 5) == NoneUpTo(5)
        assert sat_cstrs(cs, [6], 5, bounds={0: None}) == {0: 6, 1: 1, 2: 5}
        assert sat_cstrs(cs, [5], 5, order=[2]) == {0: 5, 1: 5, 2: 0}

    def test_products_and_empty(self):
        assert sat_cstrs([CMul(0, 1, 1), CCst(0, 9)], None, 9) == {0: 9, 1: 3}
        assert sat_cstrs([], None, 3) == {}
        assert found({}) and not found(NoneUpTo(3))
        assert repr(NoneUpTo(3)) == "NoneUpTo(3)"

    def test_against_brute_force(self, rng):
        for _ in range(200):
            cs = random_cstrs(rng, 4, int(rng.integers(1, 5)))
            nu = Valuation.of([int(x) for x in rng.integers(0, 4, size=2)])
            assert sat_cstrs(cs, nu, 3) == brute_cstrs(cs, nu, 3), cs

    def test_sharding_invariance(self, rng):
        for _ in range(100):
            cs = random_cstrs(rng, 4, int(rng.integers(1, 5)))
            nu = [int(x) for x in rng.integers(0, 4, size=2)]
            expected = sat_cstrs(cs, nu, 4, shards=1)
            for shards in (2, 3, 7):
                assert sat_cstrs(cs, nu, 4, shards=shards) == expected, (cs, shards)


class TestSingle:
    def test_least_witness(self):
        e = DioSingle(PMul(PVar(0), PVar(0)), PAdd(PVar(1), PConst(2)))
        assert sat_single(e, None, 5) == {0: 2, 1: 2}
        assert sat_single(e, None, 5, shards=3) == {0: 2, 1: 2}
        assert sat_single(DioSingle(PAdd(PVar(0), PPar(0)), PConst(5)), [3], 5) == {0: 2}
        assert sat_single(DioSingle(PAdd(PVar(0), PConst(1)), PConst(0)), None, 5) == NoneUpTo(5)

    def test_ground(self):
        assert sat_single(DioSingle(PConst(2), PConst(2)), None, 3) == {}
        assert sat_single(DioSingle(PConst(2), PConst(3)), None, 3) == NoneUpTo(3)

    def test_outer_coordinates(self):
        xs = [PVar(i) for i in range(5)]
        total = PAdd(PAdd(PAdd(xs[0], xs[1]), PAdd(xs[2], xs[3])), xs[4])
        e = DioSingle(total, PConst(7))
        for shards in (1, 2, 4):
            assert sat_single(e, None, 3, shards=shards) == {0: 0, 1: 0, 2: 1, 3: 3, 4: 3}

    def test_sparse_variables(self):
        e = DioSingle(PVar(3), PAdd(PVar(7), PConst(1)))
        assert sat_single(e, None, 4) == {3: 1, 7: 0}

    def test_per_variable_bounds(self):
        assert sat_single(DioSingle(PVar(0), PConst(4)), None, 5) == {0: 4}
        assert sat_single(DioSingle(PVar(0), PConst(4)), None, 5, bounds={0: 3}) == NoneUpTo(5)
        e = DioSingle(PAdd(PVar(0), PVar(1)), PConst(4))
        for shards in (1, 2):
            assert sat_single(e, None, 5, shards=shards, bounds={1: 2}) == {0: 2, 1: 2}


class TestIntegers:
    def test_least_root(self):
        x, y = PVar(0), PVar(1)
        assert sat_z(H10ZPoly(PAdd(PMul(x, x), PConst(-4)), 1), 3) == [-2]
        assert sat_z(H10ZPoly(PAdd(x, y), 2), 2) == [-2, 2]
        assert sat_z(H10ZPoly(PAdd(x, y), 2), 2, shards=3) == [-2, 2]

    def test_no_root(self):
        x = PVar(0)
        assert sat_z(H10ZPoly(PAdd(PMul(x, x), PConst(1)), 1), 3) == NoneUpTo(3)

    def test_parameters_rejected(self):
        with pytest.raises(ShapeError):
            sat_z(H10ZPoly(PAdd(PVar(0), PPar(0)), 1), 2)
