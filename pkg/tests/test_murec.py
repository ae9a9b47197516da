import itertools

import pytest

from dio.single import DioSingle, PAdd, PConst, PMul, PPar, PVar, single_eval
from models.recalg import Proj, has_min, ra_eval
from murec.gadgets import (
    compose,
    ra_add,
    ra_const,
    ra_eq,
    ra_is_zero,
    ra_mult,
    ra_pred,
    ra_sign,
    ra_tri,
    ra_tri_root,
    ra_tsub,
    ra_unpair_fst,
    ra_unpair_snd,
)
from murec.pairing import cantor_pair, cantor_unpair, pair_inj, pair_pr, ra_project, tri, tri_root
from murec.poly import ra_eval_poly, ra_find, ra_test
from utils.errors import DomainError, ShapeError

FUEL = 10**4


def least_code(e: DioSingle, m: int, v, limit: int = 200):
    for x in range(limit):
        if single_eval(e, list(v), pair_pr(x, m)):
            return x
    return None


class TestGadgets:
    @pytest.mark.parametrize(
        "alg, host",
        [
            (ra_add(), lambda x, y: x + y),
            (ra_mult(), lambda x, y: x * y),
            (ra_tsub(), lambda x, y: max(0, x - y)),
            (ra_eq(), lambda x, y: 0 if x == y else 1),
            (ra_const(7, 2), lambda x, y: 7),
        ],
        ids=["add", "mult", "tsub", "eq", "const"],
    )
    def test_binary(self, alg, host):
        assert alg.arity == 2 and not has_min(alg)
        for x, y in itertools.product(range(7), repeat=2):
            assert ra_eval(alg, [x, y], FUEL) == host(x, y), (x, y)

    def test_mult_recurses_on_first_argument(self):
        assert ra_eval(ra_mult(), [0, 50], 20) == 0
        assert ra_eval(ra_mult(), [50, 0], 20) is None
        assert ra_eval(ra_mult(), [50, 0], FUEL) == 0

    @pytest.mark.parametrize(
        "alg, host",
        [
            (ra_pred(), lambda x: max(0, x - 1)),
            (ra_is_zero(), lambda x: int(x == 0)),
            (ra_sign(), lambda x: int(x > 0)),
            (ra_tri(), tri),
            (ra_tri_root(), tri_root),
            (ra_unpair_fst(), lambda x: cantor_unpair(x)[0]),
            (ra_unpair_snd(), lambda x: cantor_unpair(x)[1]),
        ],
        ids=["pred", "is_zero", "sign", "tri", "tri_root", "fst", "snd"],
    )
    def test_unary(self, alg, host):
        assert alg.arity == 1 and not has_min(alg)
        for x in range(25):
            assert ra_eval(alg, [x], FUEL) == host(x), x

    def test_compose(self):
        double = compose(ra_add(), Proj(1, 0), Proj(1, 0))
        assert ra_eval(double, [6], FUEL) == 12
        assert ra_eval(compose(ra_const(3, 0), arity=2), [1, 2], 10) == 3
        with pytest.raises(ShapeError):
            compose(ra_const(3, 0))


class TestPairing:
    def test_triangles(self):
        assert [tri(s) for s in range(5)] == [0, 1, 3, 6, 10]
        for x in range(200):
            s = tri_root(x)
            assert tri(s) <= x < tri(s + 1)

    def test_pair_bijection(self):
        codes = set()
        for a in range(20):
            for b in range(20):
                x = cantor_pair(a, b)
                assert cantor_unpair(x) == (a, b)
                codes.add(x)
        assert set(range(tri(20))) <= codes
        assert cantor_pair(0, 0) == 0 and cantor_pair(1, 0) == 1 and cantor_pair(0, 1) == 2

    def test_vectors(self):
        for m in range(1, 4):
            for v in itertools.product(range(5), repeat=m):
                assert pair_pr(pair_inj(v), m) == list(v)
            for x in range(150):
                assert pair_inj(pair_pr(x, m)) == x
        assert pair_inj([]) == 0
        assert pair_pr(17, 0) == []

    def test_domain(self):
        with pytest.raises(DomainError):
            cantor_pair(-1, 2)
        with pytest.raises(DomainError):
            cantor_unpair(-3)
        with pytest.raises(DomainError):
            pair_pr(-1, 2)

    def test_projection_algorithms(self):
        for m in range(1, 4):
            for i in range(m):
                alg = ra_project(i, m)
                for x in range(40):
                    assert ra_eval(alg, [x], FUEL) == pair_pr(x, m)[i], (i, m, x)
        with pytest.raises(ShapeError):
            ra_project(2, 2)


class TestPolynomials:
    def test_eval_poly(self):
        x = PVar(0)
        p = PAdd(PMul(x, x), PConst(3))
        assert ra_eval(ra_eval_poly(p, 1, 0), [4], FUEL) == 19
        assert ra_eval(ra_eval_poly(PAdd(x, PPar(0)), 1, 1), [2, 5], FUEL) == 7
        assert ra_eval(ra_eval_poly(PConst(4), 0, 0), [], 10) == 4

    def test_eval_poly_ranges(self):
        with pytest.raises(ShapeError):
            ra_eval_poly(PVar(2), 2, 0)
        with pytest.raises(ShapeError):
            ra_eval_poly(PPar(1), 0, 1)

    def test_ra_test_is_total(self):
        e = DioSingle(PAdd(PVar(0), PConst(1)), PVar(1))
        alg = ra_test(e)
        assert alg.arity == 1 and not has_min(alg)
        for x in range(30):
            expected = 0 if single_eval(e, [], pair_pr(x, 2)) else 1
            assert ra_eval(alg, [x], FUEL) == expected, x


class TestSearch:
    @pytest.mark.parametrize(
        "e, m, v",
        [
            (DioSingle(PConst(2), PConst(2)), 0, []),
            (DioSingle(PVar(0), PConst(3)), 1, []),
            (DioSingle(PMul(PVar(0), PVar(0)), PConst(4)), 1, []),
            (DioSingle(PAdd(PVar(0), PVar(1)), PConst(3)), 2, []),
            (DioSingle(PAdd(PVar(0), PConst(1)), PVar(1)), 2, []),
            (DioSingle(PMul(PVar(0), PConst(2)), PPar(0)), 1, [6]),
            (DioSingle(PAdd(PVar(0), PPar(0)), PPar(1)), 1, [2, 7]),
        ],
        ids=["ground", "const", "square", "sum", "successor", "half", "difference"],
    )
    def test_least_encoding(self, e, m, v):
        expected = least_code(e, m, v)
        assert expected is not None and expected <= 60
        alg = ra_find(e, m, len(v))
        assert alg.arity == len(v) and has_min(alg)
        assert ra_eval(alg, v, FUEL) == expected

    def test_known_codes(self):
        assert least_code(DioSingle(PAdd(PVar(0), PVar(1)), PConst(3)), 2, []) == 6
        assert least_code(DioSingle(PAdd(PVar(0), PConst(1)), PVar(1)), 2, []) == 2

    def test_unsolvable_ground(self):
        assert ra_eval(ra_find(DioSingle(PConst(1), PConst(2))), [], FUEL) is None

    @pytest.mark.slow
    def test_unsolvable_ground_large_fuel(self):
        assert ra_eval(ra_find(DioSingle(PConst(1), PConst(2))), [], 10**6) is None

    def test_unsolvable_successor_of_zero(self):
        e = DioSingle(PAdd(PVar(0), PConst(1)), PConst(0))
        assert least_code(e, 1, []) is None
        assert ra_eval(ra_find(e), [], 500) is None

    def test_unsolvable_at_parameter(self):
        e = DioSingle(PMul(PVar(0), PConst(2)), PPar(0))
        assert ra_eval(ra_find(e, 1, 1), [5], 500) is None
        assert ra_eval(ra_find(e, 1, 1), [4], FUEL) == 2
