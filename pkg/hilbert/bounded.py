"""
Bounded universal quantification: nu -> forall x < f(nu), T(x, nu).

T is flattened into elementary constraints and every working variable becomes a
sparse cipher whose i-th component is its value at x = i-1. Copy, constant and
parameter constraints only alias ciphers; additions stay additions; products
are compared through masked products. The frame pins the cipher constants
(r = 2^(4q), u, u', the masks and the index cipher t), and all bitwise
comparisons of the plan are packed into a single masked_le over base-S slots.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import config
from dio.dsl import Add, And, Apply, Const, Divides, Eq, Exists, Formula, Lt, Shape, Term, Var
from dio.elem import CAdd, CCst, CMul, CPar, DioCstr, elem_max_param, elem_presolve, elem_used_vars, form_to_elem
from dio.evaluate import BoundedTruth, df_eval_bounded, false_up_to
from dio.form import DioFunBuilder, DioRelBuilder, Valuation
from hilbert.binary import masked_le_shape
from hilbert.cipher import cipher_base, cipher_encode, cipher_index, cipher_mask, cipher_u, cipher_u_prime, cipher_w
from hilbert.expo import expo_shape
from solver.search import found, sat_cstrs
from utils.errors import ShapeError

logger = logging.getLogger(__name__)

FRAME = ("n", "q", "r", "K", "R", "w1", "u", "u1", "M", "D", "Dp", "dmask", "t", "zt")


def _value(t: Term, env: Mapping[str, int]) -> int:
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Const):
        return t.n
    a, b = _value(t.left, env), _value(t.right, env)
    return a + b if isinstance(t, Add) else a * b


def _atom_holds(f: Formula, env: Mapping[str, int]) -> bool:
    """Host truth of a plan atom."""
    if isinstance(f, Eq):
        return _value(f.left, env) == _value(f.right, env)
    if isinstance(f, Lt):
        return _value(f.left, env) < _value(f.right, env)
    if isinstance(f, Divides):
        d, x = _value(f.divisor, env), _value(f.dividend, env)
        return x == 0 if d == 0 else x % d == 0
    if isinstance(f, Apply) and isinstance(f.target, Shape) and f.target.oracle is not None:
        return bool(f.target.oracle(*(_value(a, env) for a in f.args)))
    raise ShapeError(f"no host reading for {f!r}")


class CipherPlan:
    """
    Cipher-level rewriting of a constraint list.

    Parameter 0 of the constraints is the bounded variable; parameter 1+i is the
    outer parameter p_i. The plan lists the existential names, the atoms and the
    bitwise pairs (a, b) meaning a <= b digit by digit; the pairs are batched
    into one masked_le at the end.

    The constraints are presolved first, so every remaining working variable
    is a cipher of its own.

    Args:
        constraints: Constraint list, reference already pinned to 0
        witnesses: Working variables standing for the existentials of T
        nparams: Number of outer parameters
    """

    def __init__(self, constraints: Sequence[DioCstr], witnesses: Sequence[int], nparams: int):
        pre = elem_presolve(constraints, witnesses)
        self.constraints = pre.constraints
        self.witnesses = pre.witnesses
        self.nparams = max(nparams, elem_max_param(self.constraints))
        self.names: List[str] = []
        self.atoms: List[Formula] = []
        self.pairs: List[Tuple[Term, Term]] = []
        self.triples: List[Tuple[str, Term, Term, str, str]] = []
        self.cipher_of: Dict[int, str] = {}
        self.free_classes: Dict[str, int] = {}
        self.param_ciphers: Dict[str, int] = {}
        self.const_ciphers: Dict[str, int] = {}
        self._frame()
        self._classes()
        self._equations()
        self._batch()
        logger.info(
            f"cipher plan: {len(self.constraints)} constraints, {len(self.free_classes)} free ciphers, "
            f"{len(self.triples)} masked ands, {len(self.pairs)} bitwise pairs"
        )

    @classmethod
    def for_relation(cls, rel: DioRelBuilder, nparams: int = 0) -> "CipherPlan":
        rep = form_to_elem(rel.form)
        return cls(rep.with_ref_zero(), rep.witnesses, max(nparams, rel.arity - 1))

    @property
    def params(self) -> Tuple[str, ...]:
        return tuple(f"p{i}" for i in range(self.nparams))

    def _declare(self, *names: str) -> Tuple[Var, ...]:
        self.names.extend(names)
        return tuple(Var(n) for n in names)

    def _and(self, z: Term, x: Term, y: Term):
        """z = x & y through x = z + a, y = z + b and three bitwise pairs."""
        j = len(self.triples)
        a, b = self._declare(f"a{j}", f"b{j}")
        self.atoms += [Eq(x, z + a), Eq(y, z + b)]
        self.pairs += [(z, x), (z, y), (a, a + b)]
        self.triples.append((z.name, x, y, a.name, b.name))

    def _frame(self):
        n, q, r, big_k, big_r, w1, u, u1, m, d, dp, dmask, t, zt = self._declare(*FRAME)
        expo = expo_shape()
        self.atoms += [
            Lt(n, q),
            Apply(expo, (r, 2, config.CIPHER["digit_exponent"] * q)),
            Apply(expo, (big_k, 2, n + 1)),
            Apply(expo, (big_r, r, big_k)),
            # (r - 1)(w1 + 1) = r*R - 1
            Eq(r * w1 + r, w1 + r * big_r),
            Divides(r, u),
            Eq(u1 + r * r, u + big_r),
            Eq(m + u1, r * u1),
            Apply(expo, (dp, 2, q)),
            Eq(dp, d + 1),
            Eq(dmask, d * u),
        ]
        self.pairs.append((u, w1))
        self._and(u1, u * u, w1)
        self.pairs.append((t, dmask))
        self._and(zt, t * u, m)
        self.atoms.append(Eq(t + n * big_r, zt + u1))

    def _pin(self, c: DioCstr) -> str:
        if isinstance(c, CPar):
            if c.i == 0:
                return "t"
            name = f"P{c.i - 1}"
            if name not in self.param_ciphers:
                self.param_ciphers[name] = c.i - 1
                (pv,) = self._declare(name)
                self.atoms.append(Eq(pv, Var(f"p{c.i - 1}") * Var("u")))
                self.pairs.append((pv, Var("dmask")))
            return name
        name = f"k{c.n}"
        if name not in self.const_ciphers:
            self.const_ciphers[name] = c.n
            (kv,) = self._declare(name)
            self.atoms.append(Eq(kv, c.n * Var("u")))
            if c.n:
                self.pairs.append((kv, Var("dmask")))
        return name

    def _classes(self):
        pins: Dict[int, List[str]] = {}
        for c in self.constraints:
            if isinstance(c, (CCst, CPar)):
                pins.setdefault(c.u, []).append(self._pin(c))
        for u in elem_used_vars(self.constraints):
            if u in pins:
                self.cipher_of[u] = pins[u][0]
                continue
            name = f"c{u}"
            self.free_classes[name] = u
            (cv,) = self._declare(name)
            self.pairs.append((cv, Var("dmask")))
            self.cipher_of[u] = name
        for names in pins.values():
            for other in dict.fromkeys(names[1:]):
                if other != names[0]:
                    self.atoms.append(Eq(Var(names[0]), Var(other)))

    def _equations(self):
        u, m = Var("u"), Var("M")
        for c in self.constraints:
            if isinstance(c, CAdd):
                a, b, s = (Var(self.cipher_of[w]) for w in (c.u, c.v, c.w))
                self.atoms.append(Eq(a, b + s))
            elif isinstance(c, CMul):
                a, b, s = (Var(self.cipher_of[w]) for w in (c.u, c.v, c.w))
                (z,) = self._declare(f"z{len(self.triples)}")
                self._and(z, a * u, m)
                self._and(z, b * s, m)

    def _batch(self):
        """
        A = sum a_j S^j and B = sum b_j S^j, then A <= B bitwise.

        The slots stay apart because the sum G of all a_j and b_j is below S.
        """
        s, big_s = self._declare("s", "S")
        self.atoms.append(Apply(expo_shape(), (big_s, 2, s)))
        count = len(self.pairs)
        acc_a = self._declare(*(f"A{j}" for j in range(count)))
        acc_b = self._declare(*(f"B{j}" for j in range(count)))
        total = self._declare(*(f"G{j}" for j in range(count)))
        for j, (a, b) in enumerate(self.pairs):
            if j + 1 < count:
                self.atoms += [
                    Eq(acc_a[j], a + big_s * acc_a[j + 1]),
                    Eq(acc_b[j], b + big_s * acc_b[j + 1]),
                    Eq(total[j], a + b + total[j + 1]),
                ]
            else:
                self.atoms += [Eq(acc_a[j], a), Eq(acc_b[j], b), Eq(total[j], a + b)]
        self.atoms += [Lt(total[0], big_s), Apply(masked_le_shape(), (acc_a[0], acc_b[0]))]

    def host_values(self, n: int, nu: Sequence[int], phis: Sequence[Mapping[int, int]]) -> Dict[str, int]:
        """
        Values of every plan name, given the working assignments for x = 0 .. n-1.

        q is the least width above n and above every digit the ciphers carry.
        """
        par = [nu[i] if i < len(nu) else 0 for i in range(self.nparams)]
        digits = [v for phi in phis for v in phi.values()]
        digits += list(self.const_ciphers.values()) + [par[i] for i in self.param_ciphers.values()]
        q = max([n + 1] + [v.bit_length() + 1 for v in digits])
        r = cipher_base(q)
        u = cipher_u(n, q)
        env = {f"p{i}": v for i, v in enumerate(par)}
        env.update(
            n=n,
            q=q,
            r=r,
            K=1 << (n + 1),
            R=r ** (1 << (n + 1)),
            w1=cipher_w(n, q),
            u=u,
            u1=cipher_u_prime(n, q),
            M=cipher_mask(n, q),
            D=(1 << q) - 1,
            Dp=1 << q,
            dmask=((1 << q) - 1) * u,
            t=cipher_index(n, q).value,
        )
        for name, k in self.const_ciphers.items():
            env[name] = k * u
        for name, i in self.param_ciphers.items():
            env[name] = par[i] * u
        for name, root in self.free_classes.items():
            env[name] = cipher_encode([phi[root] for phi in phis], q).value
        for z, x, y, a, b in self.triples:
            xv, yv = _value(x, env), _value(y, env)
            env.setdefault(z, xv & yv)
            env[a], env[b] = xv - env[z], yv - env[z]
        values = [(_value(a, env), _value(b, env)) for a, b in self.pairs]
        total = 0
        for j in reversed(range(len(values))):
            total += values[j][0] + values[j][1]
            env[f"G{j}"] = total
        s = total.bit_length() + 1
        env["s"], env["S"] = s, 1 << s
        acc_a = acc_b = 0
        for j in reversed(range(len(values))):
            acc_a = values[j][0] + (acc_a << s)
            acc_b = values[j][1] + (acc_b << s)
            env[f"A{j}"], env[f"B{j}"] = acc_a, acc_b
        return env

    def failed_atoms(self, env: Mapping[str, int]) -> List[str]:
        """Atoms false under env; a negative value counts as a failure of its own."""
        out = [f"{name} < 0" for name, v in env.items() if v < 0]
        return out + [repr(a) for a in self.atoms if not _atom_holds(a, env)]


def bounded_forall_shape(f: DioFunBuilder, t: DioRelBuilder) -> Shape:
    """The cipher formula as a Shape over p_0 .. p_{m-1}; T reads x_0 = bound variable, x_{1+i} = p_i."""
    plan = CipherPlan.for_relation(t, f.arity)
    params = plan.params
    head = Apply(f, (Var("n"),) + tuple(Var(p) for p in params[: f.arity]))
    body = Exists(plan.names, And(head, *plan.atoms))
    shape = Shape(f"forall x < {f.name}. {t.name}", params, body)
    shape.plan = plan
    return shape


def bounded_forall(f: DioFunBuilder, t: DioRelBuilder) -> DioRelBuilder:
    """nu -> forall x < f(nu), t(x . nu)"""
    rel = bounded_forall_shape(f, t).compile()
    logger.info(f"bounded forall formula size: {rel.size()}")
    return rel


def bounded_forall_host(f_value: int, t: DioRelBuilder, nu: Sequence[int], bound: int) -> BoundedTruth:
    """forall x < f_value, t(x . nu), each instance decided with witnesses up to bound."""
    for x in range(f_value):
        if not df_eval_bounded(t.form, Valuation.of([x] + list(nu)), bound):
            return false_up_to(bound)
    return BoundedTruth(True, bound)


@dataclass(frozen=True)
class ForallSimulation:
    """
    Outcome of replaying a cipher plan on host integers.

    witness maps every existential name of the cipher formula to its value;
    missing is the first index without a bounded witness; failed lists plan
    atoms that the host values violate.
    """
    holds: BoundedTruth
    witness: Dict[str, int] = field(default_factory=dict)
    missing: Optional[int] = None
    failed: Tuple[str, ...] = ()


def simulate_bounded_forall(f_value: int, t: DioRelBuilder, nu: Sequence[int], bound: int) -> ForallSimulation:
    """
    Solve T at every index below f_value, assemble the ciphers and check the plan.

    Witnesses of T are searched up to bound; the cipher values themselves are
    whatever the assembled solutions require.
    """
    nu = list(nu)
    plan = CipherPlan.for_relation(t, len(nu))
    used = elem_used_vars(plan.constraints)
    witnesses = set(plan.witnesses)
    limits = {u: (bound if u in witnesses else None) for u in used}
    phis = []
    for x in range(f_value):
        phi = sat_cstrs(plan.constraints, Valuation.of([x] + nu), bound, bounds=limits, order=plan.witnesses)
        if not found(phi):
            logger.info(f"index {x} has no witness up to {bound}")
            return ForallSimulation(false_up_to(bound), missing=x)
        phis.append(phi)
    env = plan.host_values(f_value, nu, phis)
    failed = tuple(plan.failed_atoms(env))
    if failed:
        logger.error(f"cipher plan violated by {len(failed)} atoms, first: {failed[0]}")
        return ForallSimulation(false_up_to(bound), failed=failed)
    witness = {name: env[name] for name in plan.names}
    logger.debug(f"cipher width q = {env['q']}, slot width s = {env['s']}")
    return ForallSimulation(BoundedTruth(True, bound), witness)
