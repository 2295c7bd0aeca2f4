"""Jet schemes of affine schemes and the Poisson vertex structure on arc spaces.

A jet variable ``(name, m)`` stands for x_{(-m-1)} and has weight m + 1.
The derivation T acts by T x_{(-m-1)} = (m + 1) x_{(-m-2)}, the mode form of
T x_{(n)} = -n x_{(n-1)}.

Lambda-polynomials are dicts ``{j: MPoly}`` holding the true lambda^j
coefficients; two-variable ones are keyed by ``(i, j)`` for lambda^i mu^j.
"""

from __future__ import annotations

import ast
import random
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Mapping, Sequence

from .lie_core import LieData
from .polyring import MPoly
from .scalar_core import Q

LPoly = dict


class JacobiViolation(ValueError):
    pass


def jet(name: str, m: int = 0) -> MPoly:
    """The jet variable name_{(-m-1)}."""
    return MPoly.var((name, m))


def var_weight(v) -> int:
    return v[1] + 1


def weight_of(f: MPoly) -> set:
    return f.weighted_degrees(var_weight)


def T(f: MPoly) -> MPoly:
    """The derivation T applied to a jet polynomial."""
    out = MPoly()
    for v in f.variables():
        name, m = v
        out = out + f.diff(v) * jet(name, m + 1) * (m + 1)
    return out


def T_power(f: MPoly, r: int) -> MPoly:
    for _ in range(r):
        f = T(f)
    return f


# ---------------------------------------------------------------------------
# parsing and printing


def parse_polynomial(text: str) -> MPoly:
    """Parse "x^2 + 3*x*y - 1/2" into a polynomial in the jets name_{(-1)}."""
    tree = ast.parse(text.replace("^", "**"), mode="eval")

    def ev(node) -> MPoly:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return MPoly.const(Q(node.value))
        if isinstance(node, ast.Name):
            return jet(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            x = ev(node.operand)
            return -x if isinstance(node.op, ast.USub) else x
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ValueError("exponents must be integer literals")
                return ev(node.left) ** node.right.value
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if right.variables() or not right.terms:
                    raise ValueError("division only by nonzero constants")
                return left * (1 / right.terms[()])
        raise ValueError(f"cannot parse {ast.dump(node)}")

    return ev(tree)


def jet_name(v) -> str:
    name, m = v
    return f"{name}_({-m - 1})"


def to_string(f: MPoly) -> str:
    return f.to_string(jet_name)


# ---------------------------------------------------------------------------
# jet ideals


@dataclass
class JetIdealTruncation:
    sources: list
    M: int
    generators: dict = field(default_factory=dict)  # {(i, m): T^m f_i}

    def as_strings(self) -> list:
        return [
            {"source": i, "order": m, "generator": to_string(g)}
            for (i, m), g in sorted(self.generators.items())
        ]

    def weights_ok(self) -> bool:
        """T^m f_i is homogeneous of weight m + (weight of f_i) when f_i is homogeneous."""
        for (i, m), g in self.generators.items():
            base = weight_of(self.sources[i])
            if len(base) != 1 or g.is_zero():
                continue
            if weight_of(g) != {next(iter(base)) + m}:
                return False
        return True


def jet_ideal(generators: Sequence[MPoly | str], M: int) -> JetIdealTruncation:
    """Generators T^m f_i, 0 <= m <= M, of the truncated jet ideal."""
    if M > 20:
        raise ValueError("order cap M must be at most 20")
    srcs = [parse_polynomial(g) if isinstance(g, str) else g for g in generators]
    out = JetIdealTruncation(srcs, M)
    for i, f in enumerate(srcs):
        cur = f
        for m in range(M + 1):
            out.generators[(i, m)] = cur
            cur = T(cur)
    return out


def relabel(f: MPoly, mapping: Mapping[str, str]) -> MPoly:
    terms = {}
    for mono, c in f.terms.items():
        new = tuple(sorted((((mapping.get(v[0], v[0]), v[1]), e) for v, e in mono)))
        terms[new] = c
    return MPoly(terms)


@dataclass
class ProductReport:
    left: list
    right: list
    product: list
    matches: bool


def jet_of_product(ideal_a: Sequence[MPoly | str], ideal_b: Sequence[MPoly | str], M: int,
                   rename_b: Mapping[str, str] | None = None) -> ProductReport:
    """The jet ideal of A (x) B is the union of the jet ideals of A and B (relabelled)."""
    A = jet_ideal(ideal_a, M)
    Bsrc = [parse_polynomial(g) if isinstance(g, str) else g for g in ideal_b]
    if rename_b:
        Bsrc = [relabel(f, rename_b) for f in Bsrc]
    B = jet_ideal(Bsrc, M)
    AB = jet_ideal(A.sources + Bsrc, M)
    left = [to_string(g) for g in A.generators.values() if g]
    right = [to_string(g) for g in B.generators.values() if g]
    prod = [to_string(g) for g in AB.generators.values() if g]
    names_a = {v[0] for f in A.sources for v in f.variables()}
    names_b = {v[0] for f in Bsrc for v in f.variables()}
    disjoint = not (names_a & names_b)
    return ProductReport(left, right, prod, disjoint and sorted(prod) == sorted(left + right))


# ---------------------------------------------------------------------------
# lambda-polynomials


def _lp_add(out: LPoly, j, f: MPoly) -> None:
    if f.is_zero():
        return
    g = out.get(j)
    g = f if g is None else g + f
    if g.is_zero():
        out.pop(j, None)
    else:
        out[j] = g


def lp_clean(p: LPoly) -> LPoly:
    return {j: f for j, f in p.items() if not f.is_zero()}


def lp_equal(p: LPoly, q: LPoly) -> bool:
    return lp_clean(p) == lp_clean(q)


def lp_sub(p: LPoly, q: LPoly) -> LPoly:
    out = dict(p)
    for j, f in q.items():
        _lp_add(out, j, -f)
    return out


def shift_apply(coeffs: LPoly, b: MPoly) -> LPoly:
    """sum_n c_n (lambda + T)^n b, the arrow convention: T acts on b only."""
    out: LPoly = {}
    for n, c in coeffs.items():
        for k in range(n + 1):
            _lp_add(out, n - k, c * T_power(b, k) * comb(n, k))
    return out


def lp_shift_T(p: LPoly) -> LPoly:
    """Substitute lambda -> lambda + T, with T acting on the coefficients."""
    out: LPoly = {}
    for n, c in p.items():
        for k in range(n + 1):
            _lp_add(out, n - k, T_power(c, k) * comb(n, k))
    return out


def lp_neg_shift_T(p: LPoly) -> LPoly:
    """Substitute lambda -> -lambda - T, with T acting on the coefficients."""
    out: LPoly = {}
    for n, c in p.items():
        for k in range(n + 1):
            sign = -1 if n % 2 else 1
            _lp_add(out, n - k, T_power(c, k) * (sign * comb(n, k)))
    return out


# ---------------------------------------------------------------------------
# Poisson vertex algebra on C[J X]


@dataclass
class PoissonTable:
    """Lambda-brackets H_ij(lambda) of the ring generators: {(a, b): {j: MPoly}}."""

    names: list
    table: dict

    def H(self, a: str, b: str) -> LPoly:
        return self.table.get((a, b), {})


def kirillov_kostant(n: int = 2, kind: str = "sl", level=None) -> PoissonTable:
    """{x_lambda y} = [x, y] (+ level * tr(xy) * lambda) on C[g*]."""
    lie = LieData(n, kind)
    table = {}
    for a in range(lie.dim):
        for b in range(lie.dim):
            br: LPoly = {}
            lin = MPoly()
            for c, v in lie.bracket(a, b).items():
                lin = lin + jet(lie.names[c]) * v
            if lin:
                br[0] = lin
            if level is not None and lie.trace_form(a, b) != 0:
                br[1] = MPoly.const(level * lie.trace_form(a, b))
            if br:
                table[(lie.names[a], lie.names[b])] = br
    P = PoissonTable(list(lie.names), table)
    validate_table(P)
    return P


def validate_table(P: PoissonTable) -> None:
    """Skew symmetry and Jacobi for the Lie part of the generator table."""
    for a in P.names:
        for b in P.names:
            lhs = P.H(a, b).get(0, MPoly())
            rhs = P.H(b, a).get(0, MPoly())
            if not (lhs + rhs).is_zero():
                raise JacobiViolation(f"table is not skew on ({a}, {b})")

    def br0(x: MPoly, c: str) -> MPoly:
        out = MPoly()
        for v in x.variables():
            out = out + x.diff(v) * P.H(v[0], c).get(0, MPoly())
        return out

    for a in P.names:
        for b in P.names:
            for c in P.names:
                t1 = br0(P.H(b, c).get(0, MPoly()), a)
                t2 = br0(P.H(c, a).get(0, MPoly()), b)
                t3 = br0(P.H(a, b).get(0, MPoly()), c)
                if not (t1 + t2 + t3).is_zero():
                    raise JacobiViolation(f"Jacobi fails on ({a}, {b}, {c})")


class JetPVA:
    """The induced Poisson vertex algebra on the arc space of a Poisson scheme."""

    def __init__(self, table: PoissonTable):
        self.P = table
        self._gen: dict = {}
        self._mono: dict = {}

    def gen_bracket(self, u, v) -> LPoly:
        """{x_{(-m-1)} lambda y_{(-n-1)}} = (-lambda)^m (lambda + T)^n H(lambda) / (m! n!)."""
        key = (u, v)
        hit = self._gen.get(key)
        if hit is not None:
            return hit
        (a, m), (b, n) = u, v
        H = self.P.H(a, b)
        out: LPoly = {}
        for j, c in H.items():
            for k in range(n + 1):
                coeff = T_power(c, k) * (Q(comb(n, k) * (-1) ** m) / (factorial(m) * factorial(n)))
                _lp_add(out, j + m + n - k, coeff)
        self._gen[key] = out
        return out

    def _var_bracket(self, u, b: MPoly) -> LPoly:
        """{u_lambda b} for a jet variable u, by the right Leibniz rule."""
        out: LPoly = {}
        for v in b.variables():
            db = b.diff(v)
            for j, c in self.gen_bracket(u, v).items():
                _lp_add(out, j, c * db)
        return out

    def _mono_bracket(self, mono: tuple, b: MPoly) -> LPoly:
        """{(u r)_lambda b} = {u_{lambda+T} b}_-> r + {r_{lambda+T} b}_-> u."""
        key = (mono, b)
        hit = self._mono.get(key)
        if hit is not None:
            return hit
        if not mono:
            out: LPoly = {}
        elif len(mono) == 1 and mono[0][1] == 1:
            out = self._var_bracket(mono[0][0], b)
        else:
            (v, e), rest = mono[0], mono[1:]
            if e > 1:
                rest = ((v, e - 1),) + rest
            r = MPoly({rest: Q(1)})
            u = jet(*v)
            out = {}
            for j, f in shift_apply(self._var_bracket(v, b), r).items():
                _lp_add(out, j, f)
            for j, f in shift_apply(self._mono_bracket(rest, b), u).items():
                _lp_add(out, j, f)
        self._mono[key] = out
        return out

    def bracket(self, a: MPoly, b: MPoly) -> LPoly:
        out: LPoly = {}
        for mono, c in a.terms.items():
            for j, f in self._mono_bracket(mono, b).items():
                _lp_add(out, j, f * c)
        return out

    def action(self, x: str, m: int, f: MPoly) -> MPoly:
        """x_(m) f = m! [lambda^m] {x_lambda f}."""
        return self.bracket(jet(x), f).get(m, MPoly()) * factorial(m)

    # residuals of the axioms ---------------------------------------------------
    def sesquilinearity(self, a: MPoly, b: MPoly) -> tuple[LPoly, LPoly]:
        ab = self.bracket(a, b)
        left = lp_sub(self.bracket(T(a), b), {j + 1: -f for j, f in ab.items()})
        right = lp_sub(self.bracket(a, T(b)), lp_add(_times_lambda(ab), {j: T(f) for j, f in ab.items()}))
        return lp_clean(left), lp_clean(right)

    def skew(self, a: MPoly, b: MPoly) -> LPoly:
        """{b_lambda a} + {a_{-lambda-T} b}."""
        lhs = self.bracket(b, a)
        rhs = lp_neg_shift_T(self.bracket(a, b))
        return lp_clean(lp_add(lhs, rhs))

    def jacobi(self, a: MPoly, b: MPoly, c: MPoly) -> dict:
        """{a_l {b_m c}} - {b_m {a_l c}} - {{a_l b}_{l+m} c}, keyed by (i, j) for l^i m^j."""
        out: dict = {}

        def acc(i, j, f):
            g = out.get((i, j))
            g = f if g is None else g + f
            if g.is_zero():
                out.pop((i, j), None)
            else:
                out[(i, j)] = g

        for j, x in self.bracket(b, c).items():
            for i, y in self.bracket(a, x).items():
                acc(i, j, y)
        for i, x in self.bracket(a, c).items():
            for j, y in self.bracket(b, x).items():
                acc(i, j, -y)
        for i, x in self.bracket(a, b).items():
            for kk, y in self.bracket(x, c).items():
                for r in range(kk + 1):
                    acc(i + r, kk - r, -y * comb(kk, r))
        return out

    def leibniz(self, a: MPoly, b: MPoly, c: MPoly) -> tuple[LPoly, LPoly]:
        """Residuals of {a_l (bc)} = {a_l b}c + {a_l c}b and the left rule for {(ab)_l c}."""
        right = lp_sub(self.bracket(a, b * c),
                       lp_add({j: f * c for j, f in self.bracket(a, b).items()},
                              {j: f * b for j, f in self.bracket(a, c).items()}))
        left = lp_sub(self.bracket(a * b, c),
                      lp_add(shift_apply(self.bracket(a, c), b), shift_apply(self.bracket(b, c), a)))
        return lp_clean(right), lp_clean(left)

    def weight_ok(self, a: MPoly, b: MPoly) -> bool:
        """The lambda^j coefficient has weight wt a + wt b - j - 1 (for weight-one generators)."""
        wa, wb = weight_of(a), weight_of(b)
        if len(wa) != 1 or len(wb) != 1:
            raise ValueError("weight bookkeeping needs homogeneous inputs")
        for j, f in self.bracket(a, b).items():
            ws = weight_of(f)
            target = next(iter(wa)) + next(iter(wb)) - j - 1
            if f.variables() and ws != {target}:
                return False
            if not f.variables() and target != 0:
                return False
        return True


def lp_add(p: LPoly, q: LPoly) -> LPoly:
    out = dict(p)
    for j, f in q.items():
        _lp_add(out, j, f)
    return out


def _times_lambda(p: LPoly) -> LPoly:
    return {j + 1: f for j, f in p.items()}


# ---------------------------------------------------------------------------
# random states and checks


def random_jet_poly(names: Sequence[str], rng: random.Random, cap: int = 3, terms: int = 2) -> MPoly:
    """A random combination of jet monomials of weight <= cap."""
    out = MPoly()
    for _ in range(terms):
        budget = rng.randint(1, cap)
        mono = MPoly.const(Q(rng.choice([1, -1, 2, Q(1, 2)])))
        while budget > 0:
            m = rng.randint(0, budget - 1)
            mono = mono * jet(rng.choice(names), m)
            budget -= m + 1
            if rng.random() < 0.5:
                break
        out = out + mono
    return out if out else jet(names[0])


@dataclass
class PVAReport:
    trials: int
    failures: dict

    @property
    def passed(self) -> bool:
        return not any(self.failures.values())


def pva_axioms(pva: JetPVA, trials: int = 100, cap: int = 3, seed: int = 0) -> PVAReport:
    """Check the PVA axioms on random triples of weight <= cap."""
    rng = random.Random(seed)
    names = pva.P.names
    fails = {"sesquilinearity": 0, "skew": 0, "jacobi": 0, "leibniz": 0}
    for _ in range(trials):
        a, b, c = (random_jet_poly(names, rng, cap) for _ in range(3))
        s1, s2 = pva.sesquilinearity(a, b)
        fails["sesquilinearity"] += bool(s1 or s2)
        fails["skew"] += bool(pva.skew(a, b))
        fails["jacobi"] += bool(pva.jacobi(a, b, c))
        l1, l2 = pva.leibniz(a, b, c)
        fails["leibniz"] += bool(l1 or l2)
    return PVAReport(trials, fails)


def _monomials_upto(names: Sequence[str], cap: int) -> list:
    vars_ = [(nm, m) for nm in names for m in range(cap)]
    out = []

    def rec(start, cur: MPoly, budget):
        out.append(cur)
        for i in range(start, len(vars_)):
            v = vars_[i]
            if var_weight(v) <= budget:
                rec(i, cur * jet(*v), budget - var_weight(v))

    rec(0, MPoly.const(Q(1)), cap)
    return out


def jg_action_check(n: int = 2, cap: int = 3, max_mode: int = 3) -> bool:
    """[x_(m), y_(n)] = [x, y]_(m+n) as derivations of C[J g*] on monomials of weight <= cap."""
    if n > 3:
        raise ValueError("n must be at most 3")
    table = kirillov_kostant(n)
    pva = JetPVA(table)
    lie = LieData(n, "sl")
    monos = _monomials_upto(table.names, cap)
    for a in range(lie.dim):
        for b in range(lie.dim):
            x, y = lie.names[a], lie.names[b]
            br = lie.bracket(a, b)
            for m in range(max_mode + 1):
                for nn in range(max_mode + 1):
                    for f in monos:
                        lhs = pva.action(x, m, pva.action(y, nn, f)) - pva.action(y, nn, pva.action(x, m, f))
                        rhs = MPoly()
                        for c, v in br.items():
                            rhs = rhs + pva.action(lie.names[c], m + nn, f) * v
                        if not (lhs - rhs).is_zero():
                            return False
    return True
