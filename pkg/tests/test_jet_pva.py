from __future__ import annotations

import random
from math import factorial

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from walgebra.jet_pva import (
    JacobiViolation, JetPVA, PoissonTable, T, T_power, jet, jet_ideal, jet_of_product,
    jg_action_check, kirillov_kostant, lp_equal, parse_polynomial, pva_axioms, random_jet_poly,
    to_string, validate_table,
)
from walgebra.polyring import MPoly
from walgebra.scalar_core import Q

t = sympy.Symbol("t")


def to_sympy(f: MPoly, names) -> sympy.Expr:
    """x_(-j-1) becomes the j-th derivative of x(t) divided by j!."""
    funcs = {nm: sympy.Function(nm)(t) for nm in names}
    out = sympy.Integer(0)
    for mono, c in f.terms.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for (nm, j), e in mono:
            term *= (sympy.diff(funcs[nm], t, j) / factorial(j)) ** e
        out += term
    return out


@pytest.mark.parametrize("text", ["x^2", "x*y", "x^2+y^3"])
def test_translation_matches_symbolic_differentiation(text):
    names = ["x", "y"]
    funcs = {nm: sympy.Function(nm)(t) for nm in names}
    f_sym = sympy.sympify(text.replace("^", "**"), locals=funcs)
    ideal = jet_ideal([text], 10)
    for m in range(11):
        oracle = sympy.diff(f_sym, t, m)
        assert sympy.expand(to_sympy(ideal.generators[(0, m)], names) - oracle) == 0
    assert ideal.weights_ok()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 4))
def test_T_is_a_derivation(seed, r):
    rng = random.Random(seed)
    a = random_jet_poly(["x", "y"], rng, 3)
    b = random_jet_poly(["x", "y"], rng, 3)
    assert (T(a * b) - (T(a) * b + a * T(b))).is_zero()
    assert (T_power(T(a), r) - T_power(a, r + 1)).is_zero()


def test_jet_of_product_is_union():
    rep = jet_of_product(["x^2"], ["x*y"], 3, rename_b={"x": "u", "y": "v"})
    assert rep.matches


def test_parse_and_print():
    f = parse_polynomial("x^2 + 3*x*y")
    assert to_string(f) == "(3)*x_(-1)*y_(-1) + x_(-1)^2"
    assert (f - (jet("x") * jet("x") + jet("x") * jet("y") * 3)).is_zero()


def test_generator_brackets_of_sl2():
    pva = JetPVA(kirillov_kostant(2))
    e, f, h = jet("e"), jet("f"), jet("h")
    assert lp_equal(pva.bracket(e, f), {0: h})
    # sesquilinearity: {Te_lambda f} = -lambda h
    assert lp_equal(pva.bracket(T(e), f), {1: h * -1})


def test_level_adds_central_term():
    pva = JetPVA(kirillov_kostant(2, level=Q(3)))
    br = pva.bracket(jet("e"), jet("f"))
    assert lp_equal(br, {0: jet("h"), 1: MPoly.const(Q(3))})


@pytest.mark.parametrize("level", [None, Q(3)])
def test_pva_axioms_hold(level):
    rep = pva_axioms(JetPVA(kirillov_kostant(2, level=level)), trials=40, seed=5)
    assert rep.passed, rep.failures


def test_non_lie_table_is_rejected():
    x, y, z = jet("x"), jet("y"), jet("z")
    table = PoissonTable(["x", "y", "z"], {("x", "y"): {0: x}, ("y", "x"): {0: x * -1},
                                           ("x", "z"): {0: y}, ("z", "x"): {0: y * -1}})
    with pytest.raises(JacobiViolation):
        validate_table(table)


def test_jg_acts_by_derivations():
    assert jg_action_check(2)
