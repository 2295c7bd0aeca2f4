from __future__ import annotations

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from walgebra.brst_reduction import predicted_h0
from walgebra.miura_walgebra import (
    alpha, axiom_check, central_charge_formula, column_determinant, dual_level, duality_check,
    injectivity_rank, lifted_closedness, miura_image, virasoro_certificate, w3_closure,
)
from walgebra.scalar_core import K, Q, evaluate, to_string


@pytest.mark.parametrize("n", [2, 3, 4])
def test_miura_identity(n):
    img = miura_image(n, check=True)
    assert img.alpha == alpha(n) == K + n - 1
    assert len(img.W) == n + 1


@pytest.mark.parametrize("n", [2, 3])
def test_central_charge_matches_formula_and_sympy(n):
    c = virasoro_certificate(n)
    assert c == central_charge_formula(n)
    k = sympy.Symbol("k")
    expected = (n - 1) * (1 - n * (n + 1) * (n + k - 1) ** 2 / (n + k))
    got = sympy.sympify(to_string(c).replace("^", "**"), locals={"k": k})
    assert sympy.cancel(got - expected) == 0


def test_central_charge_sl2_string():
    assert to_string(virasoro_certificate(2)) == "(-6*k^2-11*k-4)/(k+2)"


@pytest.mark.parametrize("n", [2, 3])
def test_level_duality(n):
    assert duality_check(n).passed


@given(st.fractions(min_value=-20, max_value=20, max_denominator=50), st.sampled_from([2, 3, 4, 5]))
def test_duality_property(x, n):
    k0 = Q(x.numerator, x.denominator)
    if k0 + n == 0:
        return
    c = central_charge_formula(n)
    assert evaluate(c, k0) == evaluate(c, dual_level(n, k0))
    assert (k0 + n) * (dual_level(n, k0) + n) == 1


def test_column_determinant_top_coefficient():
    res = column_determinant(2)
    assert res.W[0] == {(): Q(1)}
    # W^(1) is the trace e11 + e22, W^(2) carries the f = e21 letter
    assert res.word_string(1) == "(1)*e11(-1)|0> + (1)*e22(-1)|0>"
    assert "(1)*e21(-1)|0>" in res.word_string(2)


def test_w3_closure_degrees():
    rep = w3_closure()
    assert rep.degree_bounds[("W2", "W3")] <= 4
    assert rep.degree_bounds[("W3", "W3")] <= 5
    assert rep.expansions


@pytest.mark.parametrize("n,w", [(2, 6), (3, 6)])
def test_miura_map_is_injective_in_low_weight(n, w):
    ranks = injectivity_rank(n, w)
    assert all(count == r for count, r in ranks.values())
    assert [ranks[j][0] for j in range(w + 1)] == predicted_h0(n, w)


def test_axioms_on_w3_generators():
    assert axiom_check(3)


@pytest.mark.parametrize("n", [2, 3])
def test_column_determinant_lifts_to_closed_elements(n):
    out = lifted_closedness(n)
    assert all(closed for _, closed in out.values())
    assert [int(w) for w, _ in out.values()] == list(range(1, n + 1))
