from __future__ import annotations

from itertools import accumulate
from math import comb

import pytest

from walgebra.brst_reduction import TruncationTooSmall
from walgebra.finite_brst import (
    CAlgebra, ad_squared_zero, build_Q_finite, build_rho, casimirs_closed, center_hilbert,
    charge_and_filtration, d_plus_minus_check, finite_cohomology, koszul_check, moment_check,
)
from walgebra.scalar_core import product_series


def center_oracle(n: int, D: int) -> list:
    """Graded dims of C[p_1..p_n], deg p_i = 2i, from prod (1 - q^{2i})^{-1}."""
    s = product_series({2 * i: -1 for i in range(1, n + 1)}, D)
    return [int(c) for c in s.coeffs]


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("quantum", [True, False])
def test_ad_q_squares_to_zero(n, quantum):
    cx = build_Q_finite(n, quantum)
    assert ad_squared_zero(cx)
    assert charge_and_filtration(cx)


def test_q_term_counts():
    assert len(build_Q_finite(2).Q.terms) == 2
    assert len(build_Q_finite(3).Q.terms) == 6


@pytest.mark.parametrize("n", [2, 3])
def test_rho_is_a_homomorphism_and_moment_map(n):
    rho = build_rho(n, CAlgebra(n))
    assert set(CAlgebra(n).lie.positive_indices) <= set(rho)
    assert moment_check(n)
    assert moment_check(n, quantum=False)


def test_differential_splits():
    assert d_plus_minus_check(2)
    assert d_plus_minus_check(3)


@pytest.mark.parametrize("n", [2, 3])
def test_koszul_part_has_expected_cohomology(n):
    # polynomials of degree <= m in the dim(b_-) coordinates
    dim_bminus = n * (n + 1) // 2
    for m, (h0, expected, higher_vanish) in koszul_check(n, 3).items():
        assert h0 == expected == comb(dim_bminus + m, m)
        assert higher_vanish


@pytest.mark.parametrize("n", [2, 3])
def test_classical_cohomology_is_the_invariant_ring(n):
    fc = finite_cohomology(n, 6, quantum=False)
    assert fc.d_squared_zero and fc.vanishing_off_zero()
    assert fc.h0() == center_oracle(n, 6) == center_hilbert(n, 6, cumulative=False)


@pytest.mark.parametrize("n", [2, 3])
def test_quantum_cohomology_filtered_dims(n):
    fc = finite_cohomology(n, 6, quantum=True)
    assert fc.vanishing_off_zero()
    assert fc.h0() == list(accumulate(center_oracle(n, 6))) == center_hilbert(n, 6)


def test_casimirs_are_closed():
    assert casimirs_closed(2)
    assert casimirs_closed(3)


def test_guard_rejects_large_truncations():
    with pytest.raises(TruncationTooSmall):
        finite_cohomology(4, 2)
    with pytest.raises(TruncationTooSmall):
        finite_cohomology(2, 8)


def test_report_serializes():
    obj = finite_cohomology(2, 4).to_obj()
    assert obj["convention"] == "cumulative K_p"
    assert obj["h0"] == [1, 1, 2, 2, 4]
