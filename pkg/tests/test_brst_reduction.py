from __future__ import annotations

import pytest
from sympy.utilities.iterables import partitions

from walgebra.brst_reduction import (
    TruncationTooSmall, build_minus, build_Q_hat, check_against_complex, check_kernel_closure,
    cohomology_dims, find_closed_generators, grading_operator, predicted_h0,
    virasoro_from_closed,
)
from walgebra.miura_walgebra import central_charge_formula
from walgebra.scalar_core import K, Q


def h0_oracle(n: int, w: int) -> int:
    """Count tuples of partitions (one per i = 2..n, parts >= i) with total size w."""
    def parts_at_least(i, m):
        if m == 0:
            return 1
        return sum(1 for p in partitions(m) if min(p) >= i)

    def rec(i, m):
        if i > n:
            return 1 if m == 0 else 0
        return sum(parts_at_least(i, j) * rec(i + 1, m - j) for j in range(m + 1))

    return rec(2, w)


@pytest.fixture(scope="module")
def minus2():
    return build_minus(build_Q_hat(2))


@pytest.mark.parametrize("n,kind", [(2, "sl"), (3, "sl"), (2, "gl"), (3, "gl")])
def test_q_hat_is_nilpotent(n, kind):
    assert build_Q_hat(n, kind).nilpotent


@pytest.mark.parametrize("n,w", [(2, 6), (3, 4)])
def test_predicted_h0_matches_partition_oracle(n, w):
    assert predicted_h0(n, w) == [h0_oracle(n, j) for j in range(w + 1)]


@pytest.mark.parametrize("n,w", [(2, 6), (3, 4)])
def test_cohomology_concentrated_in_charge_zero(n, w):
    table = cohomology_dims(n, w)
    assert table.d_squared_zero
    assert table.vanishing_off_zero()
    assert table.certified
    assert table.h0() == [h0_oracle(n, j) for j in range(w + 1)]


def test_gl_cohomology_has_extra_heisenberg_tower():
    table = cohomology_dims(2, 4, kind="gl")
    assert table.h0() == table.predicted == [1, 1, 3, 5, 10]


def test_weight_cap_is_enforced():
    with pytest.raises(TruncationTooSmall):
        cohomology_dims(3, 5)


def test_conformal_vector(minus2):
    g = grading_operator(2, minus=minus2)
    assert g.virasoro and g.q_closed
    assert g.central_charge == central_charge_formula(2)
    assert g.eigenvalues["e"] == 0 and g.eigenvalues["f"] == 2 and g.eigenvalues["psistar"] == 1


def test_sl3_central_charge():
    c = grading_operator(3).central_charge
    assert c == 2 * (1 - 12 * (K + 2) ** 2 / (K + 3))


def test_minus_complex_matches_full_complex(minus2):
    assert check_against_complex(minus2, 4)
    assert check_kernel_closure(minus2, 4)


def test_closed_weight_two_generator_is_virasoro(minus2):
    gens = find_closed_generators(2, 2, minus=minus2)
    assert len(gens) == 1
    assert virasoro_from_closed(minus2, gens[0]) == 1 - 6 * (K + 1) ** 2 / (K + 2)


def test_specialized_level_agrees():
    table = cohomology_dims(2, 4, level=Q(-1, 2))
    assert table.h0() == [h0_oracle(2, j) for j in range(5)]
