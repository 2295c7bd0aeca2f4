from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walgebra.free_fields import check_hat_rho, preset
from walgebra.scalar_core import K, Q, euler_product
from walgebra.vertex_engine import (
    AxiomViolation, jacobi_residual, lambda_bracket_wick, quasi_commutativity_residual,
    sesquilinearity_residuals, skew_residual, verify_axioms, wick_left_residual,
    wick_right_residual,
)


def test_affine_bracket_and_ordering():
    P = preset("affine-sl2")
    br = P.lambda_bracket(P.gen("e"), P.gen("f"))
    assert br[0] == P.gen("h")
    assert br[1] == P.vacuum(K)
    # e_(-1) f_(-1) = f_(-1) e_(-1) + h_(-2)
    lhs = P.parse("e(-1)f(-1)|0>")
    assert lhs == P.parse("f(-1)e(-1)|0> + h(-2)|0>")


def test_virasoro_bracket_has_expected_central_term():
    P = preset("virasoro")
    L = P.gen("L")
    br = P.lambda_bracket(L, L)
    assert br[0] == P.translate(L)
    assert br[1] == L * 2
    assert br[3] == P.vacuum((1 - 6 * (K + 1) ** 2 / (K + 2)) / 12)


def test_fermion_square_vanishes():
    P = preset("fermions-2")
    psi = P.gen("psi")
    assert P.normally_ordered(psi, psi).is_zero()
    assert P.lambda_bracket(psi, P.gen("psistar"))[0] == P.vacuum()


@pytest.mark.parametrize("name,colors", [("heisenberg", 1), ("affine-sl2", 3), ("affine-sl3", 8)])
def test_bosonic_basis_counts_are_colored_partitions(name, colors):
    P = preset(name)
    expected = [int(c) for c in euler_product(5, power=-colors).coeffs]
    assert [len(P.basis(d, "weight")) for d in range(6)] == expected


def test_hat_rho_embedding_is_a_homomorphism():
    assert check_hat_rho(2)
    assert check_hat_rho(3)


@pytest.mark.parametrize("name", ["affine-sl2", "virasoro", "fermions-2", "affine-gl2", "complex-sl2"])
def test_axioms_on_presets(name):
    rep = verify_axioms(preset(name), cap=3, trials=6, seed=11)
    assert rep.passed


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_affine_identities_at_random_states(seed):
    P = preset("affine-sl2", Q(3, 5))
    rng = random.Random(seed)
    a, b, c = (P.random_state(rng, 3) for _ in range(3))
    s1, s2 = sesquilinearity_residuals(P, a, b)
    assert s1.is_zero() and s2.is_zero()
    assert skew_residual(P, a, b).is_zero()
    assert not jacobi_residual(P, a, b, c)
    assert wick_left_residual(P, a, b, c).is_zero()
    assert wick_right_residual(P, a, b, c).is_zero()
    assert (P.lambda_bracket(a, b) - lambda_bracket_wick(P, a, b)).is_zero()
    assert quasi_commutativity_residual(P, a, b).is_zero()


def test_skew_inconsistent_table_is_rejected():
    from walgebra.vertex_engine import Generator, SkewInconsistent, VertexPresentation

    P = VertexPresentation([Generator("a", 0, Q(1), 0), Generator("b", 0, Q(1), 0)], name="bad")
    P.set_bracket("a", "a", [P.gen("b")])
    with pytest.raises(SkewInconsistent):
        P.freeze(check=True)


def test_jacobi_failure_is_reported():
    from walgebra.vertex_engine import Generator, VertexPresentation

    # skew-consistent but [x, [y, z]] - [y, [x, z]] != [[x, y], z]
    P = VertexPresentation([Generator(n, 0, Q(1), 0) for n in "xyz"], name="non-lie")
    P.set_bracket("x", "y", [P.gen("x")])
    P.set_bracket("y", "x", [-P.gen("x")])
    P.set_bracket("x", "z", [P.gen("y")])
    P.set_bracket("z", "x", [-P.gen("y")])
    P.freeze(check=False)
    with pytest.raises(AxiomViolation) as info:
        verify_axioms(P, cap=2, trials=20, seed=0, identities=("jacobi",))
    assert info.value.identity == "jacobi"
    assert len(info.value.triple) == 3
