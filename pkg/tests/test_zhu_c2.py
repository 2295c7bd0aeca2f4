from __future__ import annotations

from math import comb

import pytest

from walgebra.brst_reduction import TruncationTooSmall
from walgebra.free_fields import preset
from walgebra.scalar_core import Q
from walgebra.zhu_c2 import (
    c2_algebra, check_associativity, check_commutator_identity, check_filtration,
    circ_leading_term, is_commutative, li_vs_weight_filtration, w_preset, zhu_algebra_dims,
    zhu_total_dim, zhu_truncation,
)

K0 = Q(13, 7)


@pytest.fixture(scope="module")
def affine():
    return preset("affine-sl2", K0)


@pytest.fixture(scope="module")
def zhu_affine(affine):
    return zhu_truncation(affine, 5)


def test_gr_zhu_of_affine_is_symmetric_algebra(zhu_affine):
    assert zhu_affine.gr()[:4] == [comb(d + 2, 2) for d in range(4)]
    assert zhu_affine.zhu_dims == [1, 4, 10, 20]


def test_zhu_identities(zhu_affine):
    assert check_commutator_identity(zhu_affine, 3)
    assert check_associativity(zhu_affine, 3)
    assert check_filtration(zhu_affine, 3)
    assert not is_commutative(zhu_affine)


def test_circ_leading_term(affine):
    assert circ_leading_term(affine, 3, trials=10, seed=2)


def test_c2_quotient_of_affine(affine):
    C2 = c2_algebra(affine, 5)
    assert C2.dims == [comb(d + 2, 2) for d in range(6)]
    # the Poisson bracket on R_V is the Lie bracket
    assert C2.bracket_equals("e", "f", affine.gen("h"))
    assert not C2.bracket_equals("e", "f", affine.gen("e"))


def test_fermion_zhu_is_a_clifford_algebra():
    P = preset("fermions-2")
    Z = zhu_truncation(P, 4)
    assert zhu_total_dim(P, 4) == 2 ** 2
    assert Z.dims_by_charge() == {-1: 1, 0: 2, 1: 1}
    assert check_commutator_identity(Z, Z.stable)


def test_w_preset_zhu_is_commutative():
    Z = zhu_truncation(w_preset(K0), 6)
    assert Z.gr() == [1, 0, 1, 0, 1]
    assert is_commutative(Z)


def test_heisenberg_zhu_is_polynomial():
    assert zhu_algebra_dims(preset("heisenberg"), 5) == [1, 1, 1, 1]


@pytest.mark.parametrize("name,W", [("heisenberg", 4), ("affine-sl2", 3), ("virasoro", 5)])
def test_li_filtration_equals_weight_filtration(name, W):
    level = K0 if name != "virasoro" else Q(1, 3)
    rep = li_vs_weight_filtration(preset(name, level), W)
    assert rep.equal


def test_small_cap_rejected():
    with pytest.raises(TruncationTooSmall):
        zhu_truncation(preset("heisenberg"), 1)
