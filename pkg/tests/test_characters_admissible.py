from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from walgebra.characters_admissible import (
    CapInsufficient, CriticalLevel, admissible_weight, affine_dominant, cap_stable,
    class_characters, denominator_check, dot, finite_denominator, fkw_as_verma_sum,
    fkw_character, is_admissible_level, nondegenerate_classes, orbit_partition,
    orbit_partition_bruteforce, rho, vadd, verma_w_character,
)
from walgebra.scalar_core import Q


def rocha_caridi(p: int, pp: int, r: int, s: int, order: int) -> tuple[Fraction, list]:
    """Virasoro (p, p') minimal-model character chi_{r,s} by the two-sided alternating sum."""
    N = 4 * p * pp
    exps = []
    for k in range(-order - 3, order + 4):
        exps.append((Fraction((2 * p * pp * k + pp * r - p * s) ** 2, N), 1))
        exps.append((Fraction((2 * p * pp * k + pp * r + p * s) ** 2, N), -1))
    e0 = min(e for e, _ in exps)
    num = [0] * (order + 1)
    for e, sign in exps:
        d = e - e0
        if d <= order:
            num[int(d)] += sign
    q = sympy.Symbol("q")
    geom = [sum(q ** (j * m) for m in range(order // j + 1)) for j in range(1, order + 1)]
    inv = sympy.Poly(sympy.expand(sympy.prod(geom)), q)
    out = [sum(num[i] * int(inv.coeff_monomial(q ** (m - i))) for i in range(m + 1))
           for m in range(order + 1)]
    h = Fraction((pp * r - p * s) ** 2 - (p - pp) ** 2, 4 * p * pp)
    return h, out


def ints(series) -> list:
    return [int(c) for c in series.coeffs]


def test_admissible_level_examples():
    assert is_admissible_level(2, Q(-1, 2)) == "nondegenerate"
    assert is_admissible_level(2, 0) == "admissible"
    assert is_admissible_level(3, Q(-1, 2)) == "admissible"
    assert is_admissible_level(2, Q(-3, 2)) == "not admissible"
    assert is_admissible_level(2, -2) == "not admissible"


@pytest.mark.parametrize("n,q,expected", [(4, 3, (3, 1)), (2, 5, (2,)), (6, 3, (3, 3)), (7, 2, (2, 2, 2, 1))])
def test_orbit_partition_examples(n, q, expected):
    assert orbit_partition(n, q) == expected


@given(st.integers(1, 30), st.integers(1, 30))
def test_orbit_partition_sums_to_n(n, q):
    parts = orbit_partition(n, q)
    assert sum(parts) == n
    assert max(parts) == min(n, q)
    assert list(parts) == sorted(parts, reverse=True)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_orbit_partition_matches_rank_check(n):
    for q in range(1, 9):
        assert orbit_partition(n, q) == orbit_partition_bruteforce(n, q)


def test_verma_characters_are_colored_partitions():
    assert ints(verma_w_character(2, Q(1, 3), 0, 12)) == [int(sympy.partition(m)) for m in range(13)]
    assert ints(verma_w_character(3, Q(1, 3), 0, 3)) == [1, 2, 5, 10]
    assert verma_w_character(2, Q(1), 2 * (1 + 2), 3).offset == 1
    with pytest.raises(CriticalLevel):
        verma_w_character(2, -2, 0, 3)


def test_pentagonal_identity():
    alt, euler = denominator_check(20)
    pent = [0] * 21
    for k in range(-5, 6):
        e = k * (3 * k - 1) // 2
        if 0 <= e <= 20:
            pent[e] += (-1) ** k
    assert alt == euler == pent


def test_finite_denominator_differs_from_infinite_product():
    # prod_{j=1}^{n-1} is a polynomial, prod_{j>=1} is not
    alt, euler = denominator_check(20)
    assert finite_denominator(2, 20) != euler


def test_trivial_model():
    ch = fkw_character(2, 2, 3, (0,), (1,), 20)
    assert ints(ch.character) == [1] + [0] * 20
    assert ch.conformal_weight == 0
    w = admissible_weight(2, 2, 3, (0,), (1,))
    assert w.finite == tuple(-Q(2, 3) * x for x in rho(2))


@pytest.mark.parametrize("p,q", [(3, 4), (2, 5), (4, 5), (5, 6)])
def test_sl2_classes_match_virasoro_minimal_models(p, q):
    classes = nondegenerate_classes(2, p, q)
    assert classes.count == (p - 1) * (q - 1) // 2
    ours = sorted((Fraction(str(c.conformal_weight)), ints(c.character)) for c in class_characters(2, p, q, 12))
    theirs = set()
    for r in range(1, p):
        for s in range(1, q):
            h, cs = rocha_caridi(p, q, r, s, 12)
            theirs.add((h, tuple(cs)))
    assert sorted((h, list(cs)) for h, cs in theirs) == ours


def test_ising():
    chars = class_characters(2, 3, 4, 8)
    assert len(chars) == 3
    assert sorted(c.conformal_weight for c in chars) == [0, Q(1, 16), Q(1, 2)]
    assert all(c.character.coeffs[0] == 1 for c in chars)
    assert len({tuple(ints(c.character)) for c in chars}) == 3


def test_w3_potts_vacuum_is_sum_of_virasoro_modules():
    ours = ints(fkw_character(3, 4, 5, (0, 0), (0, 0), 10).character)
    _, chi0 = rocha_caridi(5, 6, 1, 1, 10)
    h3, chi3 = rocha_caridi(5, 6, 1, 5, 10)
    assert h3 == 3
    assert ours == [a + (chi3[m - 3] if m >= 3 else 0) for m, a in enumerate(chi0)]


def test_class_counts_and_freeness():
    assert nondegenerate_classes(2, 2, 3).count == 1
    rep = nondegenerate_classes(3, 4, 5)
    assert rep.count == 6 and rep.free and not rep.notes
    with pytest.raises(ValueError):
        nondegenerate_classes(2, 4, 6)


@pytest.mark.parametrize("n,p,q", [(2, 3, 4), (2, 5, 7), (3, 4, 5), (3, 5, 7)])
def test_characters_are_nonnegative_integers(n, p, q):
    for c in class_characters(n, p, q, 8):
        assert all(x >= 0 and x.denominator == 1 for x in c.character.coeffs)


@pytest.mark.parametrize("n,p,q", [(2, 3, 4), (2, 2, 5), (3, 4, 5)])
def test_conformal_weight_from_admissible_weight(n, p, q):
    t = Q(p, q)
    r = rho(n)
    for a in affine_dominant(n, p - n):
        for b in affine_dominant(n, q - n):
            w = admissible_weight(n, p, q, a[1:], b[1:])
            assert w.regular_dominant()
            lr = vadd(w.finite, r)
            h = (dot(lr, lr) - dot(r, r)) / (2 * t) - dot(w.finite, r)
            assert h == fkw_character(n, p, q, a[1:], b[1:], 2).conformal_weight


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([(2, 3, 4), (2, 3, 5), (3, 4, 5)]), st.integers(2, 12))
def test_raising_the_cap_is_stable(model, order):
    n, p, q = model
    lam, mu = (0,) * (n - 1), (0,) * (n - 1)
    try:
        assert cap_stable(n, p, q, lam, mu, order, 3)
    except CapInsufficient as exc:
        assert cap_stable(n, p, q, lam, mu, order, exc.required)


def test_cap_insufficient_reports_requirement():
    with pytest.raises(CapInsufficient) as info:
        fkw_character(2, 3, 4, (0,), (0,), 60, cap=2)
    assert info.value.required > 2
    fkw_character(2, 3, 4, (0,), (0,), 60, cap=info.value.required)


def test_sum_of_verma_characters():
    ch = fkw_character(2, 3, 4, (0,), (1,), 10)
    assert ints(fkw_as_verma_sum(2, 3, 4, (0,), (1,), 10)) == ints(ch.character)


def test_regular_dominance_detects_integral_walls():
    from walgebra.characters_admissible import AffineWeight

    assert not AffineWeight(2, Q(1), (Q(-1, 2), Q(1, 2))).regular_dominant()
    assert AffineWeight(2, Q(1), (Q(0), Q(0))).regular_dominant()
