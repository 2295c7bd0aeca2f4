from __future__ import annotations

import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from walgebra.lie_core import (
    LieData, charpoly_coeffs, check_triple, chi_vanishes_on_commutators, companion,
    cstar_weights, elementary_symmetric, highest_root_norm, kostant_slice_restriction,
    transversality_rank, verify_kostant_freeness,
)
from walgebra.scalar_core import Q


@pytest.mark.parametrize("n,kind", [(2, "sl"), (3, "sl"), (4, "sl"), (2, "gl"), (3, "gl")])
def test_structure_constants(n, kind):
    data = LieData(n, kind)
    assert data.dim == (n * n if kind == "gl" else n * n - 1)
    assert data.check_jacobi()
    assert data.is_invariant(data.trace_form)
    assert check_triple(data)
    assert chi_vanishes_on_commutators(data)


def test_grading_by_height():
    data = LieData(3, "gl")
    grades = sorted(data.grade(a) for a in range(data.dim))
    assert grades == [-2, -1, -1, 0, 0, 0, 1, 1, 2]
    for a in data.positive_indices:
        assert data.grade(a) > 0


def test_highest_root_norm_is_two():
    for n in range(2, 6):
        assert highest_root_norm(n) == 2


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3), st.lists(st.integers(-4, 4), min_size=9, max_size=9))
def test_charpoly_matches_sympy(coeffs, entries):
    A = [[Q(entries[3 * i + j]) for j in range(3)] for i in range(3)]
    t = sympy.Symbol("t")
    cp = sympy.Matrix(3, 3, entries).charpoly(t).all_coeffs()
    assert [int(c) for c in charpoly_coeffs(A)] == [int(c) for c in cp[1:]]
    # companion convention: det(tI - C) = t^n + a_n t^{n-1} + ... + a_1
    got = charpoly_coeffs(companion([Q(c) for c in coeffs]))
    assert [int(c) for c in got] == list(reversed(coeffs))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_kostant_slice_is_free(n):
    assert verify_kostant_freeness(n, samples=15, seed=n).passed
    assert transversality_rank(n) == n * n


def test_slice_restriction_is_elementary_symmetric_up_to_sign():
    n = 3
    for i in range(1, n + 1):
        p = kostant_slice_restriction(n, i)
        e = elementary_symmetric(n, i)
        # on f + h the lower-triangular f does not enter the determinant
        assert (p - e * (-1) ** i).is_zero()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_cstar_weights(n):
    # t^2 times the conjugation weight (n+1-2i) - (n+1-2j)
    w = cstar_weights(n)
    assert w == {(i, j): 2 + 2 * (j - i) for i in range(1, n + 1) for j in range(1, n + 1)}
    # f sits in weight 0, so rho fixes the slice base point
    assert all(w[(i + 1, i)] == 0 for i in range(1, n))


def test_random_brackets_antisymmetric():
    data = LieData(3, "sl")
    rng = random.Random(1)
    for _ in range(20):
        a, b = rng.randrange(data.dim), rng.randrange(data.dim)
        ab = data.bracket(a, b)
        ba = data.bracket(b, a)
        assert {k: -v for k, v in ab.items()} == ba
