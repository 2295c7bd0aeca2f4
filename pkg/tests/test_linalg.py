from __future__ import annotations

import random

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from walgebra.linalg import bareiss_rank, generic_rank, nullspace, rank, solve
from walgebra.polyring import MPoly
from walgebra.scalar_core import K, Q

matrices = st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=5)


def as_rows(m):
    return [{j: Q(x) for j, x in enumerate(row) if x} for row in m]


@settings(max_examples=50, deadline=None)
@given(matrices)
def test_rank_matches_sympy(m):
    assert rank(as_rows(m)) == sympy.Matrix(m).rank()


@settings(max_examples=50, deadline=None)
@given(matrices)
def test_nullspace_vectors_are_relations(m):
    cols = as_rows(m)
    kernel = nullspace(cols)
    assert len(kernel) == len(cols) - rank(cols)
    for vec in kernel:
        total = {}
        for i, x in vec.items():
            for j, y in cols[i].items():
                total[j] = total.get(j, 0) + x * y
        assert all(v == 0 for v in total.values())


def test_solve_finds_combination():
    cols = [{0: Q(1), 1: Q(2)}, {1: Q(1)}]
    assert solve(cols, {0: Q(3), 1: Q(7)}) == [Q(3), Q(1)]
    assert solve(cols[:1], {1: Q(1)}) is None


def test_symbolic_rank_drops_only_at_special_level():
    rows = [{0: K + 2, 1: Q(1)}, {0: Q(1), 1: 1 / (K + 2)}]
    assert bareiss_rank(rows) == 1
    rows = [{0: K, 1: Q(1)}, {0: Q(1), 1: K}]
    assert bareiss_rank(rows) == 2
    r, how = generic_rank(rows, (Q(13, 7),), exact_limit=0)
    assert (r, how) == (2, "specialized")
    assert generic_rank(rows, exact_limit=10) == (2, "bareiss")


def test_polynomial_ring_basics():
    x, y = MPoly.var("x"), MPoly.var("y")
    f = (x + y) * (x - y)
    assert (f - (x * x - y * y)).is_zero()
    rng = random.Random(0)
    for _ in range(10):
        a, b = rng.randint(-5, 5), rng.randint(-5, 5)
        assert ((x * a + y) * b - (x * (a * b) + y * b)).is_zero()
