from __future__ import annotations

import pytest

from walgebra.free_fields import (
    InvalidForm, build_affine, build_complex, build_multi_heisenberg, preset, resolve_form,
)
from walgebra.lie_core import LieData
from walgebra.scalar_core import K, Q


def test_trace_form_on_gl2():
    P = preset("affine-gl2")
    br = P.lambda_bracket(P.gen("e11"), P.gen("e11"))
    assert br[1] == P.vacuum(K)
    br = P.lambda_bracket(P.gen("e12"), P.gen("e21"))
    assert br[0] == P.gen("e11") - P.gen("e22")


def test_form_validation():
    data = LieData(2, "gl")
    with pytest.raises(InvalidForm):
        resolve_form(data, "kappa0")
    with pytest.raises(InvalidForm):
        resolve_form(data, [[1, 0], [0, 1]])
    bad = [[Q(int(i == j and i == 0)) for j in range(4)] for i in range(4)]
    with pytest.raises(InvalidForm):
        resolve_form(data, bad)


def test_complex_has_ghost_pairs():
    C = build_complex(3, "sl", "kappa0")
    names = [g.name for g in C.generators]
    assert len(names) == 8 + 2 * 3
    assert sum(1 for g in C.generators if g.parity) == 6
    charges = sorted(g.charge for g in C.generators if g.parity)
    assert charges == [-1, -1, -1, 1, 1, 1]


def test_dynkin_weights():
    P = build_affine(3, "sl", "kappa0", weights="dynkin")
    weights = {g.name: int(g.weight) for g in P.generators}
    assert weights["e13"] == -1 and weights["e31"] == 3 and weights["h1"] == 1


def test_multi_heisenberg_gram():
    P = build_multi_heisenberg([[Q(2), Q(1)], [Q(1), Q(2)]], ["a", "b"])
    assert P.lambda_bracket(P.gen("a"), P.gen("b"))[1] == P.vacuum(Q(1))


def test_unknown_preset():
    with pytest.raises(ValueError):
        preset("nope")
