"""Concrete presentations: affine, Heisenberg, fermions, Virasoro and the BRST complex."""

from __future__ import annotations

from typing import Callable, Optional, Sequence, Union

from .lie_core import LieData
from .scalar_core import Q, K, Scalar, as_scalar
from .vertex_engine import Generator, State, VertexPresentation

FormSpec = Union[str, Sequence[Sequence]]


class InvalidForm(ValueError):
    pass


def resolve_form(data: LieData, form: FormSpec, level: Scalar = K) -> Callable[[int, int], Scalar]:
    """Turn a form spec into a bilinear function on basis indices.

    "trace" gives k*tr(xy); "kappa0" is the same on sl_n, where tr is the
    normalized form with kappa_0(theta, theta) = 2; "killing" is the Killing
    form of gl_n; a square matrix is used verbatim after an invariance check.
    """
    if isinstance(form, str):
        if form in ("trace", "kappa0"):
            if form == "kappa0" and data.kind != "sl":
                raise InvalidForm("kappa0 is defined on sl_n")
            return lambda a, b: level * data.trace_form(a, b)
        if form == "killing":
            return lambda a, b: data.killing_gl(a, b)
        raise InvalidForm(f"unknown form {form!r}")
    mat = [[as_scalar(x) for x in row] for row in form]
    if len(mat) != data.dim or any(len(r) != data.dim for r in mat):
        raise InvalidForm("form matrix has the wrong size")
    fn = lambda a, b: mat[a][b]  # noqa: E731
    if not data.is_invariant(fn):
        raise InvalidForm("form is not symmetric and invariant")
    return fn


def build_affine(n: int, kind: str = "sl", form: FormSpec = "trace", level: Scalar = K,
                 weights: str = "standard", name: Optional[str] = None) -> VertexPresentation:
    """Universal affine vertex algebra V^kappa(g) with [x_lambda y] = [x,y] + lambda kappa(x,y).

    ``weights="standard"`` gives every generator weight 1; ``"dynkin"`` uses
    the L_0 of the reduction complex, weight(x_a) = 1 - (height of a).
    """
    if n < 2 and kind == "sl":
        raise ValueError("sl_n needs n >= 2")
    data = LieData(n, kind)
    kappa = resolve_form(data, form, level)
    gens = []
    for a, nm in enumerate(data.names):
        w = Q(1) if weights == "standard" else Q(1 - data.grade(a))
        gens.append(Generator(nm, 0, w, 0, energy=Q(1)))
    P = VertexPresentation(gens, name or f"affine-{kind}{n}")
    _affine_brackets(P, data, kappa, offset=0)
    P.lie = data
    P.kappa = kappa
    return P.freeze()


def _affine_brackets(P: VertexPresentation, data: LieData, kappa, offset: int):
    for a in range(data.dim):
        for b in range(data.dim):
            br = data.bracket(a, b)
            c0 = {((offset + c, 1),): v for c, v in br.items()}
            c1 = kappa(a, b)
            if c0 or c1 != 0:
                P.set_bracket(P.generators[offset + a].name, P.generators[offset + b].name,
                              [c0, {(): c1} if c1 != 0 else {}])


def fermion_generators(data: LieData) -> list:
    """psi_alpha (charge -1, weight 1 - ht) and psistar_alpha (charge +1, weight ht)."""
    gens = []
    for root in data.positive_roots:
        ht = data.height(root)
        gens.append(Generator(_psi_name(data, root), 1, Q(1 - ht), -1, energy=Q(1)))
    for root in data.positive_roots:
        ht = data.height(root)
        gens.append(Generator(_psis_name(data, root), 1, Q(ht), 1, energy=Q(0)))
    return gens


def _suffix(data: LieData, root) -> str:
    return "" if data.n == 2 else f"{root[0]}{root[1]}"


def _psi_name(data: LieData, root) -> str:
    return "psi" + _suffix(data, root)


def _psis_name(data: LieData, root) -> str:
    return "psistar" + _suffix(data, root)


def _fermion_brackets(P: VertexPresentation, data: LieData):
    for root in data.positive_roots:
        a, b = _psi_name(data, root), _psis_name(data, root)
        P.set_bracket(a, b, [1])
        P.set_bracket(b, a, [1])


def build_fermions(n: int, kind: str = "sl") -> VertexPresentation:
    """Charged fermion Fock space F_n with [psi_alpha lambda psistar_beta] = delta."""
    data = LieData(n, kind)
    P = VertexPresentation(fermion_generators(data), f"fermions-{n}")
    _fermion_brackets(P, data)
    P.lie = data
    return P.freeze()


def build_complex(n: int, kind: str = "sl", form: FormSpec = "trace",
                  level: Scalar = K) -> VertexPresentation:
    """C^kappa(g) = V^kappa(g) tensor F with the L_0 weights of the reduction."""
    data = LieData(n, kind)
    kappa = resolve_form(data, form, level)
    gens = [Generator(nm, 0, Q(1 - data.grade(a)), 0, energy=Q(1))
            for a, nm in enumerate(data.names)]
    gens += fermion_generators(data)
    P = VertexPresentation(gens, f"complex-{kind}{n}")
    _affine_brackets(P, data, kappa, offset=0)
    _fermion_brackets(P, data)
    P.lie = data
    P.kappa = kappa
    return P.freeze()


def build_heisenberg(kappa: Scalar = Q(1), name: str = "b") -> VertexPresentation:
    """Rank-one Heisenberg pi with [b_lambda b] = kappa * lambda."""
    P = VertexPresentation([Generator(name, 0, Q(1))], "heisenberg")
    P.set_bracket(name, name, [0, as_scalar(kappa)])
    return P.freeze()


def build_multi_heisenberg(gram: Sequence[Sequence], names: Sequence[str]) -> VertexPresentation:
    """Heisenberg algebra with [J_i lambda J_j] = gram[i][j] * lambda."""
    P = VertexPresentation([Generator(nm, 0, Q(1)) for nm in names], "heisenberg")
    for i, a in enumerate(names):
        for j, b in enumerate(names):
            g = as_scalar(gram[i][j])
            if g != 0:
                P.set_bracket(a, b, [0, g])
    return P.freeze()


def build_virasoro(c: Scalar) -> VertexPresentation:
    """Universal Virasoro vertex algebra: [L_lambda L] = (T + 2 lambda) L + c/12 lambda^3."""
    P = VertexPresentation([Generator("L", 0, Q(2))], "virasoro")
    P.set_bracket("L", "L", [{((0, 2),): Q(1)}, {((0, 1),): Q(2)}, 0,
                             {(): as_scalar(c) / 2}])
    return P.freeze()


def hat_rho_embedding(n: int, kind: str = "sl") -> tuple[VertexPresentation, dict]:
    """rho-hat(x_alpha) = sum c_{alpha,beta}^gamma :psistar_beta psi_gamma: for alpha > 0.

    Returns the fermion presentation and {root: State}.
    """
    P = build_fermions(n, kind)
    data = P.lie
    out = {}
    for root in data.positive_roots:
        a = data.root_index(*root)
        terms = State(P, {})
        for beta in data.positive_roots:
            b = data.root_index(*beta)
            for c, v in data.bracket(a, b).items():
                gamma = data.kinds[c][1]
                s = P.normally_ordered(P.gen(_psis_name(data, beta)), P.gen(_psi_name(data, gamma)))
                terms = terms + s * v
        out[root] = terms
    return P, out


def check_hat_rho(n: int, kind: str = "sl") -> bool:
    """[rho(x)_lambda rho(y)] = rho([x, y]) for all positive root vectors."""
    P, rho = hat_rho_embedding(n, kind)
    data = P.lie
    for r1, s1 in rho.items():
        for r2, s2 in rho.items():
            br = P.lambda_bracket(s1, s2)
            target = State(P, {})
            for c, v in data.bracket(data.root_index(*r1), data.root_index(*r2)).items():
                target = target + rho[data.kinds[c][1]] * v
            if any(j != 0 for j in br.coeffs) or not (br[0] - target).is_zero():
                return False
    return True


PRESETS = {
    "affine-sl2": lambda level=K: build_affine(2, "sl", "kappa0", level),
    "affine-sl3": lambda level=K: build_affine(3, "sl", "kappa0", level),
    "affine-gl2": lambda level=K: build_affine(2, "gl", "trace", level),
    "affine-gl3": lambda level=K: build_affine(3, "gl", "trace", level),
    "fermions-2": lambda level=K: build_fermions(2),
    "fermions-3": lambda level=K: build_fermions(3),
    "complex-sl2": lambda level=K: build_complex(2, "sl", "kappa0", level),
    "complex-sl3": lambda level=K: build_complex(3, "sl", "kappa0", level),
    "heisenberg": lambda level=K: build_heisenberg(Q(1)),
    "virasoro": lambda level=K: build_virasoro(1 - 6 * (level + 1) ** 2 / (level + 2)),
}


def preset(name: str, level: Scalar = K) -> VertexPresentation:
    try:
        return PRESETS[name](level)
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
