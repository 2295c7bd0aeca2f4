"""The affine BRST reduction: Q-hat, the conformal vector L and the subcomplex C_-.

The full complex C = V^k(g) (x) F is only used for certificates: the
nilpotency of Q-hat, the field L, and the bracket table of the subcomplex
C_- generated by J_a (a in b_-) and psistar_alpha.  Cohomology is computed
on C_-, whose (weight, charge) pieces are finite dimensional.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .free_fields import build_complex
from .lie_core import LieData
from .linalg import Echelon, PRIME, generic_rank, nullspace, solve
from .scalar_core import K, Q, Scalar, euler_product, product_series
from .vertex_engine import Generator, LambdaPoly, State, VertexPresentation

#: rational values of k used for specialized rank bounds (k + n stays nonzero)
SPECIALIZATIONS = (Q(13, 7), Q(-29, 11), Q(53, 17))

#: weight caps guaranteed by the acceptance criteria
WEIGHT_CAPS = {2: 6, 3: 4}


class NilpotencyFailure(ArithmeticError):
    pass


class NotInSubcomplex(ArithmeticError):
    pass


class TruncationTooSmall(ValueError):
    pass


def _psi(data: LieData, root) -> str:
    return "psi" + ("" if data.n == 2 else f"{root[0]}{root[1]}")


def _psis(data: LieData, root) -> str:
    return "psistar" + ("" if data.n == 2 else f"{root[0]}{root[1]}")


# --------------------------------------------------------------------------
# Q-hat


@dataclass
class BRSTDifferential:
    n: int
    kind: str
    level: Scalar
    complex: VertexPresentation
    Q: State
    residual: LambdaPoly

    @property
    def nilpotent(self) -> bool:
        return self.residual.is_zero()

    @property
    def lie(self) -> LieData:
        return self.complex.lie

    def apply(self, v: State) -> State:
        """Q-hat_(0) v in the full complex."""
        return self.complex.mode(self.Q, 0, v)


def q_hat_state(P: VertexPresentation) -> State:
    """sum (x_alpha + chi(x_alpha)) psistar_alpha - 1/2 sum c psistar psistar psi."""
    data = P.lie
    out = P.zero()
    for root in data.positive_roots:
        a = data.root_index(*root)
        ps = P.gen(_psis(data, root))
        out = out + P.normally_ordered(P.gen(data.names[a]), ps)
        chi = data.chi(a)
        if chi != 0:
            out = out + ps * chi
    for ra in data.positive_roots:
        for rb in data.positive_roots:
            a, b = data.root_index(*ra), data.root_index(*rb)
            for c, v in data.bracket(a, b).items():
                rg = data.kinds[c][1]
                inner = P.normally_ordered(P.gen(_psis(data, rb)), P.gen(_psi(data, rg)))
                cubic = P.normally_ordered(P.gen(_psis(data, ra)), inner)
                out = out - cubic * (v / 2)
    return out


def build_Q_hat(n: int, kind: str = "sl", level: Scalar = K) -> BRSTDifferential:
    """Q-hat in C^k(g) together with the residual [Q_lambda Q], which must vanish."""
    if not 2 <= n <= 3:
        raise ValueError("build_Q_hat supports n = 2, 3")
    form = "kappa0" if kind == "sl" else "trace"
    P = build_complex(n, kind, form, level)
    Qs = q_hat_state(P)
    res = P.lambda_bracket(Qs, Qs)
    diff = BRSTDifferential(n, kind, level, P, Qs, res)
    if not diff.nilpotent:
        raise NilpotencyFailure(f"[Q_lambda Q] != 0 for {kind}{n}")
    return diff


# --------------------------------------------------------------------------
# the conformal vector


@dataclass
class GradingOperator:
    n: int
    L: State
    central_charge: Scalar
    eigenvalues: dict
    q_closed: bool
    virasoro: bool

    def expected_central_charge(self):
        n, k = self.n, K
        return (n - 1) * (1 - n * (n + 1) * (n + k - 1) ** 2 / (n + k))


def dual_basis(data: LieData) -> list[dict]:
    """x^a in coordinates, dual to x_a under the trace form."""
    cols = [{b: data.trace_form(a, b) for b in range(data.dim) if data.trace_form(a, b) != 0}
            for a in range(data.dim)]
    out = []
    for a in range(data.dim):
        x = solve(cols, {a: Q(1)})
        if x is None:
            raise ValueError("trace form is degenerate")
        out.append({b: v for b, v in enumerate(x) if v != 0})
    return out


def conformal_vector(diff: BRSTDifferential) -> State:
    """L = L_sug + T(rho-check) + L_F in the sl_n complex."""
    P, data, n = diff.complex, diff.lie, diff.n
    if diff.kind != "sl":
        raise ValueError("the conformal vector is built for sl_n")
    sug = P.zero()
    for a, dual in enumerate(dual_basis(data)):
        for b, v in dual.items():
            sug = sug + P.normally_ordered(P.gen(data.names[a]), P.gen(data.names[b])) * v
    L = sug * (1 / (2 * (diff.level + n)))
    rho = data.coords({ij: x / 2 for ij, x in data.triple[1].items()})
    for a, v in rho.items():
        L = L + P.translate(P.gen(data.names[a])) * v
    for root in data.positive_roots:
        ht = data.height(root)
        psi, psis = P.gen(_psi(data, root)), P.gen(_psis(data, root))
        L = L + P.normally_ordered(P.translate(psi), psis) * ht
        L = L + P.normally_ordered(P.translate(psis), psi) * (1 - ht)
    return L


def _eigenvalue(P: VertexPresentation, L: State, v: State) -> Optional[Scalar]:
    w = P.mode(L, 1, v)
    if w.is_zero():
        return Q(0)
    mono, c = next(iter(v.terms.items()))
    lam = w.terms.get(mono, Q(0)) / c
    return lam if (w - v * lam).is_zero() else None


def grading_operator(n: int, level: Scalar = K, diff: Optional[BRSTDifferential] = None,
                     minus: Optional["MinusComplex"] = None) -> GradingOperator:
    """L with its central charge, Q-closedness and L_0 eigenvalues on generators."""
    diff = diff or build_Q_hat(n, "sl", level)
    P = diff.complex
    L = conformal_vector(diff)
    br = P.lambda_bracket(L, L)
    # br[3] is the lambda^3 coefficient c/12
    c = br[3].terms.get((), Q(0)) * 12
    vir = (br[0] - P.translate(L)).is_zero() and (br[1] - L * 2).is_zero() \
        and br[2].is_zero() and (br[3] - P.vacuum(c / 12)).is_zero() and br.degree() <= 3
    eig = {}
    for g in P.generators:
        eig[g.name] = _eigenvalue(P, L, P.gen(g.name))
    if minus is not None:
        for i, g in enumerate(minus.M.generators):
            eig[g.name] = _eigenvalue(P, L, minus.images[i])
    closed = diff.apply(L).is_zero()
    return GradingOperator(n, L, c, eig, closed, vir)


# --------------------------------------------------------------------------
# the subcomplex C_-


def _j_name(data: LieData, a: int) -> str:
    return "J" + data.names[a]


@dataclass
class MinusComplex:
    """C_- as an abstract vertex algebra M with its embedding into C."""

    diff: BRSTDifferential
    M: VertexPresentation
    images: list
    dgen: list
    _img: dict = field(default_factory=dict, repr=False)
    _d: dict = field(default_factory=dict, repr=False)

    # embedding --------------------------------------------------------------
    def image_mono(self, mono: tuple) -> dict:
        hit = self._img.get(mono)
        if hit is None:
            C = self.diff.complex
            if not mono:
                hit = {(): Q(1)}
            else:
                (g, d), rest = mono[0], mono[1:]
                hit = C.mode(self.images[g], -d, State(C, self.image_mono(rest))).terms
            self._img[mono] = hit
        return hit

    def image(self, s: State) -> State:
        C = self.diff.complex
        out = C.zero()
        for mono, c in s.terms.items():
            out = out + State(C, self.image_mono(mono)) * c
        return out

    # the differential -------------------------------------------------------
    def d_mono(self, mono: tuple) -> dict:
        """Q-hat_(0) on a monomial of M, as an odd derivation of the modes."""
        hit = self._d.get(mono)
        if hit is None:
            M = self.M
            if not mono:
                hit = {}
            else:
                (g, dd), rest = mono[0], mono[1:]
                restS = State(M, {rest: Q(1)})
                out = M.mode(State(M, self.dgen[g]), -dd, restS)
                inner = State(M, self.d_mono(rest))
                tail = M.gen_mode(g, -dd, inner)
                out = out - tail if M.odd[g] else out + tail
                hit = out.terms
            self._d[mono] = hit
        return hit

    def d(self, s: State) -> State:
        out: dict = {}
        for mono, c in s.terms.items():
            for m2, c2 in self.d_mono(mono).items():
                v = out.get(m2, 0) + c * c2
                if v == 0:
                    out.pop(m2, None)
                else:
                    out[m2] = v
        return State(self.M, out)

    # pieces -----------------------------------------------------------------
    def basis(self, weight: int, charge: int) -> list:
        return self.M.basis(weight, "weight", charge)

    def columns(self, weight: int, charge: int) -> tuple[list, list, list]:
        """(source basis, target basis, columns of d as dicts over target indices)."""
        src = self.basis(weight, charge)
        tgt = self.basis(weight, charge + 1)
        pos = {m: i for i, m in enumerate(tgt)}
        cols = []
        for m in src:
            col = {}
            for m2, c in self.d_mono(m).items():
                if m2 not in pos:
                    raise NotInSubcomplex(f"d maps outside the ({weight}, {charge + 1}) piece")
                col[pos[m2]] = c
            cols.append(col)
        return src, tgt, cols


def _express(C: VertexPresentation, images: dict, basis: list, target: State) -> Optional[dict]:
    e = Echelon(track=True)
    for i, m in enumerate(basis):
        e.add(images[m], label=i)
    comb = e.express(target.terms)
    if comb is None:
        return None
    return {basis[i]: v for i, v in comb.items() if v != 0}


def build_minus(diff: BRSTDifferential) -> MinusComplex:
    """Generators J_a = x_a + sum c_{a,beta}^gamma :psi_gamma psistar_beta: and psistar_alpha.

    The bracket table and Q-hat_(0) on generators are computed in the full
    complex and solved back into C_-; failure to solve raises NotInSubcomplex.
    """
    C, data = diff.complex, diff.lie
    gens, images = [], []
    for a in data.negative_indices + data.cartan_indices:
        w = 1 - data.grade(a)
        gens.append(Generator(_j_name(data, a), 0, Q(w), 0, energy=Q(w)))
        img = C.gen(data.names[a])
        for beta in data.positive_roots:
            b = data.root_index(*beta)
            for c, v in data.bracket(a, b).items():
                if data.kinds[c][0] != "pos":
                    continue
                gamma = data.kinds[c][1]
                img = img + C.normally_ordered(C.gen(_psi(data, gamma)), C.gen(_psis(data, beta))) * v
        images.append(img)
    for root in data.positive_roots:
        ht = data.height(root)
        gens.append(Generator(_psis(data, root), 1, Q(ht), 1, energy=Q(ht)))
        images.append(C.gen(_psis(data, root)))
    M = VertexPresentation(gens, f"minus-{diff.kind}{diff.n}")
    M.lie = data
    mc = MinusComplex(diff, M, images, [None] * len(gens))

    def express(state: State, weight, charge) -> dict:
        if state.is_zero():
            return {}
        basis = mc.basis(weight, charge)
        imgs = {m: mc.image_mono(m) for m in basis}
        sol = _express(C, imgs, basis, state)
        if sol is None:
            raise NotInSubcomplex(f"state of weight {weight}, charge {charge} is not in C_-")
        return sol

    for i, gi in enumerate(gens):
        for j, gj in enumerate(gens):
            jmax = int(gi.weight + gj.weight) - 1
            coeffs = []
            for p in range(0, max(jmax, -1) + 1):
                s = C.mode(images[i], p, images[j])
                coeffs.append(express(s, gi.weight + gj.weight - p - 1, gi.charge + gj.charge))
            if any(coeffs):
                M.set_bracket(gi.name, gj.name, coeffs)
    M.freeze()
    for i, gi in enumerate(gens):
        mc.dgen[i] = express(diff.apply(images[i]), gi.weight, gi.charge + 1)
    return mc


# --------------------------------------------------------------------------
# cohomology


def predicted_h0(n: int, weight_max: int, kind: str = "sl") -> list:
    """q-coefficients of prod_{i=2}^n prod_{m>=0} (1 - q^{i+m})^{-1} (times the I tower for gl)."""
    exps: dict = {}
    for i in range(2, n + 1):
        for m in range(i, weight_max + 1):
            exps[m] = exps.get(m, 0) - 1
    s = product_series(exps, weight_max)
    if kind == "gl":
        s = s * euler_product(weight_max, power=-1)
    return [int(x) for x in s.coeffs]


@dataclass
class CohomologyTable:
    n: int
    kind: str
    weight_max: int
    piece_dims: dict
    ranks: dict
    rank_methods: dict
    dims: dict
    d_squared_zero: bool
    certified: bool
    predicted: list
    specializations_agree: bool = True

    def h0(self) -> list:
        return [self.dims.get((w, 0), 0) for w in range(self.weight_max + 1)]

    def vanishing_off_zero(self) -> bool:
        return all(v == 0 for (w, c), v in self.dims.items() if c != 0)

    def to_obj(self) -> dict:
        return {
            "n": self.n,
            "kind": self.kind,
            "weight_max": self.weight_max,
            "dims": [{"weight": w, "charge": c, "dim": v} for (w, c), v in sorted(self.dims.items())],
            "piece_dims": [{"weight": w, "charge": c, "dim": v}
                           for (w, c), v in sorted(self.piece_dims.items())],
            "d_squared_zero": self.d_squared_zero,
            "certified": self.certified,
            "specializations_agree": self.specializations_agree,
            "predicted_h0": self.predicted,
        }


def cohomology_dims(n: int, weight_max: int, kind: str = "sl", level: Scalar = K,
                    exact_limit: int = 400, force: bool = False,
                    minus: Optional[MinusComplex] = None) -> CohomologyTable:
    """dim H^c of (C_-, Q-hat_(0)) in each weight <= weight_max and charge |c| <= 2.

    Ranks over Q(k) come from fraction-free elimination for matrices up to
    ``exact_limit`` rows and columns; every such rank is compared with the
    ranks at three rational specializations (``specializations_agree``).
    Larger matrices use the specialized ranks, which bound the generic rank
    from below.  The Euler characteristic of a weight piece does not depend
    on k, so when the bounds leave no cohomology off charge 0 the charge-0
    dimension is exact; ``certified`` records whether that happened.
    """
    if not force and weight_max > WEIGHT_CAPS.get(n, -1):
        raise TruncationTooSmall(f"weight cap {weight_max} is beyond the supported range for n={n}")
    mc = minus or build_minus(build_Q_hat(n, kind, level))
    M = mc.M
    piece, ranks, methods, dims = {}, {}, {}, {}
    dsq = agree = True
    for w in range(weight_max + 1):
        top = w  # each psistar has weight >= 1
        for c in range(0, top + 2):
            piece[(w, c)] = len(mc.basis(w, c))
        for c in range(0, top + 1):
            src, tgt, cols = mc.columns(w, c)
            r, how = generic_rank(cols, SPECIALIZATIONS, PRIME, exact_limit)
            ranks[(w, c)] = r
            methods[(w, c)] = how
            if how == "bareiss":
                spec, _ = generic_rank(cols, SPECIALIZATIONS, PRIME, 0)
                agree = agree and spec == r
            for m in src:
                if mc.d(mc.d(State(M, {m: Q(1)}))).terms:
                    dsq = False
        euler = 0
        for c in range(-2, top + 2):
            dim_c = piece.get((w, c), 0)
            h = dim_c - ranks.get((w, c), 0) - ranks.get((w, c - 1), 0)
            dims[(w, c)] = h
            euler += dim_c if c % 2 == 0 else -dim_c
        for c in range(-2, 3):
            dims.setdefault((w, c), 0)
        if all(dims[(w, c)] == 0 for c in range(-2, top + 2) if c != 0):
            dims[(w, 0)] = euler
    cert = all(v == 0 for (w, c), v in dims.items() if c != 0) and all(v >= 0 for v in dims.values())
    dims = {key: v for key, v in dims.items() if -2 <= key[1] <= 2}
    return CohomologyTable(n, kind, weight_max, piece, ranks, methods, dims, dsq, cert,
                           predicted_h0(n, weight_max, kind), agree)


def find_closed_generators(n: int, weight: int, kind: str = "sl", level: Scalar = K,
                           minus: Optional[MinusComplex] = None) -> list:
    """A basis of ker Q-hat_(0) at (weight, charge 0) modulo the image (which is zero in C_-)."""
    mc = minus or build_minus(build_Q_hat(n, kind, level))
    src, _, cols = mc.columns(weight, 0)
    out = []
    for vec in nullspace(cols):
        out.append(State(mc.M, {src[i]: v for i, v in vec.items()}))
    return out


def virasoro_from_closed(mc: MinusComplex, W: State) -> Optional[Scalar]:
    """If [W_lambda W] = s((T + 2 lambda) W) + s^2 c/12 lambda^3 for some s, return c."""
    M = mc.M
    br = M.lambda_bracket(W, W)
    if not br[2].is_zero() or br.degree() > 3:
        return None
    one = br[1]
    if one.is_zero():
        return None
    mono, c1 = next(iter(W.terms.items()))
    s = one.terms.get(mono, Q(0)) / c1 / 2
    if (one - W * (2 * s)).is_zero() and (br[0] - M.translate(W) * s).is_zero():
        lam3 = br[3].terms.get((), Q(0))
        if (br[3] - M.vacuum(lam3)).is_zero():
            return 12 * lam3 / (s * s)
    return None


def check_against_complex(mc: MinusComplex, weight_max: int) -> bool:
    """The derivation on C_- agrees with Q-hat_(0) computed in the full complex."""
    for w in range(weight_max + 1):
        for c in range(0, w + 1):
            for m in mc.basis(w, c):
                lhs = mc.image(State(mc.M, mc.d_mono(m)))
                rhs = mc.diff.apply(State(mc.diff.complex, mc.image_mono(m)))
                if not (lhs - rhs).is_zero():
                    return False
    return True


def check_kernel_closure(mc: MinusComplex, weight_max: int) -> bool:
    """:uv: and every coefficient of [u_lambda v] are closed for closed u, v of charge 0."""
    closed = []
    for w in range(1, weight_max + 1):
        src, _, cols = mc.columns(w, 0)
        closed += [State(mc.M, {src[i]: v for i, v in vec.items()}) for vec in nullspace(cols)]
    M = mc.M
    for u in closed:
        for v in closed:
            if not mc.d(M.normally_ordered(u, v)).is_zero():
                return False
            br = M.lambda_bracket(u, v)
            if any(not mc.d(br[j]).is_zero() for j in br.coeffs):
                return False
    return True
