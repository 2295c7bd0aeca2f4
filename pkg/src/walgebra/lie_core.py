"""Finite-dimensional Lie data for gl_n and sl_n.

Matrices are sparse dicts ``{(i, j): value}`` with 1-based indices.  Basis
elements are the matrix units e_ij (plus h_i = e_ii - e_{i+1,i+1} for sl_n),
ordered as negative roots, Cartan, positive roots, each block by height and
then index.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Sequence

from .polyring import MPoly
from .scalar_core import Q, Scalar

Matrix = dict


class DimensionMismatch(ValueError):
    pass


# --------------------------------------------------------------------------
# matrix helpers


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    out: dict = {}
    by_row: dict = {}
    for (k, j), y in b.items():
        by_row.setdefault(k, []).append((j, y))
    for (i, k), x in a.items():
        for j, y in by_row.get(k, ()):
            v = out.get((i, j), 0) + x * y
            if v == 0:
                out.pop((i, j), None)
            else:
                out[(i, j)] = v
    return out


def mat_add(a: Matrix, b: Matrix, s=1) -> Matrix:
    out = dict(a)
    for key, y in b.items():
        v = out.get(key, 0) + s * y
        if v == 0:
            out.pop(key, None)
        else:
            out[key] = v
    return out


def mat_scale(a: Matrix, c) -> Matrix:
    if c == 0:
        return {}
    return {key: x * c for key, x in a.items()}


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return mat_add(mat_mul(a, b), mat_mul(b, a), -1)


def trace(a: Matrix):
    return sum((x for (i, j), x in a.items() if i == j), Q(0))


def unit(i: int, j: int) -> Matrix:
    return {(i, j): Q(1)}


def to_dense(a: Matrix, n: int) -> list[list]:
    return [[a.get((i, j), Q(0)) for j in range(1, n + 1)] for i in range(1, n + 1)]


def from_dense(rows: Sequence[Sequence]) -> Matrix:
    return {(i + 1, j + 1): x for i, r in enumerate(rows) for j, x in enumerate(r) if x != 0}


def mat_inverse_unipotent(g: Matrix, n: int) -> Matrix:
    """Inverse of an upper unitriangular matrix via the finite Neumann series."""
    ident = {(i, i): Q(1) for i in range(1, n + 1)}
    nil = mat_add(g, ident, -1)
    out = dict(ident)
    term = dict(ident)
    for p in range(1, n):
        term = mat_mul(term, nil)
        out = mat_add(out, term, (-1) ** p)
    return out


# --------------------------------------------------------------------------
# Lie data


@dataclass
class LieData:
    """Structure data of gl_n (kind="gl") or sl_n (kind="sl")."""

    n: int
    kind: str = "gl"
    names: list = field(init=False)
    mats: list = field(init=False)

    def __post_init__(self):
        if self.n < 1 or self.kind not in ("gl", "sl"):
            raise ValueError("need n >= 1 and kind in {'gl', 'sl'}")
        n = self.n
        neg = sorted(((i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i > j),
                     key=lambda t: (t[0] - t[1], t))
        pos = sorted(((i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i < j),
                     key=lambda t: (t[1] - t[0], t))
        names, mats, kinds = [], [], []
        for i, j in neg:
            names.append(self._unit_name(i, j))
            mats.append(unit(i, j))
            kinds.append(("neg", (i, j)))
        if self.kind == "gl":
            for i in range(1, n + 1):
                names.append(self._unit_name(i, i))
                mats.append(unit(i, i))
                kinds.append(("cartan", i))
        else:
            for i in range(1, n):
                names.append("h" if n == 2 else f"h{i}")
                mats.append({(i, i): Q(1), (i + 1, i + 1): Q(-1)})
                kinds.append(("cartan", i))
        for i, j in pos:
            names.append(self._unit_name(i, j))
            mats.append(unit(i, j))
            kinds.append(("pos", (i, j)))
        self.names = names
        self.mats = mats
        self.kinds = kinds
        self.index = {nm: a for a, nm in enumerate(names)}

    def _unit_name(self, i: int, j: int) -> str:
        if self.kind == "sl" and self.n == 2:
            return {(1, 2): "e", (2, 1): "f"}[(i, j)]
        return f"e{i}{j}" if self.n < 10 else f"e{i}_{j}"

    # basic structure ------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.names)

    def coords(self, m: Matrix) -> dict:
        """Coordinates of a matrix (in the algebra) with respect to the basis."""
        out = {}
        for a, (kd, ij) in enumerate(self.kinds):
            if kd != "cartan" and m.get(ij, 0) != 0:
                out[a] = m[ij]
        if self.kind == "gl":
            for a, (kd, i) in enumerate(self.kinds):
                if kd == "cartan" and m.get((i, i), 0) != 0:
                    out[a] = m[(i, i)]
        else:
            if trace(m) != 0:
                raise ValueError("matrix is not traceless")
            acc = Q(0)
            for a, (kd, i) in enumerate(self.kinds):
                if kd == "cartan":
                    acc = acc + m.get((i, i), 0)
                    if acc != 0:
                        out[a] = acc
        return out

    def element(self, coords: dict) -> Matrix:
        out: Matrix = {}
        for a, c in coords.items():
            out = mat_add(out, self.mats[a], c)
        return out

    @cached_property
    def structure(self) -> dict:
        """{(a, b): {c: coefficient}} for [x_a, x_b] = sum_c coefficient x_c."""
        table = {}
        for a in range(self.dim):
            for b in range(self.dim):
                br = commutator(self.mats[a], self.mats[b])
                if br:
                    table[(a, b)] = self.coords(br)
        return table

    def bracket(self, a: int, b: int) -> dict:
        return self.structure.get((a, b), {})

    def bracket_coords(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for a, xa in x.items():
            for b, yb in y.items():
                for c, v in self.bracket(a, b).items():
                    nv = out.get(c, 0) + xa * yb * v
                    if nv == 0:
                        out.pop(c, None)
                    else:
                        out[c] = nv
        return out

    # roots -----------------------------------------------------------------
    @cached_property
    def positive_roots(self) -> list:
        return [ij for kd, ij in self.kinds if kd == "pos"]

    @staticmethod
    def height(root: tuple) -> int:
        i, j = root
        return j - i

    def root_index(self, i: int, j: int) -> int:
        return self.index[self._unit_name(i, j)]

    @cached_property
    def cartan_indices(self) -> list:
        return [a for a, (kd, _) in enumerate(self.kinds) if kd == "cartan"]

    @cached_property
    def negative_indices(self) -> list:
        return [a for a, (kd, _) in enumerate(self.kinds) if kd == "neg"]

    @cached_property
    def positive_indices(self) -> list:
        return [a for a, (kd, _) in enumerate(self.kinds) if kd == "pos"]

    def grade(self, a: int) -> int:
        """Eigenvalue j of ad(h/2) on x_a, i.e. the height with sign (0 on the Cartan)."""
        kd, ij = self.kinds[a]
        if kd == "cartan":
            return 0
        i, j = ij
        return j - i

    # sl2-triple and character ----------------------------------------------
    @cached_property
    def triple(self) -> tuple[Matrix, Matrix, Matrix]:
        n = self.n
        e = {(i, i + 1): Q(i * (n - i)) for i in range(1, n)}
        h = {(i, i): Q(n + 1 - 2 * i) for i in range(1, n + 1) if n + 1 - 2 * i != 0}
        f = {(i + 1, i): Q(1) for i in range(1, n)}
        return e, h, f

    def chi(self, a: int) -> Q:
        """chi(x) = tr(f x) on basis element x_a."""
        f = self.triple[2]
        return trace(mat_mul(f, self.mats[a]))

    # forms ---------------------------------------------------------------------
    def trace_form(self, a: int, b: int):
        return trace(mat_mul(self.mats[a], self.mats[b]))

    def killing_gl(self, a: int, b: int):
        """Killing form of gl_n: 2n tr(xy) - 2 tr(x) tr(y)."""
        x, y = self.mats[a], self.mats[b]
        return 2 * self.n * trace(mat_mul(x, y)) - 2 * trace(x) * trace(y)

    def form_matrix(self, form: Callable[[int, int], Scalar]) -> list[list]:
        return [[form(a, b) for b in range(self.dim)] for a in range(self.dim)]

    def is_invariant(self, form: Callable[[int, int], Scalar]) -> bool:
        for a in range(self.dim):
            for b in range(self.dim):
                if form(a, b) != form(b, a):
                    return False
                for c in range(self.dim):
                    lhs = sum((v * form(d, c) for d, v in self.bracket(a, b).items()), Q(0))
                    rhs = sum((v * form(a, d) for d, v in self.bracket(b, c).items()), Q(0))
                    if lhs != rhs:
                        return False
        return True

    def check_jacobi(self) -> bool:
        d = self.dim
        for a in range(d):
            for b in range(d):
                if self.bracket(a, b) != {c: -v for c, v in self.bracket(b, a).items()}:
                    return False
                for c in range(d):
                    t1 = self.bracket_coords(self.bracket(a, b), {c: 1})
                    t2 = self.bracket_coords(self.bracket(b, c), {a: 1})
                    t3 = self.bracket_coords(self.bracket(c, a), {b: 1})
                    tot: dict = {}
                    for t in (t1, t2, t3):
                        for key, v in t.items():
                            tot[key] = tot.get(key, 0) + v
                    if any(v != 0 for v in tot.values()):
                        return False
        return True

    def inspect(self) -> dict:
        from .scalar_core import to_string

        e, h, f = self.triple
        dense = lambda m: [[to_string(x) for x in row] for row in to_dense(m, self.n)]  # noqa: E731
        return {
            "n": self.n,
            "kind": self.kind,
            "basis": self.names,
            "positive_roots": [{"root": list(r), "height": self.height(r)} for r in self.positive_roots],
            "triple": {"e": dense(e), "h": dense(h), "f": dense(f)},
            "trace_form": [[to_string(x) for x in row] for row in self.form_matrix(self.trace_form)],
            "killing_gl": ([[to_string(x) for x in row] for row in self.form_matrix(self.killing_gl)]
                           if self.kind == "gl" else None),
        }


def check_triple(data: LieData) -> bool:
    e, h, f = data.triple
    return (commutator(e, f) == h and commutator(h, e) == mat_scale(e, 2)
            and commutator(h, f) == mat_scale(f, -2))


def highest_root_norm(n: int) -> Q:
    """kappa_0(theta, theta) for the trace form: (e_11 - e_nn | e_11 - e_nn)."""
    hth = {(1, 1): Q(1), (n, n): Q(-1)}
    return trace(mat_mul(hth, hth))


def chi_vanishes_on_commutators(data: LieData) -> bool:
    pos = data.positive_indices
    for a in pos:
        for b in pos:
            br = data.bracket(a, b)
            if sum((v * data.chi(c) for c, v in br.items()), Q(0)) != 0:
                return False
    return True


# --------------------------------------------------------------------------
# invariants and the companion slice


def charpoly_coeffs(A: Sequence[Sequence]) -> list:
    """Coefficients c_1..c_n with det(tI - A) = t^n + sum_i c_i t^{n-i}.

    Faddeev-LeVerrier recursion; only divides by integers, so it works for
    entries in Q, Q(k) or polynomial rings over Q.
    """
    n = len(A)
    if any(len(r) != n for r in A):
        raise DimensionMismatch("matrix must be square")
    zero = Q(0)
    M = [[zero] * n for _ in range(n)]
    c_prev = Q(1)
    coeffs = []
    for kk in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I
        AM = [[sum((A[i][t] * M[t][j] for t in range(n)), zero) for j in range(n)] for i in range(n)]
        for i in range(n):
            AM[i][i] = AM[i][i] + c_prev
        M = AM
        tr = sum((sum((A[i][t] * M[t][i] for t in range(n)), zero) for i in range(n)), zero)
        c = tr * Q(-1, kk)
        coeffs.append(c)
        c_prev = c
    return coeffs


def invariant_polys(n: int, A: Sequence[Sequence]) -> list:
    """p_1(A), ..., p_n(A) in the convention det(tI - A) = t^n + sum p_i t^{n-i}."""
    if len(A) != n:
        raise DimensionMismatch(f"expected a {n}x{n} matrix")
    return charpoly_coeffs(A)


def companion(coeffs: Sequence) -> list[list]:
    """Companion matrix with det(tI - A) = a_1 + a_2 t + ... + a_n t^{n-1} + t^n."""
    n = len(coeffs)
    A = [[Q(0)] * n for _ in range(n)]
    for i in range(1, n):
        A[i][i - 1] = Q(1)
    for i in range(n):
        A[i][n - 1] = -coeffs[i]
    return A


def kostant_slice_restriction(n: int, i: int) -> MPoly:
    """p_i on f + diag(h_1..h_n) as a polynomial in the variables ("h", j)."""
    if not 1 <= i <= n:
        raise ValueError("index out of range")
    f = LieData(n).triple[2]
    A = [[MPoly.const(f.get((r, c), 0)) for c in range(1, n + 1)] for r in range(1, n + 1)]
    for j in range(n):
        A[j][j] = A[j][j] + MPoly.var(("h", j + 1))
    return charpoly_coeffs(A)[i - 1]


def elementary_symmetric(n: int, i: int) -> MPoly:
    from itertools import combinations

    out = MPoly()
    for S in combinations(range(1, n + 1), i):
        term = MPoly.const(Q(1))
        for j in S:
            term = term * MPoly.var(("h", j))
        out = out + term
    return out


def in_f_plus_b(A: Sequence[Sequence]) -> bool:
    n = len(A)
    for i in range(n):
        for j in range(n):
            if i == j + 1 and A[i][j] != 1:
                return False
            if i > j + 1 and A[i][j] != 0:
                return False
    return True


@dataclass
class KostantReport:
    n: int
    samples: int
    seed: int
    in_slice: bool
    invariants_match: bool
    separating: bool

    @property
    def passed(self) -> bool:
        return self.in_slice and self.invariants_match and self.separating


def verify_kostant_freeness(n: int, samples: int, seed: int = 0) -> KostantReport:
    """Random N-conjugates of companion matrices stay in f + b with equal invariants."""
    if n > 4 or samples < 1:
        raise ValueError("need n <= 4 and samples >= 1")
    rng = random.Random(seed)
    in_slice = match = True
    seen: dict = {}
    separating = True
    for _ in range(samples):
        a = [Q(rng.randint(-5, 5)) for _ in range(n)]
        x = from_dense(companion(a))
        g = {(i, i): Q(1) for i in range(1, n + 1)}
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                v = rng.randint(-5, 5)
                if v:
                    g[(i, j)] = Q(v)
        y = mat_mul(mat_mul(g, x), mat_inverse_unipotent(g, n))
        Y = to_dense(y, n)
        in_slice &= in_f_plus_b(Y)
        inv_x = tuple(invariant_polys(n, to_dense(x, n)))
        match &= inv_x == tuple(invariant_polys(n, Y))
        # p_i of a companion matrix is a_{n+1-i}
        key = tuple(reversed(a))
        if inv_x in seen and seen[inv_x] != key:
            separating = False
        seen[inv_x] = key
        separating &= inv_x == key
    return KostantReport(n, samples, seed, in_slice, match, separating)


def transversality_rank(n: int) -> int:
    """dim(a + [g, f]) where a is spanned by the last column."""
    from .linalg import rank

    f = LieData(n).triple[2]
    rows = []
    for i in range(1, n + 1):
        rows.append({(i, n): Q(1)})
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            br = commutator(unit(i, j), f)
            if br:
                rows.append(br)
    return rank(rows)


def cstar_weights(n: int) -> dict:
    """t-weights of rho(t) = t^2 Ad(gamma(t)) on e_ij, gamma(t) = diag(t^{n+1-2i}).

    Computed by conjugating with a Laurent-monomial diagonal matrix.
    """
    t = MPoly.var("t")
    gam = {(i, i): MPoly({(("t", n + 1 - 2 * i),): Q(1)}) for i in range(1, n + 1)}
    gam_inv = {(i, i): MPoly({(("t", -(n + 1 - 2 * i)),): Q(1)}) for i in range(1, n + 1)}
    out = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            x = {(i, j): MPoly.const(Q(1))}
            y = mat_mul(mat_mul(gam, x), gam_inv)
            val = y[(i, j)] * t * t
            (mono,) = val.terms
            out[(i, j)] = dict(mono).get("t", 0)
    return out
