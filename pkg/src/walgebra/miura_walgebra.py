"""W-algebra generators from the column determinant and their Miura images.

The column determinant of B is expanded in U(b[t^-1]t^-1) (x) C[tau], whose
elements are dicts ``{(word, p): coefficient}`` meaning word * tau^p, with a
word a tuple of letters ``(a, m)`` for x_a t^{-m}.  Moving tau to the right
uses [tau, x_(-m)] = m x_(-m-1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Optional

from .free_fields import build_multi_heisenberg
from .lie_core import LieData
from .linalg import generic_rank, solve
from .scalar_core import K, Q, Scalar, evaluate, to_string
from .vertex_engine import State, VertexPresentation, jacobi_residual, skew_residual

SPECIALIZATIONS = (Q(13, 7), Q(-29, 11), Q(53, 17))


class MiuraMismatch(AssertionError):
    def __init__(self, index: int, lhs, rhs):
        super().__init__(f"coefficient W^({index}) differs: {lhs} != {rhs}")
        self.index = index
        self.lhs = lhs
        self.rhs = rhs


class NotVirasoro(AssertionError):
    pass


class ClosureFailure(AssertionError):
    pass


def alpha(n: int, level: Scalar = K) -> Scalar:
    return level + n - 1


# --------------------------------------------------------------------------
# U(b[t^-1]t^-1) (x) C[tau]


def _acc(out: dict, key, c):
    v = out.get(key, 0) + c
    if v == 0:
        out.pop(key, None)
    else:
        out[key] = v


_TAU: dict = {}


def tau_past(p: int, word: tuple) -> dict:
    """tau^p * word written as {(word', q): c} with tau^q on the right."""
    key = (p, word)
    hit = _TAU.get(key)
    if hit is not None:
        return hit
    out: dict = {}
    if p == 0 or not word:
        out[(word, p)] = Q(1)
    else:
        # tau^p x w = tau^(p-1) (x tau w + m x' w)
        (a, m), rest = word[0], word[1:]
        for (w1, q1), c1 in tau_past(1, rest).items():
            for (w2, q2), c2 in tau_past(p - 1, ((a, m),) + w1).items():
                _acc(out, (w2, q2 + q1), c1 * c2)
        for (w2, q2), c2 in tau_past(p - 1, ((a, m + 1),) + rest).items():
            _acc(out, (w2, q2), c2 * m)
    _TAU[key] = out
    return out


def umul(x: dict, y: dict) -> dict:
    out: dict = {}
    for (w1, p1), c1 in x.items():
        for (w2, p2), c2 in y.items():
            for (w3, p3), c3 in tau_past(p1, w2).items():
                _acc(out, (w1 + w3, p3 + p2), c1 * c2 * c3)
    return out


def matrix_b(n: int, a: Scalar) -> tuple[LieData, list]:
    data = LieData(n, "gl")

    def entry(i, j):
        if i == j:
            return {((), 1): a, (((data.index[f"e{i}{i}"], 1),), 0): Q(1)}
        if j == i + 1:
            return {((), 0): Q(-1)}
        if i > j:
            return {(((data.index[f"e{i}{j}"], 1),), 0): Q(1)}
        return {}

    return data, [[entry(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]


def _sign(perm) -> int:
    s, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def cdet(mat: list) -> dict:
    """sum_sigma sgn(sigma) a_{sigma(1)1} ... a_{sigma(n)n} in column order."""
    n = len(mat)
    out: dict = {}
    for perm in permutations(range(n)):
        if any(not mat[perm[j]][j] for j in range(n)):
            continue
        term = {((), 0): Q(_sign(perm))}
        for j in range(n):
            term = umul(term, mat[perm[j]][j])
        for key, c in term.items():
            _acc(out, key, c)
    return out


@dataclass
class ColumnDeterminantResult:
    n: int
    alpha: Scalar
    lie: LieData
    raw: dict
    W: list = field(default_factory=list)

    def to_state(self, i: int, P: VertexPresentation, names: Optional[dict] = None) -> State:
        """W^(i) as a state, letter x_a t^{-m} acting as the mode -m of field names[a]."""
        names = names or {a: nm for a, nm in enumerate(self.lie.names)}
        out = P.zero()
        for word, c in self.W[i].items():
            out = out + P.apply_word([(names[a], -m) for a, m in word]) * c
        return out

    def word_string(self, i: int) -> str:
        parts = []
        for word, c in sorted(self.W[i].items()):
            body = "".join(f"{self.lie.names[a]}(-{m})" for a, m in word) + "|0>"
            parts.append(f"({to_string(c)})*{body}")
        return " + ".join(parts) if parts else "0"


def column_determinant(n: int, level: Scalar = K) -> ColumnDeterminantResult:
    """Coefficients W^(i) of (alpha tau)^{n-i} in cdet B, with alpha = k + n - 1."""
    if not 1 <= n <= 4:
        raise ValueError("column_determinant supports n <= 4")
    a = alpha(n, level)
    data, mat = matrix_b(n, a)
    raw = cdet(mat)
    W = [dict() for _ in range(n + 1)]
    for (word, p), c in raw.items():
        _acc(W[n - p], word, c / a ** p)
    return ColumnDeterminantResult(n, a, data, raw, W)


# --------------------------------------------------------------------------
# Miura image


def heisenberg_gl(n: int, level: Scalar = K) -> VertexPresentation:
    """J_1..J_n with [J_i lambda J_j] = ((k + n) delta_ij - 1) lambda."""
    gram = [[(level + n) * (i == j) - 1 for j in range(n)] for i in range(n)]
    return build_multi_heisenberg(gram, [f"J{i}" for i in range(1, n + 1)])


def heisenberg_sl(n: int, level: Scalar = K) -> VertexPresentation:
    """J_1..J_{n-1} with [J_i lambda J_j] = (k + n)(delta_ij - 1/n) lambda; J_n = -sum J_i."""
    gram = [[(level + n) * ((i == j) - Q(1, n)) for j in range(n - 1)] for i in range(n - 1)]
    return build_multi_heisenberg(gram, [f"J{i}" for i in range(1, n)])


def _fields(P: VertexPresentation, n: int) -> list:
    Js = [P.gen(f"J{i}") for i in range(1, n + 1) if f"J{i}" in P.index]
    if len(Js) == n - 1:
        last = P.zero()
        for J in Js:
            last = last - J
        Js.append(last)
    return Js


def product_expansion(P: VertexPresentation, n: int, a: Scalar) -> list:
    """Coefficients F_i with :(a d + J_1)...(a d + J_n): = sum_i F_i (a d)^{n-i}, F_0 = 1."""
    Js = _fields(P, n)
    # right-nested: multiply (a d + J_j) onto the left of the running product
    ops = {0: P.vacuum()}  # {power of d: left coefficient}
    for J in reversed(Js):
        new: dict = {}

        def add(p, s):
            new[p] = new[p] + s if p in new else s

        for p, A in ops.items():
            add(p + 1, A * a)
            add(p, P.translate(A) * a)
            add(p, P.normally_ordered(J, A))
        ops = new
    out = []
    for i in range(n + 1):
        s = ops.get(n - i, P.zero())
        out.append(s * (1 / a ** (n - i)) if n - i else s)
    return out


def project_to_heisenberg(res: ColumnDeterminantResult, i: int, P: VertexPresentation) -> State:
    """Drop words containing root letters; e_ii t^{-m} becomes (J_i)_(-m)."""
    data = res.lie
    n = res.n
    Js = _fields(P, n)
    out = P.zero()
    for word, c in res.W[i].items():
        if any(data.kinds[a][0] != "cartan" for a, _ in word):
            continue
        s = P.vacuum()
        for a, m in reversed(word):
            idx = data.kinds[a][1] - 1
            s = P.mode(Js[idx], -m, s)
        out = out + s * c
    return out


@dataclass
class MiuraImage:
    n: int
    alpha: Scalar
    P: VertexPresentation
    W: list

    def expressions(self) -> list:
        return [str(w) for w in self.W]


def miura_image(n: int, level: Scalar = K, sl: bool = False, check: bool = True) -> MiuraImage:
    """Images of W^(i) in the Heisenberg algebra, checked against cdet B when ``check``."""
    if not 1 <= n <= 4:
        raise ValueError("miura_image supports n <= 4")
    a = alpha(n, level)
    P = heisenberg_sl(n, level) if sl else heisenberg_gl(n, level)
    rhs = product_expansion(P, n, a)
    if check:
        res = column_determinant(n, level)
        for i in range(n + 1):
            lhs = project_to_heisenberg(res, i, P)
            if not (lhs - rhs[i]).is_zero():
                raise MiuraMismatch(i, str(lhs), str(rhs[i]))
    return MiuraImage(n, a, P, rhs)


# --------------------------------------------------------------------------
# Virasoro and W3


def virasoro_shape(P: VertexPresentation, W: State) -> Optional[tuple]:
    """(s, c) when [W_lambda W] = s (T + 2 lambda) W + s^2 (c/12) lambda^3, else None."""
    br = P.lambda_bracket(W, W)
    if br.degree() > 3 or not br[2].is_zero() or br[1].is_zero():
        return None
    mono, c1 = next(iter(W.terms.items()))
    s = br[1].terms.get(mono, Q(0)) / c1 / 2
    if s == 0 or not (br[1] - W * (2 * s)).is_zero() or not (br[0] - P.translate(W) * s).is_zero():
        return None
    lam3 = br[3].terms.get((), Q(0))
    if not (br[3] - P.vacuum(lam3)).is_zero():
        return None
    return s, 12 * lam3 / (s * s)


def virasoro_certificate(n: int, level: Scalar = K) -> Scalar:
    """Central charge of the weight-2 Miura generator for W^k(sl_n), n in {2, 3}."""
    if n not in (2, 3):
        raise ValueError("virasoro_certificate supports n = 2, 3")
    img = miura_image(n, level, sl=True, check=False)
    shape = virasoro_shape(img.P, img.W[2])
    if shape is None:
        raise NotVirasoro(f"W^(2) for sl{n} does not bracket as a Virasoro field")
    return shape[1]


def central_charge_formula(n: int, level: Scalar = K) -> Scalar:
    return (n - 1) * (1 - n * (n + 1) * (n + level - 1) ** 2 / (n + level))


def dual_level(n: int, level) -> Q:
    """The level with (k + n)(k' + n) = 1."""
    return 1 / (Q(level) + n) - n


@dataclass
class DualityCheck:
    n: int
    levels: list
    values: list
    passed: bool


def duality_check(n: int, levels=(Q(1), Q(1, 2), Q(-3, 7), Q(5, 3), Q(2, 11))) -> DualityCheck:
    c = virasoro_certificate(n)
    vals, ok = [], True
    for k0 in levels:
        a, b = evaluate(c, k0), evaluate(c, dual_level(n, k0))
        vals.append((to_string(a), to_string(b)))
        ok = ok and a == b
    return DualityCheck(n, [to_string(Q(x)) for x in levels], vals, ok)


def _differential_monomials(gens: dict, weight: int) -> list:
    """Sorted tuples of (generator, derivative order) with total weight ``weight``."""
    letters = []
    for name, w in sorted(gens.items()):
        for d in range(0, weight - w + 1):
            letters.append((name, d, w + d))
    out = []

    def rec(start, remaining, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for idx in range(start, len(letters)):
            name, d, w = letters[idx]
            if w <= remaining:
                rec(idx, remaining - w, acc + [(name, d)])

    rec(0, weight, [])
    return out


def _realize(P: VertexPresentation, states: dict, mono: tuple, cache: dict) -> State:
    if mono in cache:
        return cache[mono]
    if not mono:
        s = P.vacuum()
    else:
        name, d = mono[0]
        head = P.translate_power(states[name], d)
        s = P.normally_ordered(head, _realize(P, states, mono[1:], cache))
    cache[mono] = s
    return s


@dataclass
class ClosureReport:
    n: int
    expansions: dict
    degree_bounds: dict


def w3_closure(level: Scalar = K) -> ClosureReport:
    """[W2_lambda W3] and [W3_lambda W3] expanded in differential monomials of W2, W3."""
    img = miura_image(3, level, sl=True, check=False)
    P = img.P
    states = {"W2": img.W[2], "W3": img.W[3]}
    weights = {"W2": 2, "W3": 3}
    cache: dict = {}
    expansions, bounds = {}, {}
    for x, y in (("W2", "W3"), ("W3", "W3")):
        br = P.lambda_bracket(states[x], states[y])
        bounds[(x, y)] = br.degree()
        if br.degree() > weights[x] + weights[y] - 1:
            raise ClosureFailure(f"lambda-degree of [{x}_lambda {y}] too large")
        for j, terms in br.coeffs.items():
            w = weights[x] + weights[y] - j - 1
            monos = _differential_monomials(weights, w)
            cols = [_realize(P, states, m, cache).terms for m in monos]
            sol = solve(cols, terms)
            if sol is None:
                raise ClosureFailure(f"lambda^{j} coefficient of [{x}_lambda {y}] is not in the span")
            expansions[(x, y, j)] = {m: v for m, v in zip(monos, sol) if v != 0}
    return ClosureReport(3, expansions, bounds)


def injectivity_rank(n: int, weight_max: int = 5, level: Scalar = K) -> dict:
    """{weight: (number of W-monomials, rank of their Miura images)} for sl_n."""
    img = miura_image(n, level, sl=True, check=False)
    P = img.P
    states = {f"W{i}": img.W[i] for i in range(2, n + 1)}
    weights = {f"W{i}": i for i in range(2, n + 1)}
    cache: dict = {}
    out = {}
    for w in range(0, weight_max + 1):
        monos = _differential_monomials(weights, w)
        cols = [_realize(P, states, m, cache).terms for m in monos]
        r, _ = generic_rank(cols, SPECIALIZATIONS, exact_limit=200)
        out[w] = (len(monos), r)
    return out


def axiom_check(n: int, level: Scalar = K) -> bool:
    """Skew symmetry and Jacobi on the Miura generators inside the Heisenberg algebra."""
    img = miura_image(n, level, sl=True, check=False)
    P = img.P
    gens = [img.W[i] for i in range(2, n + 1)]
    for a in gens:
        for b in gens:
            if not skew_residual(P, a, b).is_zero():
                return False
            for c in gens:
                if jacobi_residual(P, a, b, c):
                    return False
    return True


def lifted_closedness(n: int, level: Scalar = K) -> dict:
    """{i: (weight of W^(i), Q-hat_(0) W^(i) == 0)} inside C_- for gl_n."""
    from .brst_reduction import build_minus, build_Q_hat

    mc = build_minus(build_Q_hat(n, "gl", level))
    res = column_determinant(n, level)
    names = {a: "J" + nm for a, nm in enumerate(res.lie.names)}
    out = {}
    for i in range(1, n + 1):
        W = res.to_state(i, mc.M, names)
        out[i] = (W.weight(), mc.d(W).is_zero())
    return out
