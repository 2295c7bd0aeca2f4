"""Admissible levels, nilpotent orbit partitions, and characters of principal W-algebra modules.

Weights of sl_n are vectors in Q^n with coordinate sum zero and the standard
inner product.  Characters of the minimal-model modules are computed as the
alternating sum over the finite Weyl group W and the root lattice Q of

    q^{|q A - p w(B) + p q alpha|^2 / (2 p q)}

divided by prod_{j>=1} (1 - q^j)^{n-1}, where A = lambda + rho and
B = mu + rho with lambda, mu dominant integral of levels p - n and q - n.
Series are normalized so that the vacuum module has offset 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import gcd

from .linalg import rank
from .scalar_core import Q, QSeries, euler_product, product_series


class CriticalLevel(ValueError):
    pass


class CapInsufficient(RuntimeError):
    def __init__(self, required: int):
        super().__init__(f"translation cap too small; need at least {required}")
        self.required = required


# ---------------------------------------------------------------------------
# weights


def fundamental(n: int, i: int) -> tuple:
    """omega_i in coordinates (1, ..., 1, 0, ..., 0) - i/n (1, ..., 1)."""
    return tuple(Q(1 if j < i else 0) - Q(i, n) for j in range(n))


def from_labels(n: int, labels) -> tuple:
    """sum_i labels[i-1] omega_i for finite Dynkin labels of length n - 1."""
    out = [Q(0)] * n
    for i, m in enumerate(labels, start=1):
        for j, x in enumerate(fundamental(n, i)):
            out[j] += m * x
    return tuple(out)


def rho(n: int) -> tuple:
    return from_labels(n, [1] * (n - 1))


def dot(a, b) -> Q:
    return sum((x * y for x, y in zip(a, b)), Q(0))


def vadd(a, b, s=1) -> tuple:
    return tuple(x + s * y for x, y in zip(a, b))


def vscale(a, c) -> tuple:
    return tuple(c * x for x in a)


def perm_sign(p) -> int:
    sign, seen = 1, set()
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def weyl_group(n: int) -> list:
    """[(permutation, sign)] for the symmetric group acting on coordinates."""
    return [(p, perm_sign(p)) for p in permutations(range(n))]


def act(p, v) -> tuple:
    out = [None] * len(v)
    for i, j in enumerate(p):
        out[j] = v[i]
    return tuple(out)


@dataclass(frozen=True)
class AffineWeight:
    """k Lambda_0 + lambda-bar + d delta."""

    n: int
    level: Q
    finite: tuple
    delta: Q = Q(0)

    def pairing(self, root: tuple, m: int) -> Q:
        """<lambda + rho-hat, (root + m delta)^vee> for a root of sl_n (long, so coroot = root)."""
        return dot(vadd(self.finite, rho(self.n)), root) + m * (self.level + self.n)

    def regular_dominant(self) -> bool:
        """<lambda + rho-hat, alpha^vee> is not in {0, -1, -2, ...} for positive real affine roots."""
        n = self.n
        t = self.level + n
        if t <= 0:
            raise ValueError("needs k + n > 0")
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                root = tuple(Q(1 if c == i else -1 if c == j else 0) for c in range(n))
                m = 0 if i < j else 1
                while True:
                    v = self.pairing(root, m)
                    if v > 0:
                        break
                    if v.denominator == 1:
                        return False
                    m += 1
        return True


# ---------------------------------------------------------------------------
# levels and orbits


@dataclass(frozen=True)
class AdmissibleLevel:
    n: int
    p: int
    q: int

    @property
    def nondegenerate(self) -> bool:
        return self.q >= self.n

    @property
    def level(self) -> Q:
        return Q(self.p, self.q) - self.n


def is_admissible_level(n: int, k) -> str:
    """'not admissible', 'admissible' (degenerate) or 'nondegenerate' for principal sl_n."""
    t = Q(k) + n
    if t <= 0:
        return "not admissible"
    p, q = int(t.numerator), int(t.denominator)
    if p < n:
        return "not admissible"
    return "nondegenerate" if q >= n else "admissible"


def admissible_level(n: int, k) -> AdmissibleLevel:
    t = Q(k) + n
    return AdmissibleLevel(n, int(t.numerator), int(t.denominator))


def orbit_partition(n: int, q: int) -> tuple:
    """(n) if q >= n, else (q, ..., q, s) with n = q floor(n/q) + s."""
    if q < 1:
        raise ValueError("q must be positive")
    if q >= n:
        return (n,)
    parts = [q] * (n // q)
    if n % q:
        parts.append(n % q)
    return tuple(parts)


def partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def nilpotent_of_type(part: tuple) -> dict:
    """Jordan normal form with shift blocks of the given sizes, as a sparse matrix."""
    x, start = {}, 0
    for size in part:
        for i in range(size - 1):
            x[(start + i, start + i + 1)] = Q(1)
        start += size
    return x


def ad_power_vanishes(x: dict, n: int, power: int) -> bool:
    """(ad x)^power == 0 on gl_n, by the rank of the n^2 x n^2 matrix."""
    def ad(mat: dict) -> dict:
        out: dict = {}
        for (i, j), a in x.items():
            for (r, s), b in mat.items():
                if j == r:
                    out[(i, s)] = out.get((i, s), 0) + a * b
                if s == i:
                    out[(r, j)] = out.get((r, j), 0) - b * a
        return {k: v for k, v in out.items() if v != 0}

    cols = []
    for i in range(n):
        for j in range(n):
            cur = {(i, j): Q(1)}
            for _ in range(power):
                cur = ad(cur)
                if not cur:
                    break
            cols.append(cur)
    return rank(cols) == 0


def dominates(a: tuple, b: tuple) -> bool:
    sa = sb = 0
    for i in range(max(len(a), len(b))):
        sa += a[i] if i < len(a) else 0
        sb += b[i] if i < len(b) else 0
        if sa < sb:
            return False
    return True


def orbit_partition_bruteforce(n: int, q: int) -> tuple:
    """Largest Jordan type (in dominance order) with (ad x)^{2q} = 0."""
    ok = [pt for pt in partitions(n) if ad_power_vanishes(nilpotent_of_type(pt), n, 2 * q)]
    top = [a for a in ok if all(dominates(a, b) for b in ok)]
    if len(top) != 1:
        raise AssertionError("no unique maximal orbit")
    return top[0]


# ---------------------------------------------------------------------------
# nondegenerate classes


def affine_dominant(n: int, level: int) -> list:
    """Affine Dynkin labels (m_0, ..., m_{n-1}) >= 0 summing to level."""
    out = []
    for labels in product(range(level + 1), repeat=n - 1):
        s = sum(labels)
        if s <= level:
            out.append((level - s,) + labels)
    return out


def _rotate(t: tuple, r: int) -> tuple:
    return t[r:] + t[:r]


@dataclass
class ClassReport:
    n: int
    p: int
    q: int
    count: int
    representatives: list
    free: bool
    notes: list = field(default_factory=list)


def nondegenerate_classes(n: int, p: int, q: int) -> ClassReport:
    """Orbits of P^{p-n}_+ x P^{q-n}_+ under the simultaneous Z_n diagram rotation."""
    if p < n or q < n or gcd(p, q) != 1:
        raise ValueError("need coprime p, q >= n")
    seen, reps, free = set(), [], True
    for a in affine_dominant(n, p - n):
        for b in affine_dominant(n, q - n):
            if (a, b) in seen:
                continue
            orbit = {(_rotate(a, r), _rotate(b, r)) for r in range(n)}
            if len(orbit) < n:
                free = False
            seen |= orbit
            reps.append(min(orbit))
    notes = [] if free else ["Z_n action has fixed points; classes counted by orbit enumeration"]
    return ClassReport(n, p, q, len(reps), sorted(reps), free, notes)


# ---------------------------------------------------------------------------
# characters


def verma_w_character(n: int, k, gamma_omega, order: int) -> QSeries:
    """q^{gamma(Omega) / 2(k+n)} / prod_{j>=1} (1 - q^j)^{n-1}."""
    t = Q(k) + n
    if t == 0:
        raise CriticalLevel("k = -n is the critical level")
    offset = Q(gamma_omega) / (2 * t)
    s = product_series({j: -(n - 1) for j in range(1, order + 1)}, order)
    return QSeries(offset, s.coeffs, order)


def admissible_weight(n: int, p: int, q: int, lam: tuple, mu: tuple) -> AffineWeight:
    """The admissible weight with lambda-bar + rho = (lam + rho) - (p/q) mu (finite Dynkin labels)."""
    t = Q(p, q)
    fin = vadd(from_labels(n, lam), vscale(from_labels(n, mu), t), -1)
    return AffineWeight(n, t - n, fin)


def root_lattice_box(n: int, R: int) -> list:
    """Integer vectors with coordinates in [-R, R] and sum zero."""
    out = []
    for head in product(range(-R, R + 1), repeat=n - 1):
        last = -sum(head)
        if -R <= last <= R:
            out.append(tuple(Q(x) for x in head) + (Q(last),))
    return out


@dataclass
class CharacterResult:
    n: int
    p: int
    q: int
    lam: tuple
    mu: tuple
    conformal_weight: Q
    numerator: QSeries
    character: QSeries
    cap: int

    def to_obj(self) -> dict:
        return {
            "lambda": list(self.lam),
            "mu": list(self.mu),
            "conformal_weight": str(Fraction(int(self.conformal_weight.numerator),
                                             int(self.conformal_weight.denominator))),
            "coefficients": [int(c) for c in self.character.coeffs],
        }


def _exponents(n: int, p: int, q: int, A: tuple, B: tuple, R: int) -> list:
    out = []
    for perm, sign in weyl_group(n):
        wB = act(perm, B)
        base = vadd(vscale(A, q), vscale(wB, p), -1)
        for alpha in root_lattice_box(n, R):
            v = vadd(base, vscale(alpha, p * q))
            out.append((dot(v, v) / (2 * p * q), sign, max(abs(x) for x in alpha)))
    return out


def vacuum_exponent(n: int, p: int, q: int) -> Q:
    r = rho(n)
    return (p - q) ** 2 * dot(r, r) / (2 * p * q)


def fkw_character(n: int, p: int, q: int, lam: tuple, mu: tuple, order: int,
                  cap: int = 3) -> CharacterResult:
    """Character of the minimal-model module labelled by (lam, mu), through q^order.

    ``lam`` and ``mu`` are finite Dynkin labels of dominant weights of levels
    p - n and q - n.  Raises CapInsufficient when translations on the edge of
    the box [-cap, cap] could still contribute below the truncation.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if sum(lam) > p - n or sum(mu) > q - n or min(lam + mu, default=0) < 0:
        raise ValueError("labels are not dominant of the required levels")
    A = vadd(from_labels(n, lam), rho(n))
    B = vadd(from_labels(n, mu), rho(n))
    terms = _exponents(n, p, q, A, B, cap)
    e0 = min(e for e, _, _ in terms)
    edge = min((e for e, _, r in terms if r == cap), default=None)
    if edge is not None and edge - e0 <= order:
        need = cap + 1
        while True:
            t2 = _exponents(n, p, q, A, B, need)
            if min(e for e, _, r in t2 if r == need) - e0 > order:
                break
            need += 1
        raise CapInsufficient(need)
    num: dict = {}
    for e, sign, _ in terms:
        d = e - e0
        if d <= order:
            if d.denominator != 1:
                raise AssertionError("exponents differ by a non-integer")
            num[int(d)] = num.get(int(d), 0) + sign
    numerator = QSeries.from_dict(num, order, e0)
    lead = numerator.coeffs[0]
    if lead == 0:
        raise AssertionError("leading coefficient vanished")
    denom_inv = product_series({j: -(n - 1) for j in range(1, order + 1)}, order)
    ch = numerator * denom_inv * Q(1, int(lead)) if lead != 1 else numerator * denom_inv
    h = e0 - vacuum_exponent(n, p, q)
    character = QSeries(h, ch.coeffs, order)
    return CharacterResult(n, p, q, tuple(lam), tuple(mu), h, numerator, character, cap)


def fkw_as_verma_sum(n: int, p: int, q: int, lam: tuple, mu: tuple, order: int, cap: int = 3) -> QSeries:
    """The same character assembled term by term from W-Verma characters."""
    A = vadd(from_labels(n, lam), rho(n))
    B = vadd(from_labels(n, mu), rho(n))
    terms = _exponents(n, p, q, A, B, cap)
    e0 = min(e for e, _, _ in terms)
    k = Q(p, q) - n
    total = None
    for e, sign, _ in terms:
        d = e - e0
        if d > order:
            continue
        gamma = 2 * (k + n) * d
        v = verma_w_character(n, k, gamma, order)
        shifted = QSeries(0, (Q(0),) * int(d) + v.coeffs, order) * sign
        total = shifted if total is None else total + shifted
    return total


def denominator_check(order: int = 20) -> tuple[list, list]:
    """(alternating sum for (p, q) = (2, 3), prod (1 - q^j)) through q^order, n = 2."""
    A = rho(2)
    B = rho(2)
    terms = _exponents(2, 2, 3, A, B, 6)
    e0 = min(e for e, _, _ in terms)
    num: dict = {}
    for e, sign, _ in terms:
        d = e - e0
        if d <= order:
            num[int(d)] = num.get(int(d), 0) + sign
    series = QSeries.from_dict(num, order)
    return [int(c) for c in series.coeffs], [int(c) for c in euler_product(order).coeffs]


def finite_denominator(n: int, order: int) -> list:
    """prod_{j=1}^{n-1} (1 - q^j)^{n-1}, the finite product display."""
    return [int(c) for c in product_series({j: n - 1 for j in range(1, n)}, order).coeffs]


def class_characters(n: int, p: int, q: int, order: int, cap: int = 3) -> list:
    """One character per nondegenerate class, using finite labels of the representatives."""
    rep = nondegenerate_classes(n, p, q)
    out = []
    for a, b in rep.representatives:
        out.append(fkw_character(n, p, q, a[1:], b[1:], order, cap))
    return out


def cap_stable(n: int, p: int, q: int, lam: tuple, mu: tuple, order: int, cap: int) -> bool:
    """Raising the translation cap by one leaves the certified coefficients unchanged."""
    a = fkw_character(n, p, q, lam, mu, order, cap)
    b = fkw_character(n, p, q, lam, mu, order, cap + 1)
    return a.character == b.character
