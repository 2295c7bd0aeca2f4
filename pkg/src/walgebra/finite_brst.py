"""Finite-dimensional BRST reduction for gl_n with principal nilpotent f.

The superalgebra C(g) = U(g) (x) Cl is realized on PBW monomials: sorted
tuples of generator indices, where odd generators appear at most once.
Generators are ordered as the Lie basis (negative roots < Cartan < positive
roots), then the odd x*_alpha, then the odd x_alpha.  Rewriting a product
into this order moves letters left past larger ones using the
supercommutator, which is terminating and gives a unique canonical form.

The classical counterpart C[g*] (x) Cl-bar is the same monomial space with
the supercommutative product and a Poisson superbracket.

Cohomology is computed on the subcomplex C(g)_- generated by theta_0(b_-)
and Lambda(n*).  Its Kazhdan-filtered pieces are finite-dimensional, which is
not true of C(g) itself (positive root vectors have non-positive Kazhdan
degree).  Kazhdan degrees are reported doubled, so that p_i sits in degree 2i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations_with_replacement, product
from .brst_reduction import NilpotencyFailure, NotInSubcomplex, TruncationTooSmall
from .lie_core import LieData
from .linalg import Echelon, rank
from .scalar_core import Q

Mono = tuple
Vec = dict


def _vadd(out: Vec, m: Mono, c) -> None:
    v = out.get(m, 0) + c
    if v == 0:
        out.pop(m, None)
    else:
        out[m] = v


def _vaxpy(out: Vec, vec: Vec, c) -> None:
    for m, x in vec.items():
        _vadd(out, m, c * x)


# ---------------------------------------------------------------------------
# generic PBW superalgebra


class SuperAlgebra:
    """Algebra on ordered monomials, given generator parities and supercommutators.

    ``brackets[(u, v)]`` for u > v is the supercommutator [u, v] as a vector.
    With ``commutative=True`` the product ignores the brackets (the supercommutative
    algebra) and :meth:`poisson` uses them instead.
    """

    def __init__(self, names: list, odd: list, brackets: dict, commutative: bool = False):
        self.names = list(names)
        self.odd = list(odd)
        self.brackets = brackets
        self.commutative = commutative
        self._gen_cache: dict = {}
        self.index = {nm: i for i, nm in enumerate(self.names)}

    def gen(self, i: int) -> "CliffordElement":
        return CliffordElement(self, {(i,): Q(1)})

    def one(self) -> "CliffordElement":
        return CliffordElement(self, {(): Q(1)})

    def zero(self) -> "CliffordElement":
        return CliffordElement(self, {})

    def parity(self, m: Mono) -> int:
        return sum(self.odd[g] for g in m) % 2

    def bracket_gens(self, u: int, v: int) -> Vec:
        """Supercommutator [u, v] of two generators."""
        if u > v:
            return self.brackets.get((u, v), {})
        if u == v:
            if self.odd[u]:
                return {m: 2 * c for m, c in self.brackets.get((u, u), {}).items()}
            return {}
        sign = -1 if self.odd[u] and self.odd[v] else 1
        return {m: -sign * c for m, c in self.brackets.get((v, u), {}).items()}

    # products -------------------------------------------------------------
    def mono_times_gen(self, m: Mono, g: int) -> Vec:
        key = (m, g)
        hit = self._gen_cache.get(key)
        if hit is not None:
            return hit
        if not m or m[-1] < g:
            out = {m + (g,): Q(1)}
        elif m[-1] == g:
            if self.odd[g]:
                # u u = [u, u] / 2
                out = {}
                if not self.commutative:
                    half = self.brackets.get((g, g), {})
                    out = self.mono_times_vec(m[:-1], half)
            else:
                out = {m + (g,): Q(1)}
        else:
            u = m[-1]
            rest = m[:-1]
            sign = -1 if self.odd[u] and self.odd[g] else 1
            out = {}
            for mm, c in self.mono_times_gen(rest, g).items():
                _vaxpy(out, self.mono_times_gen(mm, u), sign * c)
            if not self.commutative:
                br = self.brackets.get((u, g))
                if br:
                    _vaxpy(out, self.mono_times_vec(rest, br), 1)
        self._gen_cache[key] = out
        return out

    def mono_times_mono(self, a: Mono, b: Mono) -> Vec:
        cur = {a: Q(1)}
        for g in b:
            nxt: Vec = {}
            for m, c in cur.items():
                _vaxpy(nxt, self.mono_times_gen(m, g), c)
            cur = nxt
        return cur

    def mono_times_vec(self, a: Mono, vec: Vec) -> Vec:
        out: Vec = {}
        for m, c in vec.items():
            _vaxpy(out, self.mono_times_mono(a, m), c)
        return out

    def mul(self, x: Vec, y: Vec) -> Vec:
        out: Vec = {}
        for a, ca in x.items():
            for b, cb in y.items():
                _vaxpy(out, self.mono_times_mono(a, b), ca * cb)
        return out

    # Poisson bracket (commutative case) --------------------------------------
    def _pb_gen_mono(self, g: int, m: Mono) -> Vec:
        out: Vec = {}
        passed = 0
        for j, v in enumerate(m):
            br = self.bracket_gens(g, v)
            if br:
                sign = -1 if self.odd[g] and passed % 2 else 1
                left = {m[:j]: Q(1)}
                right = {m[j + 1:]: Q(1)}
                _vaxpy(out, self.mul(self.mul(left, br), right), sign)
            passed += self.odd[v]
        return out

    def _pb_mono_mono(self, a: Mono, b: Mono) -> Vec:
        if not a:
            return {}
        if len(a) == 1:
            return self._pb_gen_mono(a[0], b)
        # {u r, B} = u {r, B} + (-1)^{|r||B|} {u, B} r
        u, r = a[0], a[1:]
        out = self.mul({(u,): Q(1)}, self._pb_mono_mono(r, b))
        sign = -1 if self.parity(r) and self.parity(b) else 1
        _vaxpy(out, self.mul(self._pb_gen_mono(u, b), {r: Q(1)}), sign)
        return out

    def poisson(self, x: Vec, y: Vec) -> Vec:
        out: Vec = {}
        for a, ca in x.items():
            for b, cb in y.items():
                _vaxpy(out, self._pb_mono_mono(a, b), ca * cb)
        return out

    def supercommutator(self, x: Vec, y: Vec) -> Vec:
        """[x, y] for homogeneous x (quantum) or {x, y} (classical)."""
        if self.commutative:
            return self.poisson(x, y)
        out = self.mul(x, y)
        px = {self.parity(m) for m in x}
        if len(px) > 1:
            raise ValueError("supercommutator needs a homogeneous left argument")
        odd_x = px.pop() if px else 0
        for b, cb in y.items():
            sign = -1 if odd_x and self.parity(b) else 1
            _vaxpy(out, self.mul({b: cb}, x), -sign)
        return out


@dataclass
class CliffordElement:
    """A linear combination of canonical monomials in a :class:`SuperAlgebra`."""

    alg: SuperAlgebra
    terms: Vec

    def __add__(self, other):
        out = dict(self.terms)
        _vaxpy(out, _terms(other, self.alg), 1)
        return CliffordElement(self.alg, out)

    def __sub__(self, other):
        out = dict(self.terms)
        _vaxpy(out, _terms(other, self.alg), -1)
        return CliffordElement(self.alg, out)

    def __neg__(self):
        return CliffordElement(self.alg, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, CliffordElement):
            return CliffordElement(self.alg, self.alg.mul(self.terms, other.terms))
        return CliffordElement(self.alg, {m: c * other for m, c in self.terms.items() if c * other != 0})

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        return isinstance(other, CliffordElement) and self.terms == other.terms

    def bracket(self, other: "CliffordElement") -> "CliffordElement":
        return CliffordElement(self.alg, self.alg.supercommutator(self.terms, other.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def parity(self) -> int:
        ps = {self.alg.parity(m) for m in self.terms}
        return ps.pop() if len(ps) == 1 else 0

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            word = "*".join(self.alg.names[g] for g in m) or "1"
            parts.append(f"({c})*{word}")
        return " + ".join(parts)


def _terms(x, alg) -> Vec:
    if isinstance(x, CliffordElement):
        return x.terms
    return {(): Q(x)} if x != 0 else {}


# ---------------------------------------------------------------------------
# the algebra C(g)


@dataclass
class CAlgebra:
    """U(g) (x) Cl (quantum) or C[g*] (x) Cl-bar (classical) for gl_n."""

    n: int
    quantum: bool = True
    kind: str = "gl"
    lie: LieData = field(init=False)
    alg: SuperAlgebra = field(init=False)

    def __post_init__(self):
        lie = LieData(self.n, self.kind)
        self.lie = lie
        pos = lie.positive_indices
        d = lie.dim
        names = list(lie.names)
        names += ["s" + lie.names[a] for a in pos]
        names += ["x" + lie.names[a] for a in pos]
        odd = [0] * d + [1] * (2 * len(pos))
        self.star = {a: d + i for i, a in enumerate(pos)}
        self.ferm = {a: d + len(pos) + i for i, a in enumerate(pos)}
        brackets: dict = {}
        for (a, b), val in lie.structure.items():
            if a > b:
                brackets[(a, b)] = {(c,): Q(v) for c, v in val.items()}
        for a in pos:
            # [x_alpha, x*_alpha] = 1; x_alpha sorts after x*_alpha
            brackets[(self.ferm[a], self.star[a])] = {(): Q(1)}
        self.alg = SuperAlgebra(names, odd, brackets, commutative=not self.quantum)
        # theta_0(h) weight j and PBW degree of every generator
        self.weight = [lie.grade(a) for a in range(d)]
        self.weight += [-lie.grade(a) for a in pos] + [lie.grade(a) for a in pos]
        self.pbw = [1] * d + [0] * len(pos) + [1] * len(pos)

    def gen(self, name_or_index) -> CliffordElement:
        i = self.alg.index[name_or_index] if isinstance(name_or_index, str) else name_or_index
        return self.alg.gen(i)

    def x(self, a: int) -> CliffordElement:
        """The Lie algebra element x_a (x) 1."""
        return self.alg.gen(a)

    def xs(self, a: int) -> CliffordElement:
        """1 (x) x*_a for a positive root index a."""
        return self.alg.gen(self.star[a])

    def xf(self, a: int) -> CliffordElement:
        """1 (x) x_a in Cl for a positive root index a."""
        return self.alg.gen(self.ferm[a])

    def charge(self, m: Mono) -> int:
        return sum(1 for g in m if g in self._star_set) - sum(1 for g in m if g in self._ferm_set)

    @cached_property
    def _star_set(self):
        return set(self.star.values())

    @cached_property
    def _ferm_set(self):
        return set(self.ferm.values())

    def kazhdan(self, m: Mono) -> int:
        """Doubled Kazhdan degree 2(i - j) of a monomial."""
        return 2 * sum(self.pbw[g] - self.weight[g] for g in m)

    def n_coeff(self, a: int, b: int) -> dict:
        """Positive-root part of [x_a, x_b], as {gamma: c}."""
        pos = set(self.lie.positive_indices)
        return {c: v for c, v in self.lie.bracket(a, b).items() if c in pos}


def build_rho(n: int, calg: CAlgebra | None = None) -> dict:
    """rho : b -> Cl, x_a |-> sum c_{a,beta}^gamma x_gamma x*_beta, checked to be a Lie map on n."""
    if n < 2:
        raise ValueError("need n >= 2")
    C = calg or CAlgebra(n)
    lie = C.lie
    out = {}
    for a in range(lie.dim):
        el = C.alg.zero()
        for b in lie.positive_indices:
            for g, c in C.n_coeff(a, b).items():
                el = el + (C.xf(g) * C.xs(b)) * c
        out[a] = el
    if C.alg.commutative:
        return out
    for a in lie.positive_indices:
        for b in lie.positive_indices:
            lhs = out[a].bracket(out[b])
            rhs = C.alg.zero()
            for c, v in lie.bracket(a, b).items():
                rhs = rhs + out[c] * v
            if lhs != rhs:
                raise AssertionError(f"rho is not a homomorphism on ({lie.names[a]}, {lie.names[b]})")
    return out


def theta0(C: CAlgebra, a: int, rho: dict | None = None) -> CliffordElement:
    rho = rho if rho is not None else build_rho(C.n, C)
    return C.x(a) + rho[a]


@dataclass
class FiniteBRSTComplex:
    """C(g) (or its classical limit) together with Q and its gradings."""

    n: int
    quantum: bool
    C: CAlgebra
    Q: CliffordElement
    rho: dict

    def ad(self, el: CliffordElement) -> CliffordElement:
        return self.Q.bracket(el)

    def theta_chi(self, a: int) -> CliffordElement:
        return theta0(self.C, a, self.rho) - self.C.lie.chi(a)

    def charge(self, m: Mono) -> int:
        return self.C.charge(m)


def build_Q_finite(n: int, quantum: bool = True) -> FiniteBRSTComplex:
    """Q = sum (x_a - chi(x_a)) x*_a - 1/2 sum c x*_a x*_b x_c, with Q^2 = 0 verified."""
    if not 1 <= n <= 4:
        raise ValueError("n must lie in 1..4")
    C = CAlgebra(n, quantum)
    lie = C.lie
    pos = lie.positive_indices
    q = C.alg.zero()
    for a in pos:
        q = q + (C.x(a) - lie.chi(a)) * C.xs(a)
    for a in pos:
        for b in pos:
            for g, c in lie.bracket(a, b).items():
                q = q - (C.xs(a) * C.xs(b) * C.xf(g)) * (Q(c) / 2)
    rho = build_rho(n, C)
    self_br = q.bracket(q)
    if not self_br.is_zero():
        raise NilpotencyFailure(f"[Q, Q] != 0 for n={n} (quantum={quantum})")
    return FiniteBRSTComplex(n, quantum, C, q, rho)


def ad_squared_zero(cx: FiniteBRSTComplex, max_len: int = 2) -> bool:
    """(ad Q)^2 = 0 on every monomial with at most ``max_len`` letters."""
    alg = cx.C.alg
    gens = range(len(alg.names))
    for ln in range(max_len + 1):
        for m in combinations_with_replacement(gens, ln):
            if any(alg.odd[g] and m.count(g) > 1 for g in m):
                continue
            el = CliffordElement(alg, {m: Q(1)})
            if not cx.ad(cx.ad(el)).is_zero():
                return False
    return True


def charge_and_filtration(cx: FiniteBRSTComplex, max_len: int = 2) -> bool:
    """ad Q raises charge by one and does not raise the Kazhdan degree."""
    alg = cx.C.alg
    for ln in range(max_len + 1):
        for m in combinations_with_replacement(range(len(alg.names)), ln):
            if any(alg.odd[g] and m.count(g) > 1 for g in m):
                continue
            img = cx.ad(CliffordElement(alg, {m: Q(1)}))
            for mm in img.terms:
                if cx.C.charge(mm) != cx.C.charge(m) + 1:
                    return False
                if cx.C.kazhdan(mm) > cx.C.kazhdan(m):
                    return False
    return True


# ---------------------------------------------------------------------------
# classical d_+ / d_- split


def split_differential(cx: FiniteBRSTComplex, el: CliffordElement) -> tuple[CliffordElement, CliffordElement]:
    """(d_+ el, d_- el) for a bihomogeneous classical element.

    d_+ adds one x*, d_- removes one x; the split is read off the bidegree.
    """
    C = cx.C
    img = cx.ad(el)
    plus, minus = {}, {}
    stars = C._star_set
    for m0 in el.terms:
        s0 = sum(1 for g in m0 if g in stars)
        break
    else:
        return C.alg.zero(), C.alg.zero()
    for m, c in img.terms.items():
        s = sum(1 for g in m if g in stars)
        if s == s0 + 1:
            plus[m] = c
        elif s == s0:
            minus[m] = c
        else:
            raise AssertionError("ad Q-bar left the bigrading")
    return CliffordElement(C.alg, plus), CliffordElement(C.alg, minus)


def d_plus_minus_check(n: int = 2, max_len: int = 2) -> bool:
    """d_+^2 = d_-^2 = [d_+, d_-] = 0 on classical monomials with at most ``max_len`` letters."""
    cx = build_Q_finite(n, quantum=False)
    alg = cx.C.alg

    def dp(x):
        out = alg.zero()
        for m, c in x.terms.items():
            out = out + split_differential(cx, CliffordElement(alg, {m: c}))[0]
        return out

    def dm(x):
        out = alg.zero()
        for m, c in x.terms.items():
            out = out + split_differential(cx, CliffordElement(alg, {m: c}))[1]
        return out

    for ln in range(max_len + 1):
        for m in combinations_with_replacement(range(len(alg.names)), ln):
            if any(alg.odd[g] and m.count(g) > 1 for g in m):
                continue
            el = CliffordElement(alg, {m: Q(1)})
            if not (dp(dp(el)).is_zero() and dm(dm(el)).is_zero()):
                return False
            if not (dp(dm(el)) + dm(dp(el))).is_zero():
                return False
    return True


def koszul_check(n: int, max_degree: int) -> dict:
    """Homology of d_- on C[g*] (x) Lambda(n), filtered by polynomial degree plus x-count.

    Returns {m: (dim H_0, expected, higher homology vanishes)} where the
    expected H_0 is the number of monomials of degree <= m in dim(b_-) variables.
    """
    from math import comb

    cx = build_Q_finite(n, quantum=False)
    C = cx.C
    alg = C.alg
    lie = C.lie
    d = lie.dim
    ferm = sorted(C.ferm.values())
    out = {}
    for top in range(max_degree + 1):
        # basis by number of fermions
        pieces: dict = {}
        for nf in range(len(ferm) + 1):
            for fs in combinations_with_replacement(ferm, nf):
                if len(set(fs)) < nf:
                    continue
                for deg in range(top - nf + 1):
                    for us in combinations_with_replacement(range(d), deg):
                        pieces.setdefault(nf, []).append(us + fs)
        ranks = {}
        for nf, basis in pieces.items():
            if nf == 0:
                continue
            cols = []
            for m in basis:
                _, minus = split_differential(cx, CliffordElement(alg, {m: Q(1)}))
                cols.append(minus.terms)
            ranks[nf] = rank(cols)
        dims = {nf: len(b) - ranks.get(nf, 0) - ranks.get(nf + 1, 0) for nf, b in pieces.items()}
        expected = comb(len(lie.negative_indices) + len(lie.cartan_indices) + top, top)
        out[top] = (dims[0], expected, all(v == 0 for k, v in dims.items() if k > 0))
    return out


# ---------------------------------------------------------------------------
# the subcomplex C(g)_-


@dataclass
class MinusFinite:
    """Abstract presentation of C(g)_- with the images of its generators in C(g)."""

    cx: FiniteBRSTComplex
    alg: SuperAlgebra
    images: list
    degrees: list
    charges: list
    dgen: list

    def embed(self, vec: Vec) -> CliffordElement:
        full = self.cx.C.alg.zero()
        for m, c in vec.items():
            el = self.cx.C.alg.one()
            for g in m:
                el = el * self.images[g]
            full = full + el * c
        return full

    def degree(self, m: Mono) -> int:
        return sum(self.degrees[g] for g in m)

    def charge(self, m: Mono) -> int:
        return sum(self.charges[g] for g in m)

    def d_mono(self, m: Mono) -> Vec:
        out: Vec = {}
        passed = 0
        for j, g in enumerate(m):
            dg = self.dgen[g]
            if dg:
                sign = -1 if passed % 2 else 1
                left = self.alg.mul({m[:j]: Q(1)}, dg)
                _vaxpy(out, self.alg.mul(left, {m[j + 1:]: Q(1)}), sign)
            passed += self.alg.odd[g]
        return out

    def d(self, vec: Vec) -> Vec:
        out: Vec = {}
        for m, c in vec.items():
            _vaxpy(out, self.d_mono(m), c)
        return out

    def basis(self, max_degree: int, charge: int, exact: bool = False) -> list:
        """Monomials with doubled Kazhdan degree <= max_degree (== if exact) and given charge."""
        gens = sorted(range(len(self.alg.names)), key=lambda g: (self.degrees[g], g))
        out = []

        def rec(start, cur, deg, ch):
            if (deg == max_degree or not exact) and ch == charge:
                out.append(tuple(sorted(cur)))
            for i in range(start, len(gens)):
                g = gens[i]
                nd = deg + self.degrees[g]
                if nd > max_degree:
                    break
                if self.alg.odd[g] and g in cur:
                    continue
                rec(i, cur + [g], nd, ch + self.charges[g])

        rec(0, [], 0, 0)
        return sorted(set(out))


def _solve_in(images: list, alg: SuperAlgebra, target: CliffordElement, words: list) -> Vec:
    """Express target as a combination of products of generator images indexed by ``words``."""
    ech = Echelon(track=True)
    for w in words:
        el = None
        for g in w:
            el = images[g] if el is None else el * images[g]
        if el is None:
            el = target.alg.one()
        ech.add(el.terms, label=w)
    comb = ech.express(target.terms)
    if comb is None:
        raise NotInSubcomplex("element does not lie in C(g)_-")
    return {w: c for w, c in comb.items() if c != 0}


def build_minus_finite(n: int, quantum: bool = True) -> MinusFinite:
    """C(g)_- generated by theta_0(b_-) and the x*, with relations solved from C(g)."""
    cx = build_Q_finite(n, quantum)
    C = cx.C
    lie = C.lie
    bminus = lie.negative_indices + lie.cartan_indices
    pos = lie.positive_indices
    images, names, odd, degrees, charges = [], [], [], [], []
    for a in sorted(bminus):
        images.append(theta0(C, a, cx.rho))
        names.append("J" + lie.names[a])
        odd.append(0)
        degrees.append(2 + 2 * (-lie.grade(a)))
        charges.append(0)
    for a in pos:
        images.append(C.xs(a))
        names.append("s" + lie.names[a])
        odd.append(1)
        degrees.append(2 * lie.grade(a))
        charges.append(1)
    ng = len(images)
    words = [()] + [(g,) for g in range(ng)]
    words += [(g, h) for g in range(ng) for h in range(g, ng) if not (odd[g] and g == h)]
    words += [(g, h, l) for g in range(ng) for h in range(g, ng) for l in range(h, ng)
              if odd[g] and odd[h] and odd[l] and g < h < l]
    brackets = {}
    for u in range(ng):
        for v in range(u + 1):
            if quantum:
                br = images[u].bracket(images[v])
            else:
                br = CliffordElement(C.alg, C.alg.poisson(images[u].terms, images[v].terms))
            if br.is_zero():
                continue
            sol = _solve_in(images, C.alg, br, words)
            if u == v:
                # an odd square is half its self-bracket
                sol = {w: c / 2 for w, c in sol.items()}
            brackets[(u, v)] = sol
    alg = SuperAlgebra(names, odd, brackets, commutative=not quantum)
    dgen = []
    for g in range(ng):
        img = cx.ad(images[g])
        dgen.append(_solve_in(images, C.alg, img, words))
    return MinusFinite(cx, alg, images, degrees, charges, dgen)


@dataclass
class FiniteCohomology:
    """dim H^c of the Kazhdan pieces of C(g)_-, quantum (cumulative) or classical (graded)."""

    n: int
    max_degree: int
    quantum: bool
    dims: dict  # {(charge, degree): dim}
    d_squared_zero: bool
    stable_degrees: list

    def h0(self) -> list:
        return [self.dims.get((0, p), 0) for p in range(self.max_degree + 1)]

    def vanishing_off_zero(self) -> bool:
        return all(v == 0 for (c, _), v in self.dims.items() if c != 0)

    def to_obj(self) -> dict:
        return {
            "n": self.n,
            "max_degree": self.max_degree,
            "quantum": self.quantum,
            "convention": "cumulative K_p" if self.quantum else "graded",
            "h0": self.h0(),
            "dims": [{"charge": c, "degree": p, "dim": v} for (c, p), v in sorted(self.dims.items())],
            "d_squared_zero": self.d_squared_zero,
            "vanishing_off_zero": self.vanishing_off_zero(),
        }


def finite_cohomology(n: int, max_degree: int, quantum: bool = True,
                      minus: MinusFinite | None = None) -> FiniteCohomology:
    """dim H^c per doubled Kazhdan degree on C(g)_-.

    Quantum: each filtered piece K_p C(g)_- is a subcomplex, dims are cumulative.
    Classical: d is homogeneous, dims are per degree.
    """
    if n > 3 or max_degree > 6:
        raise TruncationTooSmall("finite cohomology is guarded to n <= 3 and degree <= 6")
    mf = minus or build_minus_finite(n, quantum)
    nmax = len(mf.cx.C.lie.positive_indices)
    dims = {}
    sq_ok = True
    for p in range(max_degree + 1):
        ranks = {}
        bases = {c: mf.basis(p, c, exact=not quantum) for c in range(0, nmax + 2)}
        for c in range(0, nmax + 1):
            cols = []
            for m in bases[c]:
                img = mf.d_mono(m)
                if img and mf.d(img):
                    sq_ok = False
                if any(mf.degree(mm) > p for mm in img):
                    raise AssertionError("d raised the Kazhdan filtration")
                cols.append(img)
            ranks[c] = rank(cols)
        for c in range(-1, nmax + 1):
            dim = len(bases.get(c, [])) - ranks.get(c, 0) - ranks.get(c - 1, 0)
            dims[(c, p)] = dim
    return FiniteCohomology(n, max_degree, quantum, dims, sq_ok, list(range(max_degree + 1)))


def center_hilbert(n: int, max_degree: int, cumulative: bool = True) -> list:
    """Dimensions of C[p_1, ..., p_n] with deg p_i = 2i, per degree or cumulative."""
    per = [0] * (max_degree + 1)
    for exps in product(*[range(max_degree // (2 * i) + 1) for i in range(1, n + 1)]):
        deg = sum(2 * (i + 1) * e for i, e in enumerate(exps))
        if deg <= max_degree:
            per[deg] += 1
    if not cumulative:
        return per
    out, acc = [], 0
    for v in per:
        acc += v
        out.append(acc)
    return out


def casimirs_closed(n: int = 2) -> bool:
    """p_1 = sum e_ii and the Casimir sum e_ij e_ji map into ker(ad Q)."""
    cx = build_Q_finite(n)
    C = cx.C
    lie = C.lie
    p1 = C.alg.zero()
    omega = C.alg.zero()
    for i in range(1, n + 1):
        p1 = p1 + C.x(lie.index[lie._unit_name(i, i)])
        for j in range(1, n + 1):
            omega = omega + C.x(lie.index[lie._unit_name(i, j)]) * C.x(lie.index[lie._unit_name(j, i)])
    return cx.ad(p1).is_zero() and cx.ad(omega).is_zero()


def moment_check(n: int, quantum: bool = True) -> bool:
    """[Q, 1 (x) x_alpha] = theta_chi(x_alpha) for every positive root."""
    cx = build_Q_finite(n, quantum)
    rho = cx.rho if quantum else build_rho(n, cx.C)
    for a in cx.C.lie.positive_indices:
        lhs = cx.ad(cx.C.xf(a))
        rhs = cx.C.x(a) + rho[a] - cx.C.lie.chi(a)
        if lhs != rhs:
            return False
    return True

