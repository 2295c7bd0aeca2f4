"""Zhu's algebra and Zhu's C_2-algebra of a presented vertex algebra, truncated by weight.

Gradings use the conformal weight of the presentation.  V o V is spanned,
inside V_{<=W}, by the products a o b of basis states with
wt(a) + wt(b) + 1 <= W; only filtration degrees p <= W - 2 are certified.
Membership in V o V is an exact linear solve.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb

from .brst_reduction import TruncationTooSmall
from .linalg import Echelon
from .scalar_core import Q
from .vertex_engine import State, VertexPresentation


class NonHomogeneous(ValueError):
    pass


class FiltrationMismatch(AssertionError):
    pass


def _int_weight(a: State) -> int:
    try:
        w = a.weight()
    except ValueError:
        raise NonHomogeneous(f"{a} is not weight-homogeneous") from None
    if w.denominator != 1 or w < 0:
        raise NonHomogeneous(f"weight {w} is not a non-negative integer")
    return int(w)


def circ(P: VertexPresentation, a: State, b: State) -> State:
    """a o b = sum_i binom(wt a, i) a_(i-2) b."""
    if a.is_zero():
        return P.zero()
    d = _int_weight(a)
    out = P.zero()
    for i in range(d + 1):
        out = out + P.mode(a, i - 2, b) * comb(d, i)
    return out


def star(P: VertexPresentation, a: State, b: State) -> State:
    """a * b = sum_i binom(wt a, i) a_(i-1) b."""
    if a.is_zero():
        return P.zero()
    d = _int_weight(a)
    out = P.zero()
    for i in range(d + 1):
        out = out + P.mode(a, i - 1, b) * comb(d, i)
    return out


def zhu_products(P: VertexPresentation, a: State, b: State) -> tuple[State, State]:
    return circ(P, a, b), star(P, a, b)


def commutator_rhs(P: VertexPresentation, a: State, b: State) -> State:
    """sum_i binom(wt a - 1, i) a_(i) b, the representative of a * b - b * a."""
    d = _int_weight(a)
    out = P.zero()
    i = 0
    while True:
        c = _binom_general(d - 1, i)
        if c == 0 and i > max(d - 1, 0):
            break
        term = P.mode(a, i, b)
        if term.is_zero() and i > max(d - 1, 0):
            break
        out = out + term * c
        i += 1
    return out


def _binom_general(m: int, i: int) -> Q:
    """binom(m, i) for any integer m (m = -1 occurs for weight-zero states)."""
    num = Q(1)
    for j in range(i):
        num *= m - j
    den = 1
    for j in range(1, i + 1):
        den *= j
    return num / den


def _key(P: VertexPresentation, mono) -> tuple:
    # highest weight first, so echelon rows led by weight <= p live in V_{<=p}
    return (-P.mono_weight(mono), mono)


def _vec(P: VertexPresentation, s: State) -> dict:
    return {_key(P, m): c for m, c in s.terms.items()}


def weight_basis(P: VertexPresentation, cap: int) -> dict:
    """{Delta: [basis states of V_Delta]} for Delta <= cap."""
    return {d: [P.state({m: Q(1)}) for m in P.basis(d, "weight")] for d in range(cap + 1)}


@dataclass
class ZhuTruncation:
    """V o V inside V_{<=W} and the filtered dimensions of Zhu(V)."""

    P: VertexPresentation
    W: int
    basis: dict
    ideal: Echelon
    zhu_dims: list = field(default_factory=list)

    @property
    def stable(self) -> int:
        return self.W - 2

    def contains(self, s: State) -> bool:
        return self.ideal.contains(_vec(self.P, s))

    def contains_mod_lower(self, s: State, p: int) -> bool:
        """s lies in V o V + V_{<=p}."""
        rem, _ = self.ideal.reduce(_vec(self.P, s))
        return all(-key[0] <= p for key in rem)

    def gr(self, step: int = 1) -> list:
        """dim Zhu_p / Zhu_{p-step} for p in the stable range."""
        z = self.zhu_dims
        return [z[p] - (z[p - step] if p - step >= 0 else 0) for p in range(len(z))]

    def dims_by_charge(self) -> dict:
        """dim Zhu_{W-2} split by charge (o preserves charge, so the split is well defined)."""
        P = self.P
        ech = Echelon()
        for row, _ in self.ideal.pivots.values():
            ech.add(row)
        out: dict = {}
        for d in range(self.stable + 1):
            for s in self.basis[d]:
                c = P.mono_charge(next(iter(s.terms)))
                out[c] = out.get(c, 0) + int(ech.add(_vec(P, s)))
        return {c: v for c, v in sorted(out.items()) if v}


def zhu_truncation(P: VertexPresentation, W: int) -> ZhuTruncation:
    """Span V o V in V_{<=W} and record dim Zhu_p for p <= W - 2."""
    if W < 2:
        raise TruncationTooSmall("need a weight cap of at least 2")
    basis = weight_basis(P, W)
    ideal = Echelon()
    for da in range(W + 1):
        for db in range(W + 1 - da):
            if da + db + 1 > W:
                continue
            for a in basis[da]:
                for b in basis[db]:
                    v = circ(P, a, b)
                    if v:
                        ideal.add(_vec(P, v))
    Z = ZhuTruncation(P, W, basis, ideal)
    piv_w = [-key[0] for key in ideal.pivots]
    dims, total = [], 0
    for p in range(W - 1):
        total += len(basis[p])
        inside = sum(1 for w in piv_w if w <= p)
        dims.append(total - inside)
    Z.zhu_dims = dims
    return Z


def zhu_algebra_dims(P: VertexPresentation, W: int, step: int = 1) -> list:
    """dim Zhu_p / Zhu_{p-step} for p <= W - 2."""
    return zhu_truncation(P, W).gr(step)


def zhu_total_dim(P: VertexPresentation, W: int) -> int:
    return zhu_truncation(P, W).zhu_dims[-1]


# ---------------------------------------------------------------------------
# checks on the truncation


def check_commutator_identity(Z: ZhuTruncation, cap: int) -> bool:
    """a * b - (-1)^{|a||b|} b * a - sum binom(wt a - 1, i) a_(i) b lies in V o V for wt a + wt b <= cap."""
    P = Z.P
    for da in range(cap + 1):
        for db in range(cap + 1 - da):
            for a in Z.basis[da]:
                for b in Z.basis[db]:
                    r = star(P, a, b) - star(P, b, a) * _sign(a, b) - commutator_rhs(P, a, b)
                    if r and not Z.contains(r):
                        return False
    return True


def check_associativity(Z: ZhuTruncation, cap: int) -> bool:
    """(a * b) * c - a * (b * c) lies in V o V when the weights sum to at most cap."""
    P = Z.P
    items = [(d, s) for d in range(cap + 1) for s in Z.basis[d]]
    for da, a in items:
        for db, b in items:
            if da + db > cap:
                continue
            for dc, c in items:
                if da + db + dc > cap:
                    continue
                r = _homog_star(P, star(P, a, b), c) - star(P, a, star(P, b, c))
                if r and not Z.contains(r):
                    return False
    return True


def _sign(a: State, b: State) -> int:
    return -1 if a.parity() and b.parity() else 1


def _split(P: VertexPresentation, s: State) -> list:
    parts: dict = {}
    for m, c in s.terms.items():
        parts.setdefault(P.mono_weight(m), {})[m] = c
    return [P.state(t) for t in parts.values()]


def _homog_star(P: VertexPresentation, a: State, b: State):
    """a * b extended linearly over the homogeneous parts of a."""
    out = P.zero()
    for part in _split(P, a):
        out = out + star(P, part, b)
    return out


def check_filtration(Z: ZhuTruncation, cap: int) -> bool:
    """Zhu_p * Zhu_q in Zhu_{p+q} and [Zhu_p, Zhu_q] in Zhu_{p+q-1} on basis states."""
    P = Z.P
    for da in range(cap + 1):
        for db in range(cap + 1 - da):
            for a in Z.basis[da]:
                for b in Z.basis[db]:
                    ab, ba = star(P, a, b), star(P, b, a) * _sign(a, b)
                    if not Z.contains_mod_lower(ab, da + db):
                        return False
                    if not Z.contains_mod_lower(ab - ba, da + db - 1):
                        return False
    return True


def is_commutative(Z: ZhuTruncation, cap: int | None = None) -> bool:
    """a * b - (-1)^{|a||b|} b * a lies in V o V for basis states with wt a + wt b <= cap."""
    cap = Z.stable if cap is None else cap
    P = Z.P
    for da in range(cap + 1):
        for db in range(cap + 1 - da):
            for a in Z.basis[da]:
                for b in Z.basis[db]:
                    r = star(P, a, b) - star(P, b, a) * _sign(a, b)
                    if r and not Z.contains(r):
                        return False
    return True


def circ_leading_term(P: VertexPresentation, cap: int, trials: int = 20, seed: int = 0) -> bool:
    """a o b - a_(-2) b has weight at most wt a + wt b, on random homogeneous pairs."""
    rng = random.Random(seed)
    basis = weight_basis(P, cap)
    pool = [(d, s) for d, ss in basis.items() for s in ss if d >= 1]
    for _ in range(trials):
        (da, a), (db, b) = rng.choice(pool), rng.choice(pool)
        r = circ(P, a, b) - P.mode(a, -2, b)
        if any(P.mono_weight(m) > da + db for m in r.terms):
            return False
    return True


# ---------------------------------------------------------------------------
# C_2 algebra


@dataclass
class C2Quotient:
    """R_V = V / C_2(V) truncated at weight W, with the bracket on generator images."""

    P: VertexPresentation
    W: int
    dims: list
    spans: dict
    brackets: dict

    def bracket_equals(self, a: str, b: str, target: State) -> bool:
        """{a, b} equals the image of ``target`` in R_V."""
        P = self.P
        s = P.mode(P.gen(a), 0, P.gen(b)) - target
        if s.is_zero():
            return True
        w = s.weight()
        return self.spans[int(w)].contains(_vec(P, s))


def c2_algebra(P: VertexPresentation, W: int) -> C2Quotient:
    """dim R_V per weight, spanning C_2(V) by a_(-2) b in each weight piece."""
    basis = weight_basis(P, W)
    spans = {d: Echelon() for d in range(W + 1)}
    for da in range(W + 1):
        for db in range(W + 1 - da):
            d = da + db + 1
            if d > W:
                continue
            for a in basis[da]:
                for b in basis[db]:
                    v = P.mode(a, -2, b)
                    if v:
                        spans[d].add(_vec(P, v))
    dims = [len(basis[d]) - len(spans[d]) for d in range(W + 1)]
    brackets = {}
    for g in P.generators:
        for h in P.generators:
            s = P.mode(P.gen(g.name), 0, P.gen(h.name))
            if s:
                brackets[(g.name, h.name)] = str(s)
    return C2Quotient(P, W, dims, spans, brackets)


# ---------------------------------------------------------------------------
# Li filtration versus the weight filtration


@dataclass
class FiltrationReport:
    F: dict  # {(p, Delta): dim F^p V_Delta}
    G: dict  # {(p, Delta): dim G_p V_Delta}
    equal: bool


def _span_dim(P: VertexPresentation, states) -> int:
    e = Echelon()
    for s in states:
        if s:
            e.add(_vec(P, s))
    return len(e)


def li_vs_weight_filtration(P: VertexPresentation, W: int, strict: bool = True) -> FiltrationReport:
    """Compare dim F^p V_Delta with dim G_{Delta-p} V_Delta for Delta <= W.

    Both filtrations are spanned recursively from their definitions, with the
    letters a^i running over all basis states of positive weight.
    """
    basis = weight_basis(P, W)
    if len(basis[0]) != 1:
        raise ValueError("need V_0 = C|0>")
    letters = [(d, s) for d in range(1, W + 1) for s in basis[d]]

    F_span: dict = {}

    def F(p: int, delta: int) -> list:
        if p <= 0:
            return list(basis[delta])
        key = (p, delta)
        if key in F_span:
            return F_span[key]
        out = []
        for da, a in letters:
            for nn in range(0, delta - da + 1):
                rest = delta - da - nn
                for v in F(p - nn, rest):
                    out.append(P.mode(a, -nn - 1, v))
        F_span[key] = _reduce(P, out)
        return F_span[key]

    G_span: dict = {}

    def G(p: int, delta: int) -> list:
        if p < 0:
            return []
        if delta == 0:
            return [P.vacuum()]
        key = (p, delta)
        if key in G_span:
            return G_span[key]
        out = []
        for da, a in letters:
            if da > p:
                continue
            for nn in range(0, delta - da + 1):
                for v in G(p - da, delta - da - nn):
                    out.append(P.mode(a, -nn - 1, v))
        G_span[key] = _reduce(P, out)
        return G_span[key]

    fd, gd = {}, {}
    ok = True
    for delta in range(W + 1):
        for p in range(delta + 1):
            fd[(p, delta)] = len(F(p, delta))
            gd[(delta - p, delta)] = len(G(delta - p, delta))
            if fd[(p, delta)] != gd[(delta - p, delta)]:
                ok = False
    if strict and not ok:
        raise FiltrationMismatch("Li and weight filtrations disagree")
    return FiltrationReport(fd, gd, ok)


def _reduce(P: VertexPresentation, states: list) -> list:
    """A linearly independent subfamily spanning the same space."""
    e = Echelon()
    out = []
    for s in states:
        if s and e.add(_vec(P, s)):
            out.append(s)
    return out


def w_preset(level=None) -> VertexPresentation:
    """W^k(sl_2) as the Virasoro algebra whose central charge is read off the BRST conformal vector."""
    from .brst_reduction import grading_operator
    from .free_fields import build_virasoro
    from .scalar_core import K

    g = grading_operator(2, K if level is None else level)
    P = build_virasoro(g.central_charge)
    P.name = "w-sl2"
    return P
