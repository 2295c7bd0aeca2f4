"""Sparse commutative polynomials over Q (or Q(k)) in hashable variables.

A monomial is a sorted tuple of ``(variable, exponent)`` pairs; exponents may
be negative, which gives Laurent monomials for weight bookkeeping.
"""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, Mapping

from .scalar_core import Q, to_string

Monomial = tuple


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        ne = d.get(v, 0) + e
        if ne:
            d[v] = ne
        else:
            d.pop(v)
    return tuple(sorted(d.items(), key=lambda t: _vkey(t[0])))


def _vkey(v):
    return (str(type(v)), v) if not isinstance(v, tuple) else ("tuple", v)


class MPoly:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def var(cls, v: Hashable) -> MPoly:
        return cls({((v, 1),): Q(1)})

    @classmethod
    def const(cls, c) -> MPoly:
        return cls({(): c}) if c != 0 else cls()

    @staticmethod
    def _lift(x) -> MPoly:
        return x if isinstance(x, MPoly) else MPoly.const(x)

    def __add__(self, other):
        other = MPoly._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            nc = out.get(m, 0) + c
            if nc == 0:
                out.pop(m, None)
            else:
                out[m] = nc
        return MPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-MPoly._lift(other))

    def __rsub__(self, other):
        return MPoly._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            if other == 0:
                return MPoly()
            return MPoly({m: c * other for m, c in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                nc = out.get(m, 0) + c1 * c2
                if nc == 0:
                    out.pop(m, None)
                else:
                    out[m] = nc
        return MPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / Q(c) if not isinstance(c, MPoly) else _bad())

    def __pow__(self, e: int):
        out = MPoly.const(Q(1))
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        other = MPoly._lift(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def weighted_degrees(self, weight: Callable) -> set:
        return {sum(e * weight(v) for v, e in m) for m in self.terms}

    def diff(self, v: Hashable) -> MPoly:
        out: dict = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(v, 0)
            if e == 0:
                continue
            if e == 1:
                d.pop(v)
            else:
                d[v] = e - 1
            nm = tuple(sorted(d.items(), key=lambda t: _vkey(t[0])))
            out[nm] = out.get(nm, 0) + c * e
        return MPoly(out)

    def subs(self, mapping: Mapping) -> MPoly:
        """Substitute variables by polynomials (or scalars); others are kept."""
        out = MPoly()
        for m, c in self.terms.items():
            term = MPoly.const(c)
            for v, e in m:
                if v in mapping:
                    term = term * (MPoly._lift(mapping[v]) ** e)
                else:
                    term = term * MPoly({((v, e),): Q(1)})
            out = out + term
        return out

    def coeff(self, mono: Monomial):
        return self.terms.get(mono, Q(0))

    def __repr__(self):
        return f"MPoly({self.to_string()})"

    def to_string(self, name: Callable = str) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda mm: [(_vkey(v), e) for v, e in mm]):
            c = self.terms[m]
            body = "*".join(name(v) if e == 1 else f"{name(v)}^{e}" for v, e in m)
            cs = to_string(c)
            if not body:
                parts.append(cs)
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"({cs})*{body}")
        return " + ".join(parts)


def _bad():
    raise TypeError("polynomial division is not supported")


def mpoly_sum(items: Iterable[MPoly]) -> MPoly:
    out = MPoly()
    for x in items:
        out = out + x
    return out
