"""Exact scalars: rationals and the field Q(k) of rational functions in the level k.

A Scalar is either a rational (``gmpy2.mpq``, exported as ``Q``) or a :class:`RatFunc`.  RatFunc
values are kept reduced with a monic denominator, and any result that turns
out to be constant is demoted to Q, so equal values always compare
(and hash) equal.

Truncated q-series live in :class:`QSeries`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

from gmpy2 import mpq as Q
from gmpy2 import mpz

# plain rationals accepted as input; arithmetic produces Q
RATIONAL = (int, type(mpz(0)), Q, Fraction)

Poly = tuple  # dense coefficient tuple, low degree first, no trailing zeros


# --------------------------------------------------------------------------
# dense univariate polynomials over Q


def _trim(c: list) -> Poly:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly(coeffs: Iterable) -> Poly:
    return _trim([Q(x) for x in coeffs])


def padd(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _trim(out)


def pneg(a: Poly) -> Poly:
    return tuple(-x for x in a)


def psub(a: Poly, b: Poly) -> Poly:
    return padd(a, pneg(b))


def pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Q(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def pscale(a: Poly, c) -> Poly:
    if c == 0:
        return ()
    return tuple(x * c for x in a)


def pdivmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [Q(0)] * max(len(a) - len(b) + 1, 0)
    lb = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] / lb
        q[shift] = c
        for i, y in enumerate(b):
            r[shift + i] -= c * y
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return _trim(q), tuple(r)


def pgcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, pdivmod(a, b)[1]
    if not a:
        return ()
    return pscale(a, 1 / a[-1])


def peval(a: Poly, x):
    acc = Q(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def pderiv(a: Poly) -> Poly:
    return _trim([i * a[i] for i in range(1, len(a))])


def _int_content(a: Poly) -> tuple[int, ...]:
    """Scale a rational polynomial to primitive integer coefficients (sign kept)."""
    if not a:
        return ()
    den = lcm(*(x.denominator for x in a))
    ints = [int(x * den) for x in a]
    g = gcd(*ints)
    return tuple(i // g for i in ints)


# --------------------------------------------------------------------------
# rational functions


class RatFunc:
    """A non-constant element of Q(k), stored as reduced num/den with monic den.

    Do not call the constructor for values that might be constant; use
    :func:`ratfunc`, which demotes constants to Q.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly):
        self.num = num
        self.den = den
        self._hash = None

    # construction helpers -------------------------------------------------
    @staticmethod
    def _coerce(x):
        if isinstance(x, RatFunc):
            return x.num, x.den
        if isinstance(x, RATIONAL):
            return poly([x]), (Q(1),)
        return None

    def __add__(self, other):
        t = type(other)
        if t is RatFunc:
            d2 = other.den
            if len(self.den) == 1 and len(d2) == 1:
                # polynomial + polynomial: no normalization needed
                num = padd(self.num, other.num)
                if len(num) > 1:
                    return RatFunc(num, self.den)
                return num[0] if num else Q(0)
        elif t is Q or t is int:
            if not other:
                return self
            # (num + c*den)/den stays reduced and non-constant
            return RatFunc(padd(self.num, pscale(self.den, other)), self.den)
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        n2, d2 = o
        if self.den == d2:
            return ratfunc(padd(self.num, n2), d2)
        if d2 == (1,):
            return ratfunc(padd(self.num, pmul(n2, self.den)), self.den, reduced=True)
        return ratfunc(padd(pmul(self.num, d2), pmul(n2, self.den)), pmul(self.den, d2))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(pneg(self.num), self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        return self + RatFunc._neg_pair(o)

    def __rsub__(self, other):
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        return (-self) + ratfunc(o[0], o[1], reduced=True)

    @staticmethod
    def _neg_pair(o):
        return ratfunc(pneg(o[0]), o[1], reduced=True)

    def __mul__(self, other):
        t = type(other)
        if t is RatFunc and len(self.den) == 1 and len(other.den) == 1:
            return RatFunc(pmul(self.num, other.num), self.den)
        if t is Q or t is int:
            if not other:
                return Q(0)
            return RatFunc(pscale(self.num, other), self.den)
        if isinstance(other, RATIONAL):
            if other == 0:
                return Q(0)
            return RatFunc(pscale(self.num, Q(other)), self.den)
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        n2, d2 = o
        return ratfunc(pmul(self.num, n2), pmul(self.den, d2))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        n2, d2 = o
        if not n2:
            raise ZeroDivisionError("division by zero scalar")
        return ratfunc(pmul(self.num, d2), pmul(self.den, n2))

    def __rtruediv__(self, other):
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        return ratfunc(pmul(o[0], self.den), pmul(o[1], self.num))

    def __pow__(self, e: int):
        if e < 0:
            return 1 / (self ** (-e))
        out = Q(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if type(other) is RatFunc:
            return self.num == other.num and self.den == other.den
        if isinstance(other, RATIONAL):
            return False  # RatFunc values are never constant
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return True

    def __repr__(self):
        return f"RatFunc({to_string(self)!r})"

    def __str__(self):
        return to_string(self)

    def __call__(self, k0):
        return evaluate(self, k0)


Scalar = Union[Q, RatFunc]


def ratfunc(num: Poly, den: Poly, reduced: bool = False) -> Scalar:
    """Build a canonical Scalar from numerator and denominator polynomials."""
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return Q(0)
    if not reduced and len(den) > 1:
        g = pgcd(num, den)
        if len(g) > 1:
            num = pdivmod(num, g)[0]
            den = pdivmod(den, g)[0]
    lead = den[-1]
    if lead != 1:
        num = pscale(num, 1 / lead)
        den = pscale(den, 1 / lead)
    if len(num) == 1 and len(den) == 1:
        return num[0]
    return RatFunc(num, den)


K = RatFunc((Q(0), Q(1)), (Q(1),))
"""The formal level parameter k."""


def as_scalar(x) -> Scalar:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    return Q(x)


def from_poly(p: Sequence) -> Scalar:
    return ratfunc(poly(p), (Q(1),), reduced=True)


def is_constant(x: Scalar) -> bool:
    return not isinstance(x, RatFunc)


def num_den(x: Scalar) -> tuple[Poly, Poly]:
    if isinstance(x, RatFunc):
        return x.num, x.den
    x = Q(x)
    return poly([x]), (Q(1),)


def evaluate(x: Scalar, k0) -> Q:
    """Specialize k to the rational ``k0``; raises ZeroDivisionError on a pole."""
    if not isinstance(x, RatFunc):
        return Q(x)
    k0 = Q(k0)
    d = peval(x.den, k0)
    if d == 0:
        raise ZeroDivisionError(f"pole at k={k0}")
    return peval(x.num, k0) / d


def substitute(x: Scalar, y: Scalar) -> Scalar:
    """Compose: replace k by the Scalar ``y``."""
    if not isinstance(x, RatFunc):
        return x

    def ev(p):
        acc = Q(0)
        for c in reversed(p):
            acc = acc * y + c
        return acc

    return ev(x.num) / ev(x.den)


# --------------------------------------------------------------------------
# serialization


def _poly_str(ints: Sequence[int], var: str = "k") -> str:
    terms = []
    for deg in range(len(ints) - 1, -1, -1):
        c = ints[deg]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if deg == 0:
            body = str(a)
        else:
            mono = var if deg == 1 else f"{var}^{deg}"
            body = mono if a == 1 else f"{a}*{mono}"
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += sign + body
    return out


def to_string(x: Scalar) -> str:
    """Serialize as "p(k)/q(k)" with integer coefficients (rationals as "a/b")."""
    if not isinstance(x, RatFunc):
        x = Q(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    den_lcm = lcm(*(c.denominator for c in x.num + x.den))
    num = [int(c * den_lcm) for c in x.num]
    den = [int(c * den_lcm) for c in x.den]
    g = gcd(*num, *den)
    num = [c // g for c in num]
    den = [c // g for c in den]
    ns = _poly_str(num)
    if den == [1]:
        return ns
    ds = _poly_str(den)
    return f"({ns})/({ds})"


_TERM = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*(k(?:\^(\d+))?)?")


def _parse_poly(s: str) -> Poly:
    s = s.replace(" ", "").replace("**", "^")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if not s:
        raise ValueError("empty polynomial")
    out: dict[int, Q] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse polynomial {s!r}")
        sign, coef, var, exp = m.groups()
        if coef is None and var is None:
            raise ValueError(f"cannot parse polynomial {s!r}")
        c = Q(coef) if coef else Q(1)
        if sign == "-":
            c = -c
        deg = 0 if var is None else (int(exp) if exp else 1)
        out[deg] = out.get(deg, Q(0)) + c
        pos = m.end()
    top = max(out) if out else 0
    return poly([out.get(i, 0) for i in range(top + 1)])


def parse_scalar(s: str) -> Scalar:
    """Inverse of :func:`to_string`; also accepts plain rationals like "3/2"."""
    s = s.strip()
    if "k" not in s:
        return Q(s.replace(" ", ""))
    depth = 0
    split = None
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0 and s[:i].rstrip().endswith(")"):
            split = i
    if split is None:
        return ratfunc(_parse_poly(s), (Q(1),))
    return ratfunc(_parse_poly(s[:split]), _parse_poly(s[split + 1:]))


# --------------------------------------------------------------------------
# truncated q-series


@dataclass(frozen=True)
class QSeries:
    """q^offset * (c_0 + c_1 q + ... + c_N q^N + O(q^{N+1}))."""

    offset: Q
    coeffs: tuple
    order: int

    def __post_init__(self):
        c = tuple(as_scalar(x) for x in self.coeffs[: self.order + 1])
        c = c + (Q(0),) * (self.order + 1 - len(c))
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "offset", Q(self.offset))

    @classmethod
    def one(cls, order: int) -> QSeries:
        return cls(Q(0), (Q(1),), order)

    @classmethod
    def from_dict(cls, terms: dict, order: int, offset=0) -> QSeries:
        c = [Q(0)] * (order + 1)
        for e, v in terms.items():
            if 0 <= e <= order:
                c[e] += v
        return cls(Q(offset), tuple(c), order)

    def _check_offsets(self, other: QSeries):
        if self.offset != other.offset:
            raise ValueError("cannot add q-series with different offsets")

    def __add__(self, other: QSeries) -> QSeries:
        self._check_offsets(other)
        n = min(self.order, other.order)
        return QSeries(self.offset, tuple(a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs)), n)

    def __neg__(self) -> QSeries:
        return QSeries(self.offset, tuple(-a for a in self.coeffs), self.order)

    def __sub__(self, other: QSeries) -> QSeries:
        return self + (-other)

    def __mul__(self, other) -> QSeries:
        if not isinstance(other, QSeries):
            c = as_scalar(other)
            return QSeries(self.offset, tuple(a * c for a in self.coeffs), self.order)
        n = min(self.order, other.order)
        out = [Q(0)] * (n + 1)
        for i in range(n + 1):
            a = self.coeffs[i]
            if a == 0:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] += a * b
        return QSeries(self.offset + other.offset, tuple(out), n)

    __rmul__ = __mul__

    def inverse(self) -> QSeries:
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("q-series without unit constant term")
        n = self.order
        inv0 = 1 / c0
        out = [inv0] + [Q(0)] * n
        for m in range(1, n + 1):
            acc = Q(0)
            for j in range(1, m + 1):
                if self.coeffs[j] != 0:
                    acc += self.coeffs[j] * out[m - j]
            out[m] = -acc * inv0
        return QSeries(-self.offset, tuple(out), n)

    def __truediv__(self, other: QSeries) -> QSeries:
        return self * other.inverse()

    def shift(self, delta) -> QSeries:
        return QSeries(self.offset + Q(delta), self.coeffs, self.order)

    def truncate(self, order: int) -> QSeries:
        return QSeries(self.offset, self.coeffs[: order + 1], min(order, self.order))

    def to_json(self) -> str:
        return json.dumps(self.to_obj())

    def to_obj(self) -> dict:
        return {
            "offset": to_string(self.offset),
            "order": self.order,
            "coeffs": [to_string(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, s: str) -> QSeries:
        d = json.loads(s)
        return cls(parse_scalar(d["offset"]), tuple(parse_scalar(c) for c in d["coeffs"]), d["order"])


def product_series(factors: dict[int, int], order: int) -> QSeries:
    """Expand prod_j (1 - q^j)^{e_j} for the given {j: e_j} up to q^order.

    Negative exponents are expanded as geometric series, so this doubles as
    the generating function oracle for colored partition counts.
    """
    out = QSeries.one(order)
    for j, e in sorted(factors.items()):
        if j <= 0:
            raise ValueError("factor exponents must be positive")
        if e == 0 or j > order:
            continue
        if e > 0:
            base = QSeries.from_dict({0: 1, j: -1}, order)
        else:
            base = QSeries.from_dict({j * m: 1 for m in range(order // j + 1)}, order)
        for _ in range(abs(e)):
            out = out * base
    return out


def euler_product(order: int, power: int = 1) -> QSeries:
    """prod_{j>=1} (1 - q^j)^power truncated at q^order."""
    return product_series({j: power for j in range(1, order + 1)}, order)
