"""Exact sparse linear algebra over Q, Q(k) and prime fields.

Vectors are dicts ``{column: value}`` with no zero entries.  The incremental
:class:`Echelon` basis is the workhorse for spans, membership tests and
linear solves; :func:`bareiss_rank` is the fraction-free route over Q[k].
"""

from __future__ import annotations

from typing import Hashable, Iterable, Optional, Sequence

from .scalar_core import (
    Q,
    RatFunc,
    Scalar,
    evaluate,
    num_den,
    pdivmod,
    pmul,
    psub,
    pgcd,
)

PRIME = (1 << 61) - 1


class Echelon:
    """Incrementally built row-echelon basis of a subspace.

    With ``track=True`` every stored row remembers how it was combined from
    the inserted vectors, which turns :meth:`express` into a linear solver.
    """

    def __init__(self, track: bool = False, modulus: Optional[int] = None):
        self.pivots: dict = {}
        self.track = track
        self.modulus = modulus
        self.count = 0

    def __len__(self):
        return len(self.pivots)

    def _inv(self, x):
        if self.modulus:
            return pow(x, self.modulus - 2, self.modulus)
        return 1 / x

    def _sub_scaled(self, v: dict, row: dict, f):
        p = self.modulus
        for c, x in row.items():
            nv = v.get(c, 0) - f * x
            if p:
                nv %= p
            if nv == 0:
                v.pop(c, None)
            else:
                v[c] = nv

    def reduce(self, vec: dict) -> tuple[dict, dict]:
        """Return (remainder, combination) with vec = remainder + sum comb_i * input_i."""
        v = dict(vec)
        comb: dict = {}
        pivots = self.pivots
        while True:
            cand = [c for c in v if c in pivots]
            if not cand:
                break
            c = min(cand, key=_colkey)
            row, rc = pivots[c]
            f = v[c]
            self._sub_scaled(v, row, f)
            if self.track:
                for i, x in rc.items():
                    nv = comb.get(i, 0) + f * x
                    if self.modulus:
                        nv %= self.modulus
                    if nv == 0:
                        comb.pop(i, None)
                    else:
                        comb[i] = nv
        return v, comb

    def add(self, vec: dict, label: Hashable = None) -> bool:
        """Insert a vector; returns True if it enlarged the span."""
        if label is None:
            label = self.count
        self.count += 1
        rem, comb = self.reduce(vec)
        if not rem:
            return False
        lead = min(rem, key=_colkey)
        inv = self._inv(rem[lead])
        p = self.modulus
        row = {c: (x * inv % p if p else x * inv) for c, x in rem.items()}
        rc = {}
        if self.track:
            # row = inv * (vec - sum comb_i input_i)
            rc = {i: (-x * inv % p if p else -x * inv) for i, x in comb.items()}
            rc[label] = (inv % p if p else inv) + rc.get(label, 0)
        self.pivots[lead] = (row, rc)
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)[0]

    def express(self, vec: dict) -> Optional[dict]:
        """Coefficients expressing vec in the inserted vectors, or None."""
        rem, comb = self.reduce(vec)
        if rem:
            return None
        return comb


def _colkey(c):
    return c


def rank(rows: Iterable[dict], modulus: Optional[int] = None) -> int:
    e = Echelon(modulus=modulus)
    for r in rows:
        e.add(r)
    return len(e)


def solve(columns: Sequence[dict], target: dict) -> Optional[list]:
    """Find x with sum x_i * columns[i] = target (exact), or None."""
    e = Echelon(track=True)
    for i, c in enumerate(columns):
        e.add(c, label=i)
    comb = e.express(target)
    if comb is None:
        return None
    return [comb.get(i, Q(0)) for i in range(len(columns))]


def to_mod_p(x: Scalar, k0: Q, p: int = PRIME) -> int:
    """Image of a Scalar under k -> k0 followed by reduction mod p."""
    v = evaluate(x, k0)
    den = v.denominator % p
    if den == 0:
        raise ZeroDivisionError("denominator vanishes mod p")
    return v.numerator * pow(den, p - 2, p) % p


def specialize_rows(rows: Iterable[dict], k0, modulus: Optional[int] = None) -> list[dict]:
    out = []
    k0 = Q(k0)
    for r in rows:
        if modulus:
            nr = {c: to_mod_p(x, k0, modulus) for c, x in r.items()}
            out.append({c: x for c, x in nr.items() if x})
        else:
            nr = {c: evaluate(x, k0) for c, x in r.items()}
            out.append({c: x for c, x in nr.items() if x})
    return out


# --------------------------------------------------------------------------
# fraction-free elimination over Q[k]


def _clear_row(row: dict) -> dict:
    """Multiply a row of Q(k) entries by the lcm of its denominators."""
    den = (Q(1),)
    for x in row.values():
        d = num_den(x)[1]
        g = pgcd(den, d)
        den = pmul(den, pdivmod(d, g)[0])
    out = {}
    for c, x in row.items():
        n, d = num_den(x)
        out[c] = pmul(n, pdivmod(den, d)[0])
    return out


def bareiss_rank(rows: Sequence[dict]) -> int:
    """Rank over Q(k) by fraction-free (Bareiss) elimination in Q[k].

    Entries are Scalars; rows are first cleared of denominators.  All
    intermediate divisions are exact polynomial divisions.
    """
    mat = [_clear_row(r) for r in rows]
    mat = [r for r in mat if r]
    cols = sorted({c for r in mat for c in r}, key=_colkey)
    prev = (Q(1),)
    rk = 0
    work = mat
    for col in cols:
        piv = None
        for i in range(rk, len(work)):
            if work[i].get(col):
                piv = i
                break
        if piv is None:
            continue
        work[rk], work[piv] = work[piv], work[rk]
        prow = work[rk]
        a = prow[col]
        for i in range(rk + 1, len(work)):
            r = work[i]
            b = r.get(col)
            new = {}
            keys = set(r) | set(prow)
            for c in keys:
                if c == col:
                    continue
                val = psub(pmul(a, r.get(c, ())), pmul(b, prow.get(c, ())) if b else ())
                if val:
                    q, rem = pdivmod(val, prev)
                    if rem:
                        raise ArithmeticError("Bareiss division not exact")
                    if q:
                        new[c] = q
            work[i] = new
        prev = a
        rk += 1
    return rk


def is_symbolic(rows: Iterable[dict]) -> bool:
    return any(isinstance(x, RatFunc) for r in rows for x in r.values())


def nullspace(columns: Sequence[dict]) -> list[dict]:
    """Basis of {x : sum x_i columns[i] = 0}, as dicts {i: x_i}.

    One kernel vector per column that depends on the earlier ones.
    """
    e = Echelon(track=True)
    out = []
    for i, c in enumerate(columns):
        rem, comb = e.reduce(c)
        if rem:
            e.add(c, label=i)
        else:
            vec = {j: -x for j, x in comb.items()}
            vec[i] = Q(1)
            out.append(vec)
    return out


def generic_rank(columns: Sequence[dict], specializations: Sequence = (), modulus: int = PRIME,
                 exact_limit: int = 0) -> tuple[int, str]:
    """Rank over Q(k) together with the method that certified it.

    Matrices with at most ``exact_limit`` rows and columns go through
    :func:`bareiss_rank`.  Otherwise the result is the largest rank over F_p
    at the given specializations of k, which is a lower bound for the
    generic rank (a nonzero minor mod p stays nonzero over Q(k)).
    """
    rows = [c for c in columns if c]
    if not rows:
        return 0, "zero"
    if not is_symbolic(rows):
        return rank(rows), "exact"
    nrows = len({r for c in rows for r in c})
    if max(len(rows), nrows) <= exact_limit:
        return bareiss_rank(rows), "bareiss"
    best = 0
    for k0 in specializations:
        try:
            best = max(best, rank(specialize_rows(rows, k0, modulus), modulus))
        except ZeroDivisionError:
            continue
    return best, "specialized"
