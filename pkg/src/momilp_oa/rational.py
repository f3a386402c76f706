"""Exact scalar helpers.

All geometry and LP decisions run on :class:`gmpy2.mpq`, which compares and
hashes equal to :class:`fractions.Fraction`, so callers may pass either.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from gmpy2 import mpq

Rational = mpq


def Q(x, den=None) -> mpq:
    """Coerce ``x`` (int, str, Fraction, mpq, float) to an exact rational."""
    if den is not None:
        return mpq(x, den)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str) and "/" in x:
        n, d = x.split("/")
        return mpq(int(n), int(d))
    return mpq(x)


def qvec(xs: Iterable) -> tuple:
    return tuple(Q(x) for x in xs)


def dot(a: Sequence, b: Sequence):
    s = 0
    for x, y in zip(a, b):
        s += x * y
    return s


def to_fraction(x) -> Fraction:
    x = Q(x)
    return Fraction(int(x.numerator), int(x.denominator))


def fmt(x) -> str:
    """``num/den`` string, or a bare integer when the denominator is 1."""
    x = Q(x)
    if x.denominator == 1:
        return str(int(x.numerator))
    return f"{int(x.numerator)}/{int(x.denominator)}"


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def integer_form(w: Sequence, alpha) -> tuple[tuple[int, ...], int]:
    """Scale ``(w, alpha)`` by a positive factor to coprime integers."""
    vals = [Q(v) for v in list(w) + [alpha]]
    L = 1
    for v in vals:
        L = lcm(L, int(v.denominator))
    ints = [int(v * L) for v in vals]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints[:-1]), ints[-1]


def rank(rows: Sequence[Sequence]) -> int:
    """Rank of a small exact matrix by Gaussian elimination."""
    m = [[Q(v) for v in r] for r in rows]
    if not m:
        return 0
    ncol = len(m[0])
    r = 0
    for c in range(ncol):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        for i in range(r + 1, len(m)):
            f = m[i][c]
            if f != 0:
                f = f / pr[c]
                row = m[i]
                for k in range(c, ncol):
                    row[k] -= f * pr[k]
        r += 1
        if r == len(m):
            break
    return r
