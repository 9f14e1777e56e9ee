"""Exact rational scalar primitives.

Rationals are ``fractions.Fraction`` values: arbitrary precision, always
canonical (positive denominator, reduced), with exact arithmetic and a
"p/q" text form.  On top of that sit the rising-factorial helpers that the
series machinery consumes everywhere.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import ParseError, PoleInParameters

Rational = Fraction


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" (or plain "p") into a canonical rational."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}: {exc}") from exc


def format_rational(x: Fraction) -> str:
    """Render as "p/q", omitting "/q" for integers."""
    return str(Fraction(x))


def poch(a, k: int) -> Fraction:
    """Rising factorial a(a+1)...(a+k-1); empty product 1 for k = 0.

    Computed by direct multiplication so the result is exact; a zero
    result is a legitimate value (it signals a parameter pole downstream).
    """
    if k < 0:
        raise ValueError("poch needs k >= 0")
    a = Fraction(a)
    out = Fraction(1)
    for j in range(k):
        out *= a + j
    return out


def poch_is_zero(a, k: int) -> bool:
    """True iff (a)_k = 0, i.e. a is an integer with -(k-1) <= a <= 0."""
    a = Fraction(a)
    return a.denominator == 1 and -a.numerator >= 0 and a.numerator + k - 1 >= 0 and k > 0


def list_poch(params, k: int) -> Fraction:
    """Product of poch(p, k) over a parameter list; empty list gives 1."""
    out = Fraction(1)
    for p in params:
        out *= poch(p, k)
    return out


def binom(r: int, k: int) -> int:
    """Binomial coefficient; 0 when k > r."""
    if r < 0 or k < 0:
        raise ValueError("binom needs nonnegative arguments")
    return math.comb(r, k) if k <= r else 0


def vandermonde_2f1(r: int, a, b) -> Fraction:
    """Closed form of the terminating Gauss sum at unit argument.

    Returns (b-a)_r / (b)_r, the value of sum_{k=0..r} (-r)_k (a)_k /
    ((b)_k k!).  Raises PoleInParameters when (b)_r = 0.
    """
    a = Fraction(a)
    b = Fraction(b)
    if poch_is_zero(b, r):
        raise PoleInParameters(f"(({b}))_{r} = 0 in terminating 2F1")
    return poch(b - a, r) / poch(b, r)
