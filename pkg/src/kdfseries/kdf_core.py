"""Kampé de Fériet parameter bundles and their truncated expansion.

A bundle holds one joined numerator list, one joined denominator list,
and per-slot numerator/denominator lists.  The term coefficient couples
the slots through rising factorials in the total summation index, so a
bundle together with a slot-to-variable binding expands into a
TruncatedSeries by direct enumeration of all index vectors inside the
total-degree cap.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError, PoleInParameters, ShapeMismatch
from .exact_arith import format_rational, parse_rational, poch, poch_is_zero
from .mseries import TruncatedSeries


@dataclass(frozen=True)
class KdfSpec:
    """Parameter bundle: joined lists a/alpha, per-slot lists b/beta."""

    n: int
    a: tuple
    alpha: tuple
    b: tuple    # n tuples of slot numerator parameters
    beta: tuple  # n tuples of slot denominator parameters

    def __post_init__(self):
        if self.n < 1:
            raise ShapeMismatch("slot count must be >= 1")
        if len(self.b) != self.n or len(self.beta) != self.n:
            raise ShapeMismatch("b and beta need one list per slot")

    @classmethod
    def make(cls, n, a=(), alpha=(), b=None, beta=None) -> "KdfSpec":
        b = tuple(() for _ in range(n)) if b is None else b
        beta = tuple(() for _ in range(n)) if beta is None else beta
        frac = lambda xs: tuple(Fraction(x) for x in xs)
        return cls(n, frac(a), frac(alpha), tuple(frac(t) for t in b), tuple(frac(t) for t in beta))

    @property
    def p(self) -> int:
        return len(self.a)

    @property
    def l(self) -> int:
        return len(self.alpha)

    def q(self, t: int) -> int:
        return len(self.b[t - 1])

    def m(self, t: int) -> int:
        return len(self.beta[t - 1])

    def to_json(self) -> dict:
        fmt = lambda xs: [format_rational(x) for x in xs]
        return {
            "n": self.n,
            "a": fmt(self.a),
            "alpha": fmt(self.alpha),
            "b": [fmt(row) for row in self.b],
            "beta": [fmt(row) for row in self.beta],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "KdfSpec":
        try:
            parse = lambda xs: tuple(parse_rational(str(x)) for x in xs)
            return cls(
                int(doc["n"]),
                parse(doc["a"]),
                parse(doc["alpha"]),
                tuple(parse(row) for row in doc["b"]),
                tuple(parse(row) for row in doc["beta"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad spec document: {exc}") from exc

    def __str__(self) -> str:
        return json.dumps(self.to_json())


@dataclass(frozen=True)
class SlotBinding:
    """Maps each argument slot to (formal variable index, exponent multiplier)."""

    slots: tuple  # tuple of (var_index, multiplier)

    def __post_init__(self):
        for var, mult in self.slots:
            if var < 0 or mult < 1:
                raise ShapeMismatch("binding needs var >= 0 and multiplier >= 1")

    @classmethod
    def identity(cls, n: int) -> "SlotBinding":
        """Slot t reads variable t with exponent multiplier 1."""
        return cls(tuple((t, 1) for t in range(n)))

    @classmethod
    def collapsed(cls, n: int, var: int = 0, mult: int = 1) -> "SlotBinding":
        """Every slot reads the same variable (shared-argument formulas)."""
        return cls(tuple((var, mult) for _ in range(n)))

    @classmethod
    def mixed(cls, n: int, first_mult: int = 1) -> "SlotBinding":
        """Slot 1 reads variable 0 (optionally powered); slots 2..n read their own."""
        return cls(((0, first_mult),) + tuple((t, 1) for t in range(1, n)))

    @property
    def n(self) -> int:
        return len(self.slots)

    def max_var(self) -> int:
        return max(var for var, _ in self.slots)

    def to_json(self) -> list:
        return [{"var": var, "mult": mult} for var, mult in self.slots]

    @classmethod
    def from_json(cls, doc) -> "SlotBinding":
        try:
            return cls(tuple((int(d["var"]), int(d["mult"])) for d in doc))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad binding document: {exc}") from exc


# -- parameter-list edits (1-based indices in the public API) ----------------

def list_shift(params, k) -> tuple:
    return tuple(Fraction(x) + k for x in params)


def list_drop(params, i: int) -> tuple:
    if not 1 <= i <= len(params):
        raise IndexError(f"drop index {i} out of range 1..{len(params)}")
    return tuple(params[:i - 1]) + tuple(params[i:])


def list_insert(params, value, position: int = 0) -> tuple:
    params = tuple(params)
    return params[:position] + (Fraction(value),) + params[position:]


def lambda_coeff(spec: KdfSpec, s) -> Fraction:
    """Exact term coefficient at index vector s (without the 1/s! factors)."""
    s = tuple(s)
    if len(s) != spec.n:
        raise ShapeMismatch("index vector length must equal slot count")
    tot = sum(s)
    num = Fraction(1)
    for aj in spec.a:
        num *= poch(aj, tot)
    for t in range(spec.n):
        for bj in spec.b[t]:
            num *= poch(bj, s[t])
    den = Fraction(1)
    for alj in spec.alpha:
        den *= poch(alj, tot)
    for t in range(spec.n):
        for bj in spec.beta[t]:
            den *= poch(bj, s[t])
    if den == 0:
        raise PoleInParameters(f"denominator Pochhammer vanishes at s={s}")
    return num / den


def _index_vectors(mults, cap):
    """All slot index vectors s with sum(mult_t * s_t) <= cap."""
    n = len(mults)

    def rec(t, budget, prefix):
        if t == n:
            yield tuple(prefix)
            return
        mult = mults[t]
        for st in range(budget // mult + 1):
            yield from rec(t + 1, budget - mult * st, prefix + [st])

    yield from rec(0, cap, [])


def expand(spec: KdfSpec, binding: SlotBinding, var_count: int, cap: int) -> TruncatedSeries:
    """Truncated series of the bundle under the given slot binding.

    Enumerates exactly the index vectors whose bound monomial stays inside
    the total-degree cap; parameter poles beyond the cap are never touched.
    """
    if binding.n != spec.n:
        raise ShapeMismatch("binding slot count must match the bundle")
    if binding.max_var() >= var_count:
        raise ShapeMismatch("binding references a variable outside var_count")

    cache = {}

    def cpoch(x, k):
        key = (x, k)
        v = cache.get(key)
        if v is None:
            v = poch(x, k)
            cache[key] = v
        return v

    fact = [1]
    for j in range(1, cap + 1):
        fact.append(fact[-1] * j)

    mults = [mult for _, mult in binding.slots]
    terms = {}
    for s in _index_vectors(mults, cap):
        tot = sum(s)
        num = Fraction(1)
        den = Fraction(1)
        for aj in spec.a:
            num *= cpoch(aj, tot)
        for alj in spec.alpha:
            den *= cpoch(alj, tot)
        for t in range(spec.n):
            for bj in spec.b[t]:
                num *= cpoch(bj, s[t])
            for bj in spec.beta[t]:
                den *= cpoch(bj, s[t])
            den *= fact[s[t]] if s[t] <= cap else 1
        if den == 0:
            raise PoleInParameters(f"denominator Pochhammer vanishes at s={s}")
        coeff = num / den
        if coeff == 0:
            continue
        exps = [0] * var_count
        for (var, mult), st in zip(binding.slots, s):
            exps[var] += mult * st
        key = tuple(exps)
        acc = terms.get(key, 0) + coeff
        if acc == 0:
            terms.pop(key, None)
        else:
            terms[key] = acc
    return TruncatedSeries(var_count, cap, terms)


def pole_scan(spec: KdfSpec, binding: SlotBinding, cap: int):
    """First denominator pole reachable inside the cap, or None.

    Cheap structural check: a rising factorial vanishes iff its base is a
    nonpositive integer close enough to zero, so no products are formed.
    """
    mults = [mult for _, mult in binding.slots]
    max_tot = max((sum(s) for s in _index_vectors(mults, cap)), default=0)
    for alj in spec.alpha:
        if poch_is_zero(alj, max_tot):
            return f"joined denominator parameter {format_rational(alj)} poles within cap {cap}"
    max_slot = [0] * spec.n
    for s in _index_vectors(mults, cap):
        for t, st in enumerate(s):
            max_slot[t] = max(max_slot[t], st)
    for t in range(spec.n):
        for bj in spec.beta[t]:
            if poch_is_zero(bj, max_slot[t]):
                return (f"slot {t + 1} denominator parameter {format_rational(bj)} "
                        f"poles within cap {cap}")
    return None


def shift_spec(spec: KdfSpec, r: int):
    """Parameter shift matching r-fold differentiation in the first argument.

    Returns (prefactor, shifted bundle): the joined lists and the first
    slot's lists all move up by r, and the prefactor is the product of
    their length-r rising factorials (numerators over denominators).
    """
    if r == 0:
        return Fraction(1), spec
    num = Fraction(1)
    for aj in spec.a:
        num *= poch(aj, r)
    for bj in spec.b[0]:
        num *= poch(bj, r)
    den = Fraction(1)
    for alj in spec.alpha:
        den *= poch(alj, r)
    for bj in spec.beta[0]:
        den *= poch(bj, r)
    if den == 0:
        raise PoleInParameters("shift prefactor denominator vanishes")
    shifted = KdfSpec(
        spec.n,
        list_shift(spec.a, r),
        list_shift(spec.alpha, r),
        (list_shift(spec.b[0], r),) + spec.b[1:],
        (list_shift(spec.beta[0], r),) + spec.beta[1:],
    )
    return num / den, shifted


# -- convergence classification ---------------------------------------------

ENTIRE = "entire-direction"
UNIT_DOMAIN = "unit-domain"
DIVERGENT = "divergent"


@dataclass(frozen=True)
class SlotConvergence:
    delta: int
    kind: str


@dataclass(frozen=True)
class ConvergenceReport:
    slots: tuple
    # Set only when every slot sits on the boundary delta = 0.
    global_domain: str = None

    def to_json(self) -> dict:
        doc = {"slots": [{"delta": s.delta, "class": s.kind} for s in self.slots]}
        if self.global_domain is not None:
            doc["globalDomain"] = self.global_domain
        return doc


def convergence_class(spec: KdfSpec) -> ConvergenceReport:
    """Per-slot convergence margin delta_u = 1 + l + m_u - p - q_u and class."""
    slots = []
    for t in range(1, spec.n + 1):
        delta = 1 + spec.l + spec.m(t) - spec.p - spec.q(t)
        if delta > 0:
            kind = ENTIRE
        elif delta == 0:
            kind = UNIT_DOMAIN
        else:
            kind = DIVERGENT
        slots.append(SlotConvergence(delta, kind))
    global_domain = None
    if all(s.delta == 0 for s in slots):
        if spec.p > spec.l:
            e = spec.p - spec.l
            global_domain = f"sum_u |x_u|^(1/{e}) < 1"
        else:
            global_domain = "max_u |x_u| < 1"
    return ConvergenceReport(tuple(slots), global_domain)
