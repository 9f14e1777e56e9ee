"""Sparse multivariate truncated power series over exact rationals.

A series is a finite map from exponent tuples to nonzero Fraction
coefficients, cut at a fixed total-degree cap.  Truncation is by total
degree across all variables (the coefficient coupling of the underlying
hypergeometric sums runs through the total index, so per-variable caps
would not bound anything cleanly).  All operations are pure and return
new values; equality is structural and requires identical caps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ShapeMismatch

MultiIndex = tuple  # tuple[int, ...], one exponent per formal variable


def _grlex_key(m: MultiIndex):
    return (sum(m), m)


@dataclass(frozen=True)
class TruncatedSeries:
    var_count: int
    cap: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        for m, c in self.terms.items():
            if len(m) != self.var_count:
                raise ShapeMismatch(f"index {m} has wrong length for {self.var_count} variables")
            if sum(m) > self.cap:
                raise ShapeMismatch(f"index {m} exceeds cap {self.cap}")
            if c == 0:
                raise ShapeMismatch("zero coefficient stored")

    @classmethod
    def from_terms(cls, var_count: int, cap: int, terms) -> "TruncatedSeries":
        """Build from any (index, coeff) mapping, pruning zeros and overflow."""
        clean = {}
        for m, c in dict(terms).items():
            m = tuple(int(e) for e in m)
            c = Fraction(c)
            if c != 0 and sum(m) <= cap:
                clean[m] = c
        return cls(var_count, cap, clean)

    @classmethod
    def zero(cls, var_count: int, cap: int) -> "TruncatedSeries":
        return cls(var_count, cap, {})

    @classmethod
    def one(cls, var_count: int, cap: int) -> "TruncatedSeries":
        return cls.monomial(var_count, cap, (0,) * var_count, 1)

    @classmethod
    def monomial(cls, var_count: int, cap: int, index, coeff=1) -> "TruncatedSeries":
        return cls.from_terms(var_count, cap, {tuple(index): Fraction(coeff)})

    def _check_shape(self, other: "TruncatedSeries"):
        if self.var_count != other.var_count or self.cap != other.cap:
            raise ShapeMismatch(
                f"shape ({self.var_count} vars, cap {self.cap}) vs "
                f"({other.var_count} vars, cap {other.cap})"
            )

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_shape(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
        return TruncatedSeries(self.var_count, self.cap, out)

    def __neg__(self) -> "TruncatedSeries":
        return self.scale(-1)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def scale(self, c) -> "TruncatedSeries":
        c = Fraction(c)
        if c == 0:
            return TruncatedSeries.zero(self.var_count, self.cap)
        return TruncatedSeries(self.var_count, self.cap, {m: c * v for m, v in self.terms.items()})

    def shift_monomial(self, index) -> "TruncatedSeries":
        """Multiply by the monomial with the given exponent vector.

        Terms pushed past the cap are dropped (truncation semantics).
        """
        index = tuple(index)
        if len(index) != self.var_count:
            raise ShapeMismatch("shift index has wrong length")
        out = {}
        for m, c in self.terms.items():
            nm = tuple(a + b for a, b in zip(m, index))
            if sum(nm) <= self.cap:
                out[nm] = c
        return TruncatedSeries(self.var_count, self.cap, out)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_shape(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                nm = tuple(a + b for a, b in zip(m1, m2))
                if sum(nm) > self.cap:
                    continue
                s = out.get(nm, 0) + c1 * c2
                if s == 0:
                    out.pop(nm, None)
                else:
                    out[nm] = s
        return TruncatedSeries(self.var_count, self.cap, out)

    def partial_derivative(self, var: int, r: int = 1) -> "TruncatedSeries":
        """r-fold formal derivative in one variable; the cap drops by r."""
        if not 0 <= var < self.var_count:
            raise ShapeMismatch("variable index out of range")
        if r < 0:
            raise ValueError("derivative order must be >= 0")
        new_cap = max(0, self.cap - r)
        out = {}
        for m, c in self.terms.items():
            e = m[var]
            if e < r:
                continue
            fall = 1
            for j in range(r):
                fall *= e - j
            nm = m[:var] + (e - r,) + m[var + 1:]
            if sum(nm) <= new_cap:
                out[nm] = c * fall
        return TruncatedSeries(self.var_count, new_cap, out)

    def truncated(self, new_cap: int) -> "TruncatedSeries":
        """Explicitly re-truncate to a smaller cap."""
        if new_cap > self.cap:
            raise ShapeMismatch("cannot extend a truncated series")
        return TruncatedSeries.from_terms(self.var_count, new_cap, self.terms)

    def coeff(self, index) -> Fraction:
        return self.terms.get(tuple(index), Fraction(0))

    def monomials(self):
        """Stored exponent vectors in graded-lexicographic order."""
        return sorted(self.terms, key=_grlex_key)

    def render(self) -> str:
        """Canonical text form: one "coef * x1^e1 ..." line per term, grlex order."""
        if not self.terms:
            return "0"
        lines = []
        for m in self.monomials():
            factors = " ".join(f"x{i + 1}^{e}" for i, e in enumerate(m) if e > 0)
            lines.append(f"{self.terms[m]} * {factors}" if factors else f"{self.terms[m]}")
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.render()
