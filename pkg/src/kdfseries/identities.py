"""Catalog of the finite summation identities and their exact verifier.

Every identity is a pair of builders producing truncated series from the
same base parameter bundle: a finite k-sum of coefficient-weighted,
parameter-shifted expansions on the left, and a single (possibly
prefactored) expansion on the right.  Verification is exact coefficient
comparison at a shared total-degree cap.

Where the printed form of an identity admits two readings, the default
"corrected" reading is the one validated by the expansion oracle; the
"literal" reading keeps the printed form so its failure can be exhibited
(see the errata module).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import ExhaustedRetries, NotApplicable, ParseError, PoleInParameters
from .exact_arith import binom, format_rational, list_poch, poch, poch_is_zero
from .kdf_core import (
    KdfSpec,
    SlotBinding,
    expand,
    list_insert,
    pole_scan,
    shift_spec,
)
from .mseries import TruncatedSeries


class IdentityId(str, Enum):
    EQ5 = "EQ5"
    EQ6 = "EQ6"
    EQ7 = "EQ7"
    EQ8 = "EQ8"
    EQ9 = "EQ9"
    EQ10 = "EQ10"
    EQ11 = "EQ11"
    EQ12 = "EQ12"
    EQ13 = "EQ13"
    EQ14 = "EQ14"
    EQ15 = "EQ15"
    EQ16 = "EQ16"
    EQ17 = "EQ17"
    EQ18 = "EQ18"
    EQ19 = "EQ19"
    EQ20 = "EQ20"
    EQ21 = "EQ21"


CORRECTED = "corrected"
LITERAL = "literal"

POWER_IDS = (IdentityId.EQ18, IdentityId.EQ19)

# ids whose k-sum edits the joined parameter rows (shared reciprocal argument)
_JOINED_PAIR_IDS = (IdentityId.EQ10, IdentityId.EQ12, IdentityId.EQ14, IdentityId.EQ16)
# ids whose k-sum edits the first slot's rows
_SLOT_PAIR_IDS = (IdentityId.EQ11, IdentityId.EQ13, IdentityId.EQ15, IdentityId.EQ17)


@dataclass(frozen=True)
class IdentityInstance:
    id: IdentityId
    spec: KdfSpec
    param_index: int = 1
    r: int = 0
    power_alpha: int = None
    reading: str = CORRECTED
    cap: int = 7

    def to_json(self) -> dict:
        doc = {
            "id": self.id.value,
            "spec": self.spec.to_json(),
            "i": self.param_index,
            "r": self.r,
            "reading": self.reading,
            "cap": self.cap,
        }
        if self.power_alpha is not None:
            doc["powerAlpha"] = self.power_alpha
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "IdentityInstance":
        try:
            return cls(
                id=IdentityId(doc["id"]),
                spec=KdfSpec.from_json(doc["spec"]),
                param_index=int(doc.get("i", 1)),
                r=int(doc["r"]),
                power_alpha=(int(doc["powerAlpha"]) if "powerAlpha" in doc else None),
                reading=doc.get("reading", CORRECTED),
                cap=int(doc["cap"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad instance document: {exc}") from exc


@dataclass(frozen=True)
class Mismatch:
    monomial: tuple
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class VerificationReport:
    status: str  # pass | fail | pole | not-applicable
    cap_checked: int
    coefficients_compared: int
    first_mismatch: Mismatch = None
    detail: str = ""

    def to_json(self) -> dict:
        doc = {
            "status": self.status,
            "capChecked": self.cap_checked,
            "coefficientsCompared": self.coefficients_compared,
        }
        if self.first_mismatch is not None:
            doc["firstMismatch"] = {
                "monomial": list(self.first_mismatch.monomial),
                "lhs": format_rational(self.first_mismatch.lhs),
                "rhs": format_rational(self.first_mismatch.rhs),
            }
        if self.detail:
            doc["detail"] = self.detail
        return doc


@dataclass(frozen=True)
class Violation:
    kind: str  # "structure" or "pole"
    message: str


# -- bundle edit helpers -----------------------------------------------------

def _shifted_first(spec: KdfSpec, k: int) -> KdfSpec:
    """Joined rows and the first slot's rows all shifted up by k."""
    return shift_spec(spec, k)[1] if k else spec


def _with_joined(spec, i, value):
    a = list(spec.a)
    a[i - 1] = Fraction(value)
    return KdfSpec(spec.n, tuple(a), spec.alpha, spec.b, spec.beta)


def _with_slot1_num(spec, i, value):
    row = list(spec.b[0])
    row[i - 1] = Fraction(value)
    return KdfSpec(spec.n, spec.a, spec.alpha, (tuple(row),) + spec.b[1:], spec.beta)


def _with_slot1_den(spec, i, value):
    row = list(spec.beta[0])
    row[i - 1] = Fraction(value)
    return KdfSpec(spec.n, spec.a, spec.alpha, spec.b, (tuple(row),) + spec.beta[1:])


def _push_joined(spec, num_vals, den_vals):
    a = spec.a
    alpha = spec.alpha
    for v in reversed(list(num_vals)):
        a = list_insert(a, v)
    for v in reversed(list(den_vals)):
        alpha = list_insert(alpha, v)
    return KdfSpec(spec.n, a, alpha, spec.b, spec.beta)


def _push_slot1(spec, num_vals, den_vals):
    b0 = spec.b[0]
    beta0 = spec.beta[0]
    for v in reversed(list(num_vals)):
        b0 = list_insert(b0, v)
    for v in reversed(list(den_vals)):
        beta0 = list_insert(beta0, v)
    return KdfSpec(spec.n, spec.a, spec.alpha, (b0,) + spec.b[1:], (beta0,) + spec.beta[1:])


def _lp_skip(params, i, k):
    return list_poch(params[:i - 1] + params[i:], k)


def _checked_ratio(num, den_base, r, what):
    den = poch(den_base, r)
    if den == 0:
        raise PoleInParameters(f"divisor ({format_rational(Fraction(den_base))})_{r} = 0 in {what}")
    return num / den


# -- identity descriptors ----------------------------------------------------
#
# Each LHS/RHS builder returns raw (coeff, x1_power, spec) triples; the
# shared binding of the instance turns them into series.

def _lhs_eq5(inst, S):
    i, r = inst.param_index, inst.r
    out = []
    for k in range(r + 1):
        den = list_poch(S.alpha, k) * list_poch(S.beta[0], k)
        if den == 0:
            raise PoleInParameters(f"k-sum divisor vanishes at k={k}")
        coeff = Fraction(binom(r, k)) * _lp_skip(S.a, i, k) * list_poch(S.b[0], k) / den
        out.append((coeff, k, _shifted_first(S, k)))
    return out


def _rhs_eq5(inst, S):
    ai = S.a[inst.param_index - 1]
    return [(Fraction(1), 0, _push_slot1(S, [ai + inst.r], [ai]))]


def _lhs_eq6(inst, S):
    i, r = inst.param_index, inst.r
    out = []
    for k in range(r + 1):
        sub = r if inst.reading == LITERAL else k
        den = list_poch(S.alpha, sub) * list_poch(S.beta[0], sub)
        if den == 0:
            raise PoleInParameters(f"k-sum divisor vanishes at k={k}")
        coeff = Fraction(binom(r, k)) * list_poch(S.a, sub) * _lp_skip(S.b[0], i, sub) / den
        out.append((coeff, k, _shifted_first(S, k)))
    return out


def _rhs_eq6(inst, S):
    bi = S.b[0][inst.param_index - 1]
    return [(Fraction(1), 0, _with_slot1_num(S, inst.param_index, bi + inst.r))]


def _lhs_eq7(inst, S):
    i, r = inst.param_index, inst.r
    bi = S.beta[0][i - 1]
    out = []
    for k in range(r + 1):
        den = poch(bi - r, k) * list_poch(S.alpha, k) * list_poch(S.beta[0], k)
        if den == 0:
            raise PoleInParameters(f"k-sum divisor vanishes at k={k}")
        coeff = Fraction(binom(r, k)) * list_poch(S.a, k) * list_poch(S.b[0], k) / den
        out.append((coeff, k, _shifted_first(S, k)))
    return out


def _rhs_eq7(inst, S):
    bi = S.beta[0][inst.param_index - 1]
    return [(Fraction(1), 0, _with_slot1_den(S, inst.param_index, bi - inst.r))]


def _lhs_eq8(inst, S):
    i, r = inst.param_index, inst.r
    bi = S.beta[0][i - 1]
    out = []
    for k in range(r + 1):
        den = poch(2 - bi - r, k)
        if den == 0:
            raise PoleInParameters(f"k-sum divisor vanishes at k={k}")
        coeff = Fraction(binom(r, k)) * (-1) ** k * poch(1 - bi, k) / den
        # the printed form carries a spurious x1^k on this side
        xpow = k if inst.reading == LITERAL else 0
        out.append((coeff, xpow, _with_slot1_den(S, i, bi - k)))
    return out


def _rhs_eq8(inst, S):
    r = inst.r
    bi = S.beta[0][inst.param_index - 1]
    pref, shifted = shift_spec(S, r)
    coeff = _checked_ratio(Fraction((-1) ** r) * pref, bi - 1, r, "RHS prefactor")
    # ... and omits the compensating x1^r on this side
    xpow = 0 if inst.reading == LITERAL else r
    return [(coeff, xpow, shifted)]


def _lhs_eq9(inst, S):
    i, r = inst.param_index, inst.r
    bi = S.beta[0][i - 1]
    out = []
    for k in range(r + 1):
        den = poch(bi, k)
        if den == 0:
            raise PoleInParameters(f"k-sum divisor vanishes at k={k}")
        coeff = Fraction(binom(r, k)) * (-1) ** k * poch(bi + r - 1, k) / den
        xpow = k if inst.reading == LITERAL else 0  # printed x1^k is spurious
        out.append((coeff, xpow, _with_slot1_den(S, i, bi + k)))
    return out


def _rhs_eq9(inst, S):
    i, r = inst.param_index, inst.r
    bi = S.beta[0][i - 1]
    pref, shifted = shift_spec(S, r)
    coeff = _checked_ratio(pref, bi + r, r, "RHS prefactor")
    return [(coeff, r, _with_slot1_den(shifted, i, bi + 2 * r))]


def _pair_lhs(push, divisor_base):
    def build(inst, S):
        r = inst.r
        out = []
        for k in range(r + 1):
            den = poch(divisor_base(inst, S), k)
            if den == 0:
                raise PoleInParameters(f"k-sum divisor vanishes at k={k}")
            out.append((poch(-r, k) / den, 0, push(S, [1 + k], [1])))
        return out

    return build


def _lhs_eq10(inst, S):
    return _pair_lhs(_push_joined, lambda i, s: s.a[i.param_index - 1] - i.r + 1)(inst, S)


def _rhs_eq10(inst, S):
    ai = S.a[inst.param_index - 1]
    if ai == 0:
        raise PoleInParameters("prefactor divides by a parameter equal to 0")
    coeff = (ai - inst.r) / ai
    return [(coeff, 0, _push_joined(S, [1 - ai + inst.r], [1 - ai]))]


def _lhs_eq11(inst, S):
    return _pair_lhs(_push_slot1, lambda i, s: s.b[0][i.param_index - 1] - i.r + 1)(inst, S)


def _rhs_eq11(inst, S):
    bi = S.b[0][inst.param_index - 1]
    if bi == 0:
        raise PoleInParameters("prefactor divides by a parameter equal to 0")
    coeff = (bi - inst.r) / bi
    return [(coeff, 0, _push_slot1(S, [1 - bi + inst.r], [1 - bi]))]


def _lhs_eq12(inst, S):
    return _pair_lhs(_push_joined, lambda i, s: 2 - s.a[i.param_index - 1] - i.r)(inst, S)


def _rhs_eq12(inst, S):
    ai = S.a[inst.param_index - 1]
    coeff = _checked_ratio(poch(ai, inst.r), ai - 1, inst.r, "RHS prefactor")
    return [(coeff, 0, _with_joined(S, inst.param_index, ai + inst.r))]


def _lhs_eq13(inst, S):
    return _pair_lhs(_push_slot1, lambda i, s: 2 - s.b[0][i.param_index - 1] - i.r)(inst, S)


def _rhs_eq13(inst, S):
    bi = S.b[0][inst.param_index - 1]
    coeff = _checked_ratio(poch(bi, inst.r), bi - 1, inst.r, "RHS prefactor")
    return [(coeff, 0, _with_slot1_num(S, inst.param_index, bi + inst.r))]


def _lhs_eq14(inst, S):
    return _pair_lhs(_push_joined, lambda i, s: 2 - 2 * i.r)(inst, S)


def _rhs_eq14(inst, S):
    r = inst.r
    if r == 0:
        return [(Fraction(1), 0, S)]  # inserted pair degenerates to 0/0 and cancels
    coeff = _checked_ratio(poch(r, r), r - 1, r, "RHS prefactor")
    return [(coeff, 0, _push_joined(S, [2 * r], [r]))]


def _lhs_eq15(inst, S):
    return _pair_lhs(_push_slot1, lambda i, s: 2 - 2 * i.r)(inst, S)


def _rhs_eq15(inst, S):
    r = inst.r
    if r == 0:
        return [(Fraction(1), 0, S)]
    coeff = _checked_ratio(poch(r, r), r - 1, r, "RHS prefactor")
    return [(coeff, 0, _push_slot1(S, [2 * r], [r]))]


def _half_ratio(inst):
    """Exact form of the printed constant 2: (1+r)_r / (r)_r, which is 1 at r=0."""
    if inst.reading == LITERAL:
        return Fraction(2)
    return poch(1 + inst.r, inst.r) / poch(inst.r, inst.r)


def _lhs_eq16(inst, S):
    return _pair_lhs(_push_joined, lambda i, s: 1 - 2 * i.r)(inst, S)


def _rhs_eq16(inst, S):
    r = inst.r
    return [(_half_ratio(inst), 0, _push_joined(S, [1 + 2 * r], [1 + r]))]


def _lhs_eq17(inst, S):
    return _pair_lhs(_push_slot1, lambda i, s: 1 - 2 * i.r)(inst, S)


def _rhs_eq17(inst, S):
    r = inst.r
    return [(_half_ratio(inst), 0, _push_slot1(S, [1 + 2 * r], [1 + r]))]


def _power_list(al, offset):
    """The fractional parameter family (1+offset)/al, ..., (al+offset)/al."""
    return [(Fraction(j) + offset) / al for j in range(1, al + 1)]


def _lhs_eq18(inst, S):
    i, r, al = inst.param_index, inst.r, inst.power_alpha
    ai = S.a[i - 1]
    out = []
    for k in range(r + 1):
        den = poch(1 + ai - r, k)
        if den == 0:
            raise PoleInParameters(f"k-sum divisor vanishes at k={k}")
        coeff = Fraction(binom(r, k)) * (-1) ** k * poch(-r, k) / den
        out.append((coeff, 0, _push_joined(S, _power_list(al, r), _power_list(al, r - k))))
    return out


def _rhs_eq18(inst, S):
    i, r, al = inst.param_index, inst.r, inst.power_alpha
    ai = S.a[i - 1]
    coeff = _checked_ratio(Fraction((-1) ** r) * poch(1 + ai, r), -ai, r, "RHS prefactor")
    return [(coeff, 0, _push_joined(S, _power_list(al, ai + r), _power_list(al, ai)))]


def _lhs_eq19(inst, S):
    i, r, al = inst.param_index, inst.r, inst.power_alpha
    bi = S.b[0][i - 1]
    out = []
    for k in range(r + 1):
        den = poch(1 + bi - r, k)
        if den == 0:
            raise PoleInParameters(f"k-sum divisor vanishes at k={k}")
        coeff = Fraction(binom(r, k)) * (-1) ** k * poch(-r, k) / den
        out.append((coeff, 0, _push_slot1(S, _power_list(al, r), _power_list(al, r - k))))
    return out


def _rhs_eq19(inst, S):
    i, r, al = inst.param_index, inst.r, inst.power_alpha
    bi = S.b[0][i - 1]
    coeff = _checked_ratio(Fraction((-1) ** r) * poch(1 + bi, r), -bi, r, "RHS prefactor")
    return [(coeff, 0, _push_slot1(S, _power_list(al, bi + r), _power_list(al, bi)))]


def _lhs_eq20(inst, S):
    i, r = inst.param_index, inst.r
    ai, an = S.a[i - 1], S.a[i]
    out = []
    for k in range(r + 1):
        den = poch(an - ai - r + 1, k)
        if den == 0:
            raise PoleInParameters(f"k-sum divisor vanishes at k={k}")
        coeff = Fraction((-1) ** k) * poch(an, k) / den
        if inst.reading != LITERAL:
            coeff *= binom(r, k)  # the printed form drops this factor
        out.append((coeff, 0, _with_joined(S, i + 1, an + k)))
    return out


def _rhs_eq20(inst, S):
    i, r = inst.param_index, inst.r
    ai, an = S.a[i - 1], S.a[i]
    coeff = _checked_ratio(poch(ai, r), ai - an, r, "RHS prefactor")
    return [(coeff, 0, _with_joined(S, i, ai + r))]


def _lhs_eq21(inst, S):
    i, r = inst.param_index, inst.r
    bi, bn = S.b[0][i - 1], S.b[0][i]
    out = []
    for k in range(r + 1):
        den = poch(bn - bi - r + 1, k)
        if den == 0:
            raise PoleInParameters(f"k-sum divisor vanishes at k={k}")
        coeff = Fraction((-1) ** k) * poch(bn, k)
        if inst.reading != LITERAL:
            coeff *= binom(r, k)
        out.append((coeff / den, 0, _with_slot1_num(S, i + 1, bn + k)))
    return out


def _rhs_eq21(inst, S):
    i, r = inst.param_index, inst.r
    bi, bn = S.b[0][i - 1], S.b[0][i]
    coeff = _checked_ratio(poch(bi, r), bi - bn, r, "RHS prefactor")
    return [(coeff, 0, _with_slot1_num(S, i, bi + r))]


@dataclass(frozen=True)
class _Descriptor:
    summary: str
    lhs: callable
    rhs: callable
    # structural requirement: (attribute, minimum); attribute in {p, q1, m1}
    needs: tuple = None
    # which list the 1-based parameter index i walks, or None when unused
    domain: str = None  # "p" | "q1" | "m1" | "p-1" | "q1-1"
    has_reading: bool = False


CATALOG = {
    IdentityId.EQ5: _Descriptor(
        "k-sum of shifted expansions equals a slot-row insertion of a raised joined parameter",
        _lhs_eq5, _rhs_eq5, needs=("p", 1), domain="p"),
    IdentityId.EQ6: _Descriptor(
        "k-sum of shifted expansions equals raising one slot numerator parameter",
        _lhs_eq6, _rhs_eq6, needs=("q1", 1), domain="q1", has_reading=True),
    IdentityId.EQ7: _Descriptor(
        "k-sum of shifted expansions equals lowering one slot denominator parameter",
        _lhs_eq7, _rhs_eq7, needs=("m1", 1), domain="m1"),
    IdentityId.EQ8: _Descriptor(
        "alternating k-sum over lowered denominator parameters equals the fully shifted bundle",
        _lhs_eq8, _rhs_eq8, needs=("m1", 1), domain="m1", has_reading=True),
    IdentityId.EQ9: _Descriptor(
        "alternating k-sum over raised denominator parameters equals a doubly raised shift",
        _lhs_eq9, _rhs_eq9, needs=("m1", 1), domain="m1", has_reading=True),
    IdentityId.EQ10: _Descriptor(
        "joined-pair k-sum (shared reciprocal argument) equals a reflected joined pair",
        _lhs_eq10, _rhs_eq10, needs=("p", 1), domain="p"),
    IdentityId.EQ11: _Descriptor(
        "slot-pair k-sum equals a reflected slot pair",
        _lhs_eq11, _rhs_eq11, needs=("q1", 1), domain="q1", has_reading=True),
    IdentityId.EQ12: _Descriptor(
        "joined-pair k-sum equals raising one joined parameter",
        _lhs_eq12, _rhs_eq12, needs=("p", 1), domain="p"),
    IdentityId.EQ13: _Descriptor(
        "slot-pair k-sum equals raising one slot numerator parameter",
        _lhs_eq13, _rhs_eq13, needs=("q1", 1), domain="q1", has_reading=True),
    IdentityId.EQ14: _Descriptor(
        "joined-pair k-sum equals inserting the joined pair (2r, r)",
        _lhs_eq14, _rhs_eq14),
    IdentityId.EQ15: _Descriptor(
        "slot-pair k-sum equals inserting the slot pair (2r, r)",
        _lhs_eq15, _rhs_eq15, has_reading=True),
    IdentityId.EQ16: _Descriptor(
        "joined-pair k-sum equals inserting the joined pair (1+2r, 1+r)",
        _lhs_eq16, _rhs_eq16, has_reading=True),
    IdentityId.EQ17: _Descriptor(
        "slot-pair k-sum equals inserting the slot pair (1+2r, 1+r)",
        _lhs_eq17, _rhs_eq17, has_reading=True),
    IdentityId.EQ18: _Descriptor(
        "power-argument k-sum with fractional joined families equals the raised family",
        _lhs_eq18, _rhs_eq18, needs=("p", 1), domain="p"),
    IdentityId.EQ19: _Descriptor(
        "power-argument k-sum with fractional slot families equals the raised family",
        _lhs_eq19, _rhs_eq19, needs=("q1", 1), domain="q1"),
    IdentityId.EQ20: _Descriptor(
        "rearrangement: terminating unit-argument sum trades adjacent joined parameters",
        _lhs_eq20, _rhs_eq20, needs=("p", 2), domain="p-1", has_reading=True),
    IdentityId.EQ21: _Descriptor(
        "rearrangement: terminating unit-argument sum trades adjacent slot parameters",
        _lhs_eq21, _rhs_eq21, needs=("q1", 2), domain="q1-1", has_reading=True),
}


def default_cap(id: IdentityId, power_alpha: int = None) -> int:
    if id in POWER_IDS:
        return 2 * (power_alpha or 2) + 3
    return 7


def param_domain_size(id: IdentityId, spec: KdfSpec) -> int:
    """Size of the 1-based index domain for the identity, 0 when unused."""
    d = CATALOG[id].domain
    if d is None:
        return 0
    base = {"p": spec.p, "q1": spec.q(1), "m1": spec.m(1)}
    if d.endswith("-1"):
        return max(0, base[d[:-2]] - 1)
    return base[d]


def instance_binding(inst: IdentityInstance):
    """Slot binding and ambient variable count for an instance's expansions."""
    n = inst.spec.n
    id = inst.id
    if id in _JOINED_PAIR_IDS:
        return SlotBinding.collapsed(n), 1
    if id in _SLOT_PAIR_IDS:
        if inst.reading == LITERAL:
            return SlotBinding.mixed(n), max(n, 1)
        return SlotBinding.collapsed(n), 1
    if id is IdentityId.EQ18:
        return SlotBinding.collapsed(n, mult=inst.power_alpha), 1
    if id is IdentityId.EQ19:
        return SlotBinding.mixed(n, first_mult=inst.power_alpha), n
    return SlotBinding.identity(n), n


def _structural_violations(inst: IdentityInstance):
    desc = CATALOG[inst.id]
    out = []
    if inst.r < 0 or inst.cap < 0:
        out.append(Violation("structure", "r and cap must be nonnegative"))
    if desc.needs is not None:
        attr, minimum = desc.needs
        have = {"p": inst.spec.p, "q1": inst.spec.q(1), "m1": inst.spec.m(1)}[attr]
        if have < minimum:
            out.append(Violation("structure", f"identity needs {attr} >= {minimum}, have {have}"))
    dom = param_domain_size(inst.id, inst.spec)
    if CATALOG[inst.id].domain is not None and not out:
        if not 1 <= inst.param_index <= dom:
            out.append(Violation("structure", f"parameter index {inst.param_index} outside 1..{dom}"))
    if inst.id in POWER_IDS:
        if inst.power_alpha is None or inst.power_alpha < 2:
            out.append(Violation("structure", "power exponent must be an integer >= 2"))
    elif inst.power_alpha is not None:
        out.append(Violation("structure", "power exponent only applies to the power identities"))
    return out


def _divisor_violations(inst: IdentityInstance):
    """Zero divisors in the k-sum coefficients or the RHS prefactor."""
    S, i, r = inst.spec, inst.param_index, inst.r
    id = inst.id
    checks = []  # (base, length, label)

    def joined_slot1_denoms():
        for x in S.alpha:
            checks.append((x, r, "joined denominator parameter"))
        for x in S.beta[0]:
            checks.append((x, r, "slot-1 denominator parameter"))

    if id is IdentityId.EQ5:
        joined_slot1_denoms()
        checks.append((S.a[i - 1], r, "targeted joined parameter"))
    elif id is IdentityId.EQ6:
        joined_slot1_denoms()
        checks.append((S.b[0][i - 1], r, "targeted slot parameter"))
    elif id is IdentityId.EQ7:
        joined_slot1_denoms()
        checks.append((S.beta[0][i - 1] - r, r, "lowered slot denominator parameter"))
    elif id is IdentityId.EQ8:
        joined_slot1_denoms()
        checks.append((2 - S.beta[0][i - 1] - r, r, "k-sum divisor"))
        checks.append((S.beta[0][i - 1] - 1, r, "prefactor divisor"))
    elif id is IdentityId.EQ9:
        joined_slot1_denoms()
        checks.append((S.beta[0][i - 1], r, "k-sum divisor"))
        checks.append((S.beta[0][i - 1] + r, r, "prefactor divisor"))
    elif id is IdentityId.EQ10:
        ai = S.a[i - 1]
        checks.append((ai - r + 1, r, "k-sum divisor"))
        checks.append((-ai, max(r, 1), "prefactor divisor"))
    elif id is IdentityId.EQ11:
        bi = S.b[0][i - 1]
        checks.append((bi - r + 1, r, "k-sum divisor"))
        checks.append((-bi, max(r, 1), "prefactor divisor"))
    elif id is IdentityId.EQ12:
        checks.append((2 - S.a[i - 1] - r, r, "k-sum divisor"))
        checks.append((S.a[i - 1] - 1, r, "prefactor divisor"))
    elif id is IdentityId.EQ13:
        checks.append((2 - S.b[0][i - 1] - r, r, "k-sum divisor"))
        checks.append((S.b[0][i - 1] - 1, r, "prefactor divisor"))
    elif id in (IdentityId.EQ14, IdentityId.EQ15):
        checks.append((Fraction(r - 1), r, "prefactor divisor (undefined at r = 1)"))
    elif id is IdentityId.EQ18:
        ai = S.a[i - 1]
        checks.append((1 + ai - r, r, "k-sum divisor"))
        checks.append((-ai, r, "prefactor divisor"))
    elif id is IdentityId.EQ19:
        bi = S.b[0][i - 1]
        checks.append((1 + bi - r, r, "k-sum divisor"))
        checks.append((-bi, r, "prefactor divisor"))
    elif id is IdentityId.EQ20:
        ai, an = S.a[i - 1], S.a[i]
        checks.append((an - ai - r + 1, r, "k-sum divisor"))
        checks.append((ai - an, r, "prefactor divisor"))
    elif id is IdentityId.EQ21:
        bi, bn = S.b[0][i - 1], S.b[0][i]
        checks.append((bn - bi - r + 1, r, "k-sum divisor"))
        checks.append((bi - bn, r, "prefactor divisor"))

    out = []
    for base, length, label in checks:
        if poch_is_zero(Fraction(base), length):
            out.append(Violation(
                "pole", f"{label} ({format_rational(Fraction(base))})_{length} = 0"))
    return out


def _raw_terms(inst: IdentityInstance, side: str):
    desc = CATALOG[inst.id]
    build = desc.lhs if side == "lhs" else desc.rhs
    return build(inst, inst.spec)


def preconditions(inst: IdentityInstance):
    """All violated applicability conditions, structural ones first."""
    out = _structural_violations(inst)
    if out:
        return out
    out = _divisor_violations(inst)
    if out:
        return out
    binding, _ = instance_binding(inst)
    try:
        terms = _raw_terms(inst, "lhs") + _raw_terms(inst, "rhs")
    except PoleInParameters as exc:
        return [Violation("pole", str(exc))]
    seen = set()
    for _, _, spec in terms:
        if spec in seen:
            continue
        seen.add(spec)
        msg = pole_scan(spec, binding, inst.cap)
        if msg is not None:
            out.append(Violation("pole", msg))
    return out


def _build_side(inst: IdentityInstance, side: str) -> TruncatedSeries:
    binding, var_count = instance_binding(inst)
    total = TruncatedSeries.zero(var_count, inst.cap)
    for coeff, xpow, spec in _raw_terms(inst, side):
        series = expand(spec, binding, var_count, inst.cap).scale(coeff)
        if xpow:
            series = series.shift_monomial((xpow,) + (0,) * (var_count - 1))
        total = total + series
    return total


def _require_ready(inst: IdentityInstance):
    violations = preconditions(inst)
    for v in violations:
        if v.kind == "structure":
            raise NotApplicable(v.message)
    if violations:
        raise PoleInParameters(violations[0].message)


def build_lhs(inst: IdentityInstance) -> TruncatedSeries:
    _require_ready(inst)
    return _build_side(inst, "lhs")


def build_rhs(inst: IdentityInstance) -> TruncatedSeries:
    _require_ready(inst)
    return _build_side(inst, "rhs")


def compare_series(lhs: TruncatedSeries, rhs: TruncatedSeries, cap: int) -> VerificationReport:
    """Exact comparison; on failure reports the graded-lex-first mismatch."""
    keys = set(lhs.terms) | set(rhs.terms)
    compared = len(keys)
    diff = lhs - rhs
    if not diff.terms:
        return VerificationReport("pass", cap, compared)
    worst = min(diff.terms, key=lambda m: (sum(m), m))
    return VerificationReport(
        "fail", cap, compared,
        Mismatch(worst, lhs.coeff(worst), rhs.coeff(worst)))


def verify(inst: IdentityInstance) -> VerificationReport:
    """Exact side-by-side check; failures are statuses, never exceptions."""
    violations = preconditions(inst)
    structural = [v for v in violations if v.kind == "structure"]
    if structural:
        return VerificationReport("not-applicable", inst.cap, 0, detail=structural[0].message)
    if violations:
        return VerificationReport("pole", inst.cap, 0, detail=violations[0].message)
    try:
        lhs = _build_side(inst, "lhs")
        rhs = _build_side(inst, "rhs")
    except PoleInParameters as exc:
        return VerificationReport("pole", inst.cap, 0, detail=str(exc))
    return compare_series(lhs, rhs, inst.cap)


# -- seeded random instances -------------------------------------------------

RETRY_BUDGET = 1000


def derive_seed(seed: int, *salts) -> int:
    """Deterministic child seed from (seed, salts); independent of hash()."""
    x = seed & 0xFFFFFFFFFFFFFFFF
    for salt in salts:
        data = str(salt).encode()
        for byte in data:
            x = (x ^ byte) * 0x100000001B3 & 0xFFFFFFFFFFFFFFFF
        x = (x * 0x9E3779B97F4A7C15 + 1) & 0xFFFFFFFFFFFFFFFF
    return x


def _rand_rational(rng) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 3))


def _shape_for(id: IdentityId, rng) -> tuple:
    """Random small shape adjusted to the identity's structural needs."""
    n = rng.randint(1, 3)
    p = rng.randint(0, 2)
    l = rng.randint(0, 2)
    q = [rng.randint(0, 2) for _ in range(n)]
    m = [rng.randint(0, 2) for _ in range(n)]
    desc = CATALOG[id]
    if desc.needs is not None:
        attr, minimum = desc.needs
        if attr == "p":
            p = max(p, minimum)
        elif attr == "q1":
            q[0] = max(q[0], minimum)
        elif attr == "m1":
            m[0] = max(m[0], minimum)
    return n, p, l, tuple(q), tuple(m)


def random_instance(seed: int, id: IdentityId, n: int, shape, r_max: int = 4,
                    cap: int = None, reading: str = CORRECTED) -> IdentityInstance:
    """Deterministic pole-free instance via rejection resampling.

    shape is (p, l, q-list, m-list); raises NotApplicable when the shape
    cannot carry the identity, ExhaustedRetries after the retry budget.
    """
    p, l, q, m = shape
    desc = CATALOG[id]
    if desc.needs is not None:
        attr, minimum = desc.needs
        have = {"p": p, "q1": q[0] if q else 0, "m1": m[0] if m else 0}[attr]
        if have < minimum:
            raise NotApplicable(f"shape needs {attr} >= {minimum} for {id.value}")
    rng = random.Random(seed)
    for _ in range(RETRY_BUDGET):
        spec = KdfSpec.make(
            n,
            a=[_rand_rational(rng) for _ in range(p)],
            alpha=[_rand_rational(rng) for _ in range(l)],
            b=[[_rand_rational(rng) for _ in range(q[t])] for t in range(n)],
            beta=[[_rand_rational(rng) for _ in range(m[t])] for t in range(n)],
        )
        r = rng.randint(0, r_max)
        power_alpha = rng.choice([2, 3]) if id in POWER_IDS else None
        dom = param_domain_size(id, spec)
        i = rng.randint(1, dom) if dom else 1
        inst = IdentityInstance(
            id=id, spec=spec, param_index=i, r=r, power_alpha=power_alpha,
            reading=reading, cap=cap if cap is not None else default_cap(id, power_alpha))
        if not preconditions(inst):
            return inst
    raise ExhaustedRetries(f"no pole-free instance for {id.value} after {RETRY_BUDGET} tries")
