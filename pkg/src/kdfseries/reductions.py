"""Classical multivariable hypergeometric families as parameter bundles.

Constructors map the Lauricella families F_B and F_D and their confluent
relatives onto KdfSpec, and the four concluding summation formulas are
checked here as thin specializations of the general catalog entries: the
sides are built from the family constructors exactly as printed, then
cross-checked bit-for-bit against the general catalog builders.
"""

from __future__ import annotations

import random
from enum import Enum
from fractions import Fraction

from .errors import ExhaustedRetries, ParseError, PoleInParameters, ShapeMismatch
from .exact_arith import binom, poch
from .kdf_core import KdfSpec, SlotBinding, expand
from .identities import (
    CORRECTED,
    LITERAL,
    IdentityId,
    IdentityInstance,
    VerificationReport,
    _build_side,
    compare_series,
    preconditions,
)
from .mseries import TruncatedSeries


class FamilyKind(str, Enum):
    F_B = "F_B"
    F_D = "F_D"
    XI1 = "Xi1"
    PHI_D = "Phi_D"
    PHI2 = "Phi2"
    PSI2 = "Psi2"
    PHI3 = "Phi3"


def _as_list(xs):
    if xs is None:
        return []
    return [Fraction(x) for x in (xs if isinstance(xs, (list, tuple)) else [xs])]


def _need(cond, msg):
    if not cond:
        raise ShapeMismatch(msg)


def family_spec(kind: FamilyKind, n: int, a=None, b=None, c=None) -> KdfSpec:
    """Parameter bundle whose expansion is the named family's series.

    a and b are lists (a may be a single value where the family takes one
    joined numerator); c is a single value except for Psi2, which takes
    one denominator per slot.  List lengths are validated per family.
    """
    kind = FamilyKind(kind)
    a = _as_list(a)
    b = _as_list(b)
    cs = _as_list(c)
    _need(n >= 1, "slot count must be >= 1")

    if kind is FamilyKind.F_B:
        _need(len(a) == n and len(b) == n and len(cs) == 1,
              "F_B takes n a's, n b's and one c")
        return KdfSpec.make(n, alpha=cs, b=[[a[t], b[t]] for t in range(n)])
    if kind is FamilyKind.F_D:
        _need(len(a) == 1 and len(b) == n and len(cs) == 1,
              "F_D takes one a, n b's and one c")
        return KdfSpec.make(n, a=a, alpha=cs, b=[[b[t]] for t in range(n)])
    if kind is FamilyKind.XI1:
        _need(n >= 2 and len(a) == n and len(b) == n - 1 and len(cs) == 1,
              "Xi1 takes n >= 2 slots, n a's, n-1 b's and one c")
        rows = [[a[t], b[t]] for t in range(n - 1)] + [[a[n - 1]]]
        return KdfSpec.make(n, alpha=cs, b=rows)
    if kind is FamilyKind.PHI_D:
        _need(len(a) == 1 and len(b) == n - 1 and len(cs) == 1,
              "Phi_D takes one a, n-1 b's and one c")
        rows = [[b[t]] for t in range(n - 1)] + [[]]
        return KdfSpec.make(n, a=a, alpha=cs, b=rows)
    if kind is FamilyKind.PHI2:
        _need(not a and len(b) == n and len(cs) == 1,
              "Phi2 takes n b's and one c")
        return KdfSpec.make(n, alpha=cs, b=[[b[t]] for t in range(n)])
    if kind is FamilyKind.PSI2:
        _need(len(a) == 1 and not b and len(cs) == n,
              "Psi2 takes one a and n slot denominators")
        return KdfSpec.make(n, a=a, beta=[[cs[t]] for t in range(n)])
    if kind is FamilyKind.PHI3:
        _need(not a and len(b) == n - 1 and len(cs) == 1,
              "Phi3 takes n-1 b's and one c")
        rows = [[b[t]] for t in range(n - 1)] + [[]]
        return KdfSpec.make(n, alpha=cs, b=rows)
    raise ShapeMismatch(f"unknown family {kind}")


def family_from_json(doc: dict) -> KdfSpec:
    """Build from {kind, n, a, b, c} with rationals in "p/q" text form."""
    try:
        return family_spec(FamilyKind(doc["kind"]), int(doc["n"]),
                           doc.get("a"), doc.get("b"), doc.get("c"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad family document: {exc}") from exc


# -- concluding formulas -----------------------------------------------------

CONCLUSION_IDS = ("EQ22", "EQ23", "EQ24", "EQ25")

_CONCLUSION_BASE = {
    "EQ22": (FamilyKind.F_B, IdentityId.EQ6),
    "EQ23": (FamilyKind.XI1, IdentityId.EQ6),
    "EQ24": (FamilyKind.F_D, IdentityId.EQ16),
    "EQ25": (FamilyKind.PHI_D, IdentityId.EQ16),
}


def conclusion_instance(which: str, params: dict, r: int, cap: int,
                        reading: str = CORRECTED) -> IdentityInstance:
    """The general-catalog instance that a concluding formula specializes.

    params carries n plus the family lists: a, b, c for EQ22/EQ23 and
    just b for EQ24/EQ25 (their joined pair is fixed by the identity).
    """
    if which not in _CONCLUSION_BASE:
        raise ParseError(f"unknown conclusion id {which!r}")
    kind, id = _CONCLUSION_BASE[which]
    n = int(params["n"])
    b = _as_list(params.get("b"))
    if which in ("EQ22", "EQ23"):
        spec = family_spec(kind, n, params.get("a"), b, params.get("c"))
        # raising the first slot-row parameter by r is exactly the printed RHS
        return IdentityInstance(id, spec, param_index=1, r=r, reading=CORRECTED, cap=cap)
    if which == "EQ24":
        _need(len(b) == n, "EQ24 takes n b's")
        rows = [[x] for x in b]
    else:
        _need(len(b) == n - 1, "EQ25 takes n-1 b's")
        rows = [[x] for x in b] + [[]]
    base = KdfSpec.make(n, b=rows)
    return IdentityInstance(id, base, param_index=1, r=r, reading=CORRECTED, cap=cap)


def _sum_terms(terms, binding, var_count, cap):
    total = TruncatedSeries.zero(var_count, cap)
    for coeff, xpow, spec in terms:
        series = expand(spec, binding, var_count, cap).scale(coeff)
        if xpow:
            series = series.shift_monomial((xpow,) + (0,) * (var_count - 1))
        total = total + series
    return total


def _eq22_23_sides(which, params, r, cap, reading):
    kind, _ = _CONCLUSION_BASE[which]
    n = int(params["n"])
    a = _as_list(params["a"])
    b = _as_list(params["b"])
    c = Fraction(params["c"])
    binding = SlotBinding.identity(n)
    lhs_terms = []
    for k in range(r + 1):
        den = poch(c, k)
        if den == 0:
            raise PoleInParameters(f"(c)_{k} = 0 in the k-sum coefficient")
        coeff = Fraction(binom(r, k)) * poch(b[0], k) / den
        spec_k = family_spec(kind, n, [a[0] + k] + a[1:], [b[0] + k] + b[1:], c + k)
        lhs_terms.append((coeff, k, spec_k))
    lhs = _sum_terms(lhs_terms, binding, n, cap)
    rhs_spec = family_spec(kind, n, [a[0] + r] + a[1:], b, c)
    # the printed right side repeats the first argument in every slot;
    # the corrected reading restores the distinct arguments
    rhs_binding = SlotBinding.collapsed(n) if reading == LITERAL else binding
    rhs = _sum_terms([(Fraction(1), 0, rhs_spec)], rhs_binding, n, cap)
    return lhs, rhs


def _eq24_25_sides(which, params, r, cap, reading):
    kind, _ = _CONCLUSION_BASE[which]
    n = int(params["n"])
    b = _as_list(params["b"])
    binding = SlotBinding.collapsed(n)
    lhs_terms = []
    for k in range(r + 1):
        # the printed upper parameter is constant 1+r; corrected is 1+k
        top = (1 + r) if reading == LITERAL else (1 + k)
        coeff = poch(-r, k) / poch(1 - 2 * r, k)
        lhs_terms.append((coeff, 0, family_spec(kind, n, [top], b, 1)))
    lhs = _sum_terms(lhs_terms, binding, 1, cap)
    pref = Fraction(2) if reading == LITERAL else poch(1 + r, r) / poch(r, r)
    rhs_spec = family_spec(kind, n, [1 + 2 * r], b, 1 + r)
    rhs = _sum_terms([(pref, 0, rhs_spec)], binding, 1, cap)
    return lhs, rhs


def check_conclusion(which: str, params: dict, r: int, cap: int,
                     reading: str = CORRECTED) -> VerificationReport:
    """Verify one concluding formula from its family-level construction.

    Builds both sides exactly as printed (under the chosen reading) and,
    for the corrected reading, also demands that each side is bit-identical
    to the matching side of the general catalog instance.
    """
    general = conclusion_instance(which, params, r, cap)
    violations = preconditions(general)
    structural = [v for v in violations if v.kind == "structure"]
    if structural:
        return VerificationReport("not-applicable", cap, 0, detail=structural[0].message)
    if violations:
        return VerificationReport("pole", cap, 0, detail=violations[0].message)
    build = _eq22_23_sides if which in ("EQ22", "EQ23") else _eq24_25_sides
    try:
        lhs, rhs = build(which, params, r, cap, reading)
    except PoleInParameters as exc:
        return VerificationReport("pole", cap, 0, detail=str(exc))
    if reading == CORRECTED:
        if lhs != _build_side(general, "lhs") or rhs != _build_side(general, "rhs"):
            return VerificationReport(
                "fail", cap, len(set(lhs.terms) | set(rhs.terms)),
                detail="family-level sides disagree with the general catalog builders")
    return compare_series(lhs, rhs, cap)


def random_conclusion(seed: int, which: str, r_max: int = 3, cap: int = 6):
    """Deterministic pole-free (params, r) for a concluding formula."""
    rng = random.Random(seed)
    rand = lambda: Fraction(rng.randint(-9, 9), rng.randint(1, 3))
    for _ in range(1000):
        if which in ("EQ22", "EQ23"):
            n = rng.randint(2, 3) if which == "EQ23" else rng.randint(1, 3)
            nb = n if which == "EQ22" else n - 1
            params = {"n": n, "a": [rand() for _ in range(n)],
                      "b": [rand() for _ in range(nb)], "c": rand()}
        elif which in ("EQ24", "EQ25"):
            n = rng.randint(2, 3) if which == "EQ25" else rng.randint(1, 3)
            nb = n if which == "EQ24" else n - 1
            params = {"n": n, "b": [rand() for _ in range(nb)]}
        else:
            raise ParseError(f"unknown conclusion id {which!r}")
        r = rng.randint(0, r_max)
        if check_conclusion(which, params, r, cap).status == "pass":
            return params, r
    raise ExhaustedRetries(f"no pole-free parameters for {which} after 1000 tries")
