"""Floating-point evaluation of parameter bundles and numeric spot checks.

The exact verifier is the authority; this layer exists as an independent
sanity check and for quick magnitude estimates.  Summation proceeds by
total-degree layers (accumulating each layer before adding, a mild guard
against cancellation) and the tail estimate is the magnitude of the last
layer, a documented heuristic rather than a bound.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PoleInParameters, ShapeMismatch
from .kdf_core import DIVERGENT, KdfSpec, UNIT_DOMAIN, convergence_class, lambda_coeff
from .identities import IdentityInstance, instance_binding, preconditions, _raw_terms


@dataclass(frozen=True)
class EvalResult:
    value: float
    terms_used: int
    tail_estimate: float
    domain_ok: bool

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "termsUsed": self.terms_used,
            "tailEstimate": self.tail_estimate,
            "domainOk": self.domain_ok,
        }


def _index_layers(n, cap):
    """Index vectors grouped by total degree 0..cap."""
    layers = [[] for _ in range(cap + 1)]

    def rec(t, budget, prefix):
        if t == n:
            layers[cap - budget].append(tuple(prefix))
            return
        for st in range(budget + 1):
            rec(t + 1, budget - st, prefix + [st])

    rec(0, cap, [])
    return layers


def point_in_domain(spec: KdfSpec, point) -> bool:
    """Convergence-domain membership test at a concrete point.

    Divergent slots only admit argument 0.  When every slot sits on the
    delta = 0 boundary the printed joint condition applies; for mixed
    shapes each boundary slot is held to |x| < 1 on its own.
    """
    report = convergence_class(spec)
    if all(s.delta == 0 for s in report.slots):
        if spec.p > spec.l:
            e = spec.p - spec.l
            return sum(abs(x) ** (1.0 / e) for x in point) < 1.0
        return max((abs(x) for x in point), default=0.0) < 1.0
    for s, x in zip(report.slots, point):
        if s.kind == DIVERGENT and x != 0:
            return False
        if s.kind == UNIT_DOMAIN and abs(x) >= 1.0:
            return False
    return True


def evaluate(spec: KdfSpec, point, cap: int) -> EvalResult:
    """Float partial sum of the bundle's series over total degree <= cap."""
    point = [float(x) for x in point]
    if len(point) != spec.n:
        raise ShapeMismatch("point length must equal slot count")
    fact = [1.0]
    for j in range(1, cap + 1):
        fact.append(fact[-1] * j)
    total = 0.0
    terms_used = 0
    last_layer = 0.0
    for layer in _index_layers(spec.n, cap):
        layer_sum = 0.0
        for s in layer:
            coeff = float(lambda_coeff(spec, s))  # raises on parameter poles
            mono = 1.0
            for x, st in zip(point, s):
                mono *= x ** st / fact[st]
            layer_sum += coeff * mono
            terms_used += 1
        total += layer_sum
        last_layer = layer_sum
    return EvalResult(total, terms_used, abs(last_layer), point_in_domain(spec, point))


@dataclass(frozen=True)
class NumericReport:
    status: str  # pass | fail | pole | not-applicable
    lhs: float = 0.0
    rhs: float = 0.0
    rel_diff: float = 0.0
    detail: str = ""

    def to_json(self) -> dict:
        doc = {"status": self.status, "lhs": self.lhs, "rhs": self.rhs,
               "relDiff": self.rel_diff}
        if self.detail:
            doc["detail"] = self.detail
        return doc


NUMERIC_CAP = 30


def _safe_cap(inst, requested):
    """Largest cap <= requested keeping every term's expansion pole-free.

    The exact verifier only guarantees freedom from poles up to the
    instance's own cap; deeper numeric sums must not walk into one.
    """
    from .kdf_core import SlotBinding, pole_scan

    specs = {spec for _, _, spec in _raw_terms(inst, "lhs") + _raw_terms(inst, "rhs")}
    # evaluate enumerates raw slot indices, so scan with the plain binding
    probe = SlotBinding.identity(inst.spec.n)
    cap = max(requested, 1)
    while cap > 1 and any(pole_scan(s, probe, cap) for s in specs):
        cap -= 1
    return cap


def _side_value(inst, side, point, cap):
    binding, var_count = instance_binding(inst)
    total = 0.0
    for coeff, xpow, spec in _raw_terms(inst, side):
        slot_point = [point[var] ** mult for var, mult in binding.slots]
        value = evaluate(spec, slot_point, cap).value
        total += float(coeff) * (point[0] ** xpow) * value
    return total


def numeric_verify(inst: IdentityInstance, point, rel_tol: float,
                   cap: int = NUMERIC_CAP) -> NumericReport:
    """Approximate both sides at a point and compare relatively.

    The point has one entry per formal variable of the instance's binding.
    """
    violations = preconditions(inst)
    structural = [v for v in violations if v.kind == "structure"]
    if structural:
        return NumericReport("not-applicable", detail=structural[0].message)
    if violations:
        return NumericReport("pole", detail=violations[0].message)
    point = [float(x) for x in point]
    try:
        cap = _safe_cap(inst, cap)
        lhs = _side_value(inst, "lhs", point, cap)
        rhs = _side_value(inst, "rhs", point, cap)
    except PoleInParameters as exc:
        return NumericReport("pole", detail=str(exc))
    scale = max(abs(lhs), abs(rhs), 1.0)
    rel = abs(lhs - rhs) / scale
    return NumericReport("pass" if rel <= rel_tol else "fail", lhs, rhs, rel)
