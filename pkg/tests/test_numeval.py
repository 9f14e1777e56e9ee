import math
import random
from dataclasses import replace
from fractions import Fraction

import pytest

from kdfseries.errors import PoleInParameters, ShapeMismatch
from kdfseries.kdf_core import KdfSpec, SlotBinding, expand, pole_scan
from kdfseries.identities import IdentityId, LITERAL, verify
from kdfseries.numeval import evaluate, numeric_verify, point_in_domain
from tests.test_identities import _instance


def test_exponential_closed_form():
    spec = KdfSpec.make(2)
    result = evaluate(spec, (0.1, 0.2), 30)
    assert abs(result.value - math.exp(0.3)) <= 1e-12 * math.exp(0.3)
    assert result.domain_ok


def test_gauss_log_closed_form():
    spec = KdfSpec.make(1, a=["1", "1"], alpha=["2"])
    result = evaluate(spec, (0.5,), 60)
    assert abs(result.value - 2 * math.log(2)) <= 1e-10


def test_zero_point_is_one():
    spec = KdfSpec.make(1, a=["3/2"], alpha=["-7/2"])
    result = evaluate(spec, (0.0,), 0)
    assert result.value == 1.0 and result.terms_used == 1
    assert result.tail_estimate == 0.0 or result.terms_used == 1


def test_point_length_checked():
    with pytest.raises(ShapeMismatch):
        evaluate(KdfSpec.make(2), (0.1,), 5)


def test_pole_raises():
    with pytest.raises(PoleInParameters):
        evaluate(KdfSpec.make(1, alpha=["-1"]), (0.1,), 5)


def test_domain_classification_at_points():
    gauss = KdfSpec.make(1, a=["1", "2"], alpha=["3"])
    assert point_in_domain(gauss, (0.5,))
    assert not point_in_domain(gauss, (1.5,))
    divergent = KdfSpec.make(1, a=["1", "2", "3"], alpha=["4"])
    assert not point_in_domain(divergent, (0.1,))
    assert point_in_domain(divergent, (0.0,))
    two_boundary = KdfSpec.make(2, a=["1", "2"], alpha=["3"], b=[[], []], beta=[[], []])
    # p - l = 1: the joint condition is |x1| + |x2| < 1
    assert point_in_domain(two_boundary, (0.4, 0.4))
    assert not point_in_domain(two_boundary, (0.6, 0.6))


def test_exact_to_float_consistency():
    rng = random.Random(41)
    checked = 0
    while checked < 10:
        n = rng.randint(1, 2)
        rand = lambda: Fraction(rng.randint(-9, 9), rng.randint(1, 3))
        spec = KdfSpec.make(n, a=[rand()], alpha=[rand()],
                            b=[[rand()] for _ in range(n)], beta=[[] for _ in range(n)])
        binding = SlotBinding.identity(n)
        if pole_scan(spec, binding, 12) is not None:
            continue
        point = [Fraction(rng.randint(-2, 2), 10) for _ in range(n)]
        series = expand(spec, binding, n, 12)
        exact = sum(float(c) * math.prod(float(x) ** e for x, e in zip(point, m))
                    for m, c in series.terms.items())
        approx = evaluate(spec, [float(x) for x in point], 12).value
        scale = max(abs(exact), 1.0)
        assert abs(exact - approx) <= 1e-12 * scale
        checked += 1


def test_tail_estimate_shrinks_with_cap():
    spec = KdfSpec.make(1, a=["1/2"], alpha=["7/4"])
    tails = [evaluate(spec, (0.1,), cap).tail_estimate for cap in (5, 10, 15)]
    assert tails[0] > tails[1] > tails[2]


def test_numeric_agrees_with_exact_verdicts():
    rng = random.Random(17)
    sampled = 0
    while sampled < 10:
        id = rng.choice(list(IdentityId))
        inst = _instance(id, rng.randint(0, 500))
        exact = verify(inst)
        if exact.status != "pass":
            continue
        from kdfseries.identities import instance_binding
        _, var_count = instance_binding(inst)
        point = [0.05 / (j + 1) for j in range(var_count)]
        numeric = numeric_verify(inst, point, 1e-8)
        assert numeric.status == "pass", (id, numeric)
        sampled += 1


def test_numeric_detects_literal_failure():
    inst = _instance(IdentityId.EQ6, 0, reading=LITERAL)
    inst = replace(inst, r=max(inst.r, 1))
    exact = verify(inst)
    if exact.status == "fail":
        numeric = numeric_verify(inst, [0.03] * inst.spec.n, 1e-8)
        assert numeric.status == "fail"


def test_numeric_reports_pole():
    spec = KdfSpec.make(1, a=["1/2"], alpha=["-2"])
    from kdfseries.identities import IdentityInstance
    inst = IdentityInstance(IdentityId.EQ5, spec, 1, 1, cap=5)
    assert numeric_verify(inst, (0.1,), 1e-8).status == "pole"
