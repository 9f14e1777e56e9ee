import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kdfseries.errors import ParseError, PoleInParameters
from kdfseries.exact_arith import (
    binom,
    format_rational,
    list_poch,
    parse_rational,
    poch,
    poch_is_zero,
    vandermonde_2f1,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def test_poch_known_values():
    assert poch(Fraction(3), 0) == 1
    assert poch(Fraction(3), 4) == 3 * 4 * 5 * 6
    assert poch(Fraction(1, 2), 2) == Fraction(3, 4)
    assert poch(Fraction(-2), 3) == 0
    assert poch(Fraction(-2), 2) == 2


def test_poch_rejects_negative_length():
    with pytest.raises(ValueError):
        poch(Fraction(1), -1)


@given(rationals, st.integers(min_value=0, max_value=12))
def test_poch_is_zero_matches_product(a, k):
    assert poch_is_zero(a, k) == (poch(a, k) == 0)


@given(rationals, st.integers(min_value=0, max_value=8), st.integers(min_value=0, max_value=8))
def test_poch_splits_multiplicatively(a, j, k):
    # (a)_{j+k} = (a)_j (a+j)_k
    assert poch(a, j + k) == poch(a, j) * poch(a + j, k)


def test_list_poch_is_product():
    params = (Fraction(1, 2), Fraction(3), Fraction(-1, 3))
    assert list_poch(params, 3) == poch(params[0], 3) * poch(params[1], 3) * poch(params[2], 3)
    assert list_poch((), 5) == 1


def test_binom_edges():
    assert binom(5, 2) == 10
    assert binom(4, 0) == 1
    assert binom(3, 7) == 0
    with pytest.raises(ValueError):
        binom(-1, 0)


def test_parse_format_roundtrip():
    for text in ("3/4", "-7/2", "5", "0", "-9/3"):
        x = parse_rational(text)
        assert parse_rational(format_rational(x)) == x
    assert format_rational(Fraction(6, 4)) == "3/2"


def test_parse_rejects_garbage():
    for bad in ("", "one", "1/0", "2//3"):
        with pytest.raises(ParseError):
            parse_rational(bad)


def _gauss_sum(r, a, b):
    # sum_{k=0}^{r} (-r)_k (a)_k / ((b)_k k!)
    total = Fraction(0)
    kfac = 1
    for k in range(r + 1):
        kfac = kfac * k if k else 1
        total += poch(Fraction(-r), k) * poch(a, k) / (poch(b, k) * kfac)
    return total


def test_vandermonde_small_cases():
    assert vandermonde_2f1(0, Fraction(1, 3), Fraction(5)) == 1
    assert vandermonde_2f1(2, Fraction(1), Fraction(3)) == _gauss_sum(2, Fraction(1), Fraction(3))


def test_vandermonde_matches_direct_sum_on_random_parameters():
    rng = random.Random(20240229)
    checked = 0
    while checked < 100:
        a = Fraction(rng.randint(-9, 9), rng.randint(1, 3))
        b = Fraction(rng.randint(-9, 9), rng.randint(1, 3))
        for r in range(11):
            if poch_is_zero(b, r):
                with pytest.raises(PoleInParameters):
                    vandermonde_2f1(r, a, b)
            else:
                assert vandermonde_2f1(r, a, b) == _gauss_sum(r, a, b)
        checked += 1
