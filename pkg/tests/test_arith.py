from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from pcf.arith import (DigitMode, DigitWindow, balanced_digits, balanced_residue, from_digits, p_free_part,
                       padic_abs, require_odd_prime, valuation)

primes = st.sampled_from([3, 5, 7, 11, 13])
nonzero_fractions = st.fractions(max_denominator=10 ** 6).filter(lambda q: q != 0)


@pytest.mark.parametrize("q, p, expected", [
    (Fraction(1), 5, 0),
    (Fraction(7, 5), 5, -1),
    (Fraction(18), 3, 2),
    ])
def test_valuation(q, p, expected):
    assert valuation(q, p) == expected


def test_valuation_of_zero():
    with pytest.raises(ValueError, match="valuation of zero undefined"):
        valuation(Fraction(0), 5)


@pytest.mark.parametrize("q, p, count, start, digits", [
    (Fraction(3), 5, 2, 0, (-2, 1)),
    (Fraction(7, 5), 5, 3, -1, (2, 1, 0)),
    (Fraction(-1), 7, 1, 0, (-1,)),
    (Fraction(1, 3), 5, 4, 0, (2, -2, 2, -2)),
    ])
def test_balanced_digits(q, p, count, start, digits):
    w = balanced_digits(q, p, count)
    assert w.start == start
    assert w.digits == digits


def test_balanced_digits_of_zero():
    with pytest.raises(ValueError, match="zero has no leading digit"):
        balanced_digits(Fraction(0), 5, 3)


def test_standard_digits():
    w = balanced_digits(Fraction(3), 5, 2, DigitMode.STANDARD)
    assert w.digits == (3, 0)
    assert balanced_digits(Fraction(-1), 5, 3, DigitMode.STANDARD).digits == (4, 4, 4)


@pytest.mark.parametrize("window, expected", [
    (DigitWindow(5, -1, (2, 1)), Fraction(7, 5)),
    (DigitWindow(5, 0, (-2, 1)), Fraction(3)),
    (DigitWindow(5, 0, ()), Fraction(0)),
    ])
def test_from_digits(window, expected):
    assert from_digits(window) == expected


def test_window_rejects_out_of_range_digit():
    with pytest.raises(ValueError):
        DigitWindow(5, 0, (3,))
    with pytest.raises(ValueError):
        DigitWindow(5, 0, (0, 1))


def test_window_digit_lookup():
    w = balanced_digits(Fraction(7, 25), 5, 4)
    assert w.start == -2
    assert w.digit_at(-2) == w.digits[0]
    assert w.digit_at(-3) == 0
    assert w.digit_at(5) == 0


def test_residue_and_parts():
    assert balanced_residue(Fraction(1, 3), 5) == 2
    assert balanced_residue(Fraction(4), 5) == -1
    assert p_free_part(Fraction(50, 3), 5) == (2, 3)
    assert p_free_part(Fraction(-3, 25), 5) == (-3, 1)
    assert padic_abs(Fraction(7, 5), 5) == 5
    assert padic_abs(Fraction(0), 5) == 0


@pytest.mark.parametrize("p", [2, 4, 9, 1, -3])
def test_require_odd_prime(p):
    with pytest.raises(ValueError):
        require_odd_prime(p)


def test_require_minimum_prime():
    assert require_odd_prime(5, minimum=5) == 5
    with pytest.raises(ValueError, match=">= 5"):
        require_odd_prime(3, minimum=5)


@given(nonzero_fractions, nonzero_fractions, primes)
def test_valuation_is_multiplicative(x, y, p):
    assert valuation(x * y, p) == valuation(x, p) + valuation(y, p)


@given(nonzero_fractions, nonzero_fractions, primes)
def test_valuation_is_ultrametric(x, y, p):
    assume(x + y != 0)
    vx, vy = valuation(x, p), valuation(y, p)
    v = valuation(x + y, p)
    assert v >= min(vx, vy)
    if vx != vy:
        assert v == min(vx, vy)


@given(nonzero_fractions, primes, st.integers(min_value=1, max_value=20))
def test_digit_round_trip(q, p, k):
    w = balanced_digits(q, p, k)
    h = (p - 1) // 2
    assert w.digits[0] != 0
    assert all(-h <= d <= h for d in w.digits)
    rest = q - from_digits(w)
    assert rest == 0 or valuation(rest, p) >= valuation(q, p) + k
