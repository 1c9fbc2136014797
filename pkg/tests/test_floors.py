from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pcf.arith import valuation
from pcf.floors import constant_digit, real_sign, s_floor, t_floor, u_sign
from pcf.quadratic import QuadIrr

nonzero = st.fractions(max_denominator=10 ** 5).filter(lambda q: q != 0)
primes = st.sampled_from([3, 5, 7, 11])


@pytest.mark.parametrize("alpha, expected", [
    (Fraction(1, 3), Fraction(2)),
    (Fraction(5), Fraction(0)),
    (Fraction(7, 5), Fraction(7, 5)),
    ])
def test_s_floor(alpha, expected):
    assert s_floor(alpha, 5) == expected


@pytest.mark.parametrize("alpha, expected", [
    (Fraction(7, 5), Fraction(2, 5)),
    (Fraction(3), Fraction(0)),
    (Fraction(-3, 5), Fraction(2, 5)),
    ])
def test_t_floor(alpha, expected):
    assert t_floor(alpha, 5) == expected


@pytest.mark.parametrize("alpha, expected", [
    (Fraction(3), 1),
    (Fraction(2), 1),
    (Fraction(-1), 1),
    (Fraction(1), -1),
    (Fraction(-2), -1),
    (Fraction(-3), -1),
    (Fraction(1, 8), -1),
    ])
def test_u_sign(alpha, expected):
    assert u_sign(alpha, 7) == expected


def test_u_sign_on_non_units():
    with pytest.raises(ValueError, match="u defined only on units"):
        u_sign(Fraction(7), 7)
    with pytest.raises(ValueError, match="u defined only on units"):
        u_sign(Fraction(1, 7), 7)


@pytest.mark.parametrize("q, expected", [
    (Fraction(2, 5), 1),
    (Fraction(-3, 5), -1),
    (Fraction(-7), -1),
    ])
def test_real_sign(q, expected):
    assert real_sign(q) == expected


def test_real_sign_of_zero():
    with pytest.raises(ValueError):
        real_sign(Fraction(0))


def test_floors_of_quadratic(sqrt2_q7):
    assert s_floor(sqrt2_q7, 7) == 3
    assert t_floor(sqrt2_q7, 7) == 0
    assert u_sign(sqrt2_q7, 7) == 1
    inv = QuadIrr(0, 1, 2, 14, 7)
    assert t_floor(inv, 7) == Fraction(-2, 7)


@given(nonzero, primes)
def test_s_floor_removes_nonpositive_digits(alpha, p):
    rest = alpha - s_floor(alpha, p)
    assert rest == 0 or valuation(rest, p) >= 1


@given(nonzero, primes)
def test_t_floor_leaves_constant_digit(alpha, p):
    a0 = constant_digit(alpha, p)
    rest = alpha - t_floor(alpha, p)
    assert rest == 0 or valuation(rest, p) >= 0
    assert (rest != 0 and valuation(rest, p) == 0) == (a0 != 0)
    assert s_floor(alpha, p) - t_floor(alpha, p) == a0
    assert abs(a0) <= (p - 1) // 2


@given(nonzero, primes)
def test_s_floor_is_idempotent(alpha, p):
    s = s_floor(alpha, p)
    if s != 0:
        assert s_floor(s, p) == s


@given(nonzero.filter(lambda q: valuation(q, 7) == 0))
def test_u_sign_shifts_constant_digit(alpha):
    u = u_sign(alpha, 7)
    a0 = constant_digit(alpha, 7)
    assert u in (1, -1)
    assert a0 - (s_floor(alpha, 7) - u) == u
    assert constant_digit(alpha - (a0 - u), 7) == u
