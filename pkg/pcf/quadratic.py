import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Union

from sympy import multiplicity
from sympy.ntheory import legendre_symbol, sqrt_mod
from sympy.ntheory.primetest import is_square

from pcf.arith import DigitMode, DigitWindow, balanced_digits, valuation
from pcf.errors import NoSquareRoot, PrecisionExhausted, ZeroQuotient

logger = logging.getLogger(__name__)

GUARD_DIGITS = 4
PRECISION_CAP = 4096


@dataclass(frozen=True)
class QuadIrr:
    """
    Exact element (P + Q*sqrt(D))/R of Q_p.

    Instances are always stored normalized (R > 0, gcd(P, Q, R) = 1, zero as 0/1) so
    that equality is structural.
    """
    P: int
    Q: int
    D: int
    R: int
    p: int

    def __post_init__(self):
        P, Q, R = int(self.P), int(self.Q), int(self.R)
        if R == 0:
            raise ZeroDivisionError("quadratic irrational with zero denominator")
        if P == 0 and Q == 0:
            R = 1
        else:
            g = gcd(gcd(P, Q), R)
            P, Q, R = P // g, Q // g, R // g
        if R < 0:
            P, Q, R = -P, -Q, -R
        object.__setattr__(self, 'P', P)
        object.__setattr__(self, 'Q', Q)
        object.__setattr__(self, 'R', R)
        object.__setattr__(self, 'D', int(self.D))

    @classmethod
    def of(cls, P, Q, D, R, p):
        """Validated constructor: D must be a non-square that is a square in Q_p."""
        check_radicand(D, p)
        return cls(P, Q, D, R, p)

    @classmethod
    def from_rational(cls, q: Fraction, D, p):
        q = Fraction(q)
        return cls(q.numerator, 0, D, q.denominator, p)

    @property
    def is_rational(self):
        return self.Q == 0

    def is_zero(self):
        return self.P == 0 and self.Q == 0

    def rational_value(self) -> Fraction:
        assert self.Q == 0, "value is irrational"
        return Fraction(self.P, self.R)

    def conjugate(self):
        return QuadIrr(self.P, -self.Q, self.D, self.R, self.p)

    def __str__(self):
        if self.Q == 0:
            return str(Fraction(self.P, self.R))
        return f"({self.P}{self.Q:+d}*sqrt({self.D}))/{self.R}"


def is_padic_square(D: int, p: int) -> bool:
    if D == 0:
        return True
    v = multiplicity(p, abs(D))
    if v % 2:
        return False
    return legendre_symbol((D // p ** v) % p, p) == 1


def check_radicand(D: int, p: int):
    if D >= 0 and is_square(D):
        raise ValueError(f"D={D} is a perfect square")
    if not is_padic_square(D, p):
        raise NoSquareRoot(D, p)


@lru_cache(maxsize=1024)
def hensel_sqrt(D: int, p: int, k: int) -> int:
    """
    Canonical square root of a p-adic unit D modulo p^k.

    The root x satisfies 0 < x < p^k and its balanced residue mod p lies in
    {1, ..., (p-1)/2}; the other root is p^k - x.
    """
    assert k >= 1, "precision must be positive"
    if D % p == 0:
        raise ValueError("strip even p-power first")
    if legendre_symbol(D % p, p) != 1:
        raise NoSquareRoot(D, p)
    x = sqrt_mod(D % p, p)
    x = min(x, p - x)
    # Newton iteration doubles the number of correct digits each pass
    j = 1
    while j < k:
        j = min(2 * j, k)
        mod = p ** j
        x = (x - (x * x - D) * pow(2 * x, -1, mod)) % mod
    return x % p ** k


def sqrt_approx(D: int, p: int, m: int) -> int:
    """sqrt(D) on the canonical branch, correct modulo p^(m + v_p(D)/2)."""
    e2 = multiplicity(p, abs(D))
    assert e2 % 2 == 0, "odd valuation radicand"
    e = e2 // 2
    return p ** e * hensel_sqrt(D // p ** e2, p, m)


def digits_of(alpha: QuadIrr, count: int, mode: DigitMode = DigitMode.BALANCED,
              cap: int = PRECISION_CAP) -> DigitWindow:
    """
    First `count` digits of alpha from index v_p(alpha) on.

    sqrt(D) is replaced by an approximation to a working precision m; the digits of
    (P + Q*s)/R are returned only once the approximation error provably lies beyond
    the last requested index, otherwise m is doubled up to `cap`.
    """
    if alpha.is_zero():
        raise ValueError("zero has no leading digit")
    if alpha.Q == 0:
        return balanced_digits(alpha.rational_value(), alpha.p, count, mode)

    p = alpha.p
    e = multiplicity(p, abs(alpha.D)) // 2
    vQ = multiplicity(p, abs(alpha.Q))
    m = count + abs(multiplicity(p, alpha.R)) + GUARD_DIGITS
    while m <= cap:
        N = alpha.P + alpha.Q * sqrt_approx(alpha.D, p, m)
        prec = m + e + vQ
        if N != 0:
            vN = multiplicity(p, abs(N))
            if vN < prec and prec - vN >= count:
                return balanced_digits(Fraction(N, alpha.R), p, count, mode)
        logger.debug(f"precision {m} insufficient for {alpha}, doubling")
        m *= 2
    raise PrecisionExhausted(cap)


def quad_sub_rational(alpha: QuadIrr, b: Fraction) -> QuadIrr:
    b = Fraction(b)
    n, d = b.numerator, b.denominator
    return QuadIrr(alpha.P * d - n * alpha.R, alpha.Q * d, alpha.D, alpha.R * d, alpha.p)


def quad_invert(alpha: QuadIrr) -> QuadIrr:
    if alpha.is_zero():
        raise ZeroQuotient()
    P, Q, D, R = alpha.P, alpha.Q, alpha.D, alpha.R
    return QuadIrr(R * P, -R * Q, D, P * P - Q * Q * D, alpha.p)


Number = Union[Fraction, QuadIrr]


def is_zero(alpha: Number) -> bool:
    if isinstance(alpha, QuadIrr):
        return alpha.is_zero()
    return alpha == 0


def sub_rational(alpha: Number, b: Fraction) -> Number:
    if isinstance(alpha, QuadIrr):
        return quad_sub_rational(alpha, b)
    return Fraction(alpha) - b


def reciprocal(alpha: Number) -> Number:
    if isinstance(alpha, QuadIrr):
        return quad_invert(alpha)
    if alpha == 0:
        raise ZeroQuotient()
    return 1 / Fraction(alpha)


def digits(alpha: Number, count: int, p: int, mode: DigitMode = DigitMode.BALANCED) -> DigitWindow:
    if isinstance(alpha, QuadIrr):
        assert alpha.p == p, "prime mismatch"
        return digits_of(alpha, count, mode)
    return balanced_digits(alpha, p, count, mode)


def padic_valuation(alpha: Number, p: int) -> int:
    """v_p of a nonzero rational or quadratic irrational."""
    if isinstance(alpha, QuadIrr):
        if alpha.Q == 0:
            return valuation(alpha.rational_value(), p)
        return digits_of(alpha, 1).start
    return valuation(alpha, p)
