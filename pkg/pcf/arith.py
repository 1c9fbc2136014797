import enum
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

from sympy import isprime, multiplicity

logger = logging.getLogger(__name__)

Rational = Fraction
RationalLike = Union[Fraction, int]


class DigitMode(enum.Enum):
    BALANCED = 'balanced'
    STANDARD = 'standard'

    def bounds(self, p):
        if self is DigitMode.BALANCED:
            h = (p - 1) // 2
            return -h, h
        return 0, p - 1


def require_odd_prime(p, minimum=3):
    if not isinstance(p, int) or isinstance(p, bool) or p < minimum or p == 2 or not isprime(p):
        if minimum > 3:
            raise ValueError(f"p must be a prime >= {minimum}, got {p}")
        raise ValueError(f"p must be an odd prime, got {p}")
    return p


@dataclass(frozen=True)
class DigitWindow:
    """
    Finite slice of a p-adic digit expansion: sum(digits[i] * p^(start + i)).
    """
    p: int
    start: int
    digits: Tuple[int, ...]
    mode: DigitMode = DigitMode.BALANCED

    def __post_init__(self):
        object.__setattr__(self, 'digits', tuple(int(d) for d in self.digits))
        lo, hi = self.mode.bounds(self.p)
        for d in self.digits:
            if not lo <= d <= hi:
                raise ValueError(f"digit {d} outside the {self.mode.value} range [{lo}, {hi}] for p={self.p}")
        if self.digits and self.digits[0] == 0 and any(self.digits):
            raise ValueError("leading digit of a nonzero window must be nonzero")

    def __len__(self):
        return len(self.digits)

    @property
    def indices(self):
        return range(self.start, self.start + len(self.digits))

    def digit_at(self, index):
        """Digit at p-adic index `index`, zero outside the window."""
        if index < self.start or index >= self.start + len(self.digits):
            return 0
        return self.digits[index - self.start]


def _as_fraction(q: RationalLike) -> Fraction:
    return q if isinstance(q, Fraction) else Fraction(q)


def valuation(q: RationalLike, p: int) -> int:
    q = _as_fraction(q)
    if q == 0:
        raise ValueError("valuation of zero undefined")
    return multiplicity(p, abs(q.numerator)) - multiplicity(p, q.denominator)


def padic_abs(q: RationalLike, p: int) -> Fraction:
    q = _as_fraction(q)
    if q == 0:
        return Fraction(0)
    return Fraction(p) ** -valuation(q, p)


def p_free_part(q: RationalLike, p: int):
    """
    Numerator and denominator of q with every factor p removed.

    :return: (N, D) with D > 0 and p dividing neither.
    """
    q = _as_fraction(q)
    if q == 0:
        return 0, 1
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
    while den % p == 0:
        den //= p
    return num, den


def balanced_residue(a: RationalLike, p: int, mode: DigitMode = DigitMode.BALANCED) -> int:
    """Representative of a mod p; the denominator of a must be prime to p."""
    a = _as_fraction(a)
    assert a.denominator % p != 0, "residue needs a p-integral argument"
    r = a.numerator * pow(a.denominator, -1, p) % p
    if mode is DigitMode.BALANCED and r > (p - 1) // 2:
        r -= p
    return r


def balanced_digits(q: RationalLike, p: int, count: int, mode: DigitMode = DigitMode.BALANCED) -> DigitWindow:
    q = _as_fraction(q)
    if q == 0:
        raise ValueError("zero has no leading digit")
    assert count >= 1, "count must be positive"
    v = valuation(q, p)
    u = q / Fraction(p) ** v
    digits = []
    for _ in range(count):
        d = balanced_residue(u, p, mode)
        digits.append(d)
        u = (u - d) / p
    return DigitWindow(p, v, tuple(digits), mode)


def from_digits(w: DigitWindow) -> Fraction:
    total = Fraction(0)
    for index, d in zip(w.indices, w.digits):
        if d:
            total += d * Fraction(w.p) ** index
    return total
