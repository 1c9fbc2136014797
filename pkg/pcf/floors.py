from fractions import Fraction

from pcf.arith import DigitMode, from_digits
from pcf.quadratic import Number, digits


def _window_to(alpha: Number, p: int, last_index: int, mode: DigitMode):
    lead = digits(alpha, 1, p, mode)
    if lead.start > last_index:
        return None
    return digits(alpha, last_index - lead.start + 1, p, mode)


def s_floor(alpha: Number, p: int, mode: DigitMode = DigitMode.BALANCED) -> Fraction:
    """Sum of the digits of alpha at indices <= 0; zero when v_p(alpha) >= 1."""
    w = _window_to(alpha, p, 0, mode)
    return Fraction(0) if w is None else from_digits(w)


def t_floor(alpha: Number, p: int, mode: DigitMode = DigitMode.BALANCED) -> Fraction:
    """Sum of the digits of alpha at indices <= -1; zero when v_p(alpha) >= 0."""
    w = _window_to(alpha, p, -1, mode)
    return Fraction(0) if w is None else from_digits(w)


def constant_digit(alpha: Number, p: int, mode: DigitMode = DigitMode.BALANCED) -> int:
    w = _window_to(alpha, p, 0, mode)
    return 0 if w is None else w.digit_at(0)


def u_sign(alpha: Number, p: int) -> int:
    lead = digits(alpha, 1, p)
    if lead.start != 0:
        raise ValueError("u defined only on units")
    a0 = lead.digits[0]
    if a0 == -1 or a0 >= 2:
        return 1
    return -1


def real_sign(q: Fraction) -> int:
    if q == 0:
        raise ValueError("sign of zero undefined")
    return 1 if q > 0 else -1
