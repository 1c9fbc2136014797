import enum
import logging
from collections import namedtuple
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Union

from pcf.arith import DigitMode, p_free_part, require_odd_prime, valuation
from pcf.convergence import PQSequence, continuants
from pcf.errors import SchemeInvariantError, ZeroQuotient
from pcf.floors import real_sign, s_floor, t_floor, u_sign
from pcf.quadratic import Number, QuadIrr, is_zero, padic_valuation, reciprocal, sub_rational
from pcf.utils import timeit

logger = logging.getLogger(__name__)

DEFAULT_MAX_STEPS = 200


class Scheme(enum.Enum):
    BROWKIN1 = 'browkin1'
    BROWKIN2 = 'browkin2'
    NEW1 = 'new1'
    NEW2 = 'new2'
    RUBAN = 'ruban'

    @property
    def period_length(self):
        return {'browkin1': 1, 'ruban': 1, 'browkin2': 2, 'new1': 3, 'new2': 3}[self.value]

    @property
    def min_prime(self):
        return 5 if self in (Scheme.NEW1, Scheme.NEW2) else 3

    @classmethod
    def from_tag(cls, tag):
        try:
            return cls(tag)
        except ValueError:
            raise ValueError(f"unknown algorithm {tag!r}, expected one of {[s.value for s in cls]}")


Step = namedtuple('Step', ['n', 'b', 'vp_b', 'alpha', 'vp_alpha', 'A', 'B', 'vp_B'])


@dataclass(frozen=True)
class Status:
    kind: str
    preperiod: Optional[int] = None
    period: Optional[int] = None

    FINITE = 'finite'
    PERIODIC = 'periodic'
    TRUNCATED = 'truncated'

    @classmethod
    def finite(cls):
        return cls(cls.FINITE)

    @classmethod
    def periodic(cls, preperiod, period):
        return cls(cls.PERIODIC, preperiod, period)

    @classmethod
    def truncated(cls):
        return cls(cls.TRUNCATED)


@dataclass
class ExpansionTrace:
    p: int
    scheme: Scheme
    input: Union[Fraction, QuadIrr]
    steps: List[Step] = field(default_factory=list)
    status: Status = field(default_factory=Status.truncated)
    tail: Optional[Union[Fraction, QuadIrr]] = None

    @property
    def quotients(self):
        return [s.b for s in self.steps]

    def to_sequence(self) -> PQSequence:
        return PQSequence(self.p, tuple(self.quotients))

    def repeating_block(self):
        if self.status.kind != Status.PERIODIC:
            return None
        lo = self.status.preperiod
        return self.quotients[lo:lo + self.status.period]


def _t_branch(alpha, n, p, mode=DigitMode.BALANCED):
    t = t_floor(alpha, p, mode)
    if t == 0:
        raise SchemeInvariantError(n, alpha, "t-branch needs v_p(alpha) < 0")
    rest = sub_rational(alpha, t)
    if not is_zero(rest) and padic_valuation(rest, p) == 0:
        return t
    return t - real_sign(t)


def _u(alpha, n, p):
    try:
        return u_sign(alpha, p)
    except ValueError as e:
        raise SchemeInvariantError(n, alpha, str(e))


def partial_quotient(alpha: Number, n: int, scheme: Scheme, p: int) -> Fraction:
    if scheme is Scheme.BROWKIN1:
        return s_floor(alpha, p)
    if scheme is Scheme.RUBAN:
        return s_floor(alpha, p, DigitMode.STANDARD)
    if scheme is Scheme.BROWKIN2:
        return s_floor(alpha, p) if n % 2 == 0 else _t_branch(alpha, n, p)

    phase = n % 3
    if phase == 0:
        return s_floor(alpha, p)
    if phase == 1:
        return _t_branch(alpha, n, p)
    if scheme is Scheme.NEW1:
        return Fraction(_u(alpha, n, p))
    return s_floor(alpha, p) - _u(alpha, n, p)


def step(alpha: Number, n: int, scheme: Scheme, p: int):
    """
    One application of the scheme's case table at index n.

    :return: (b, next complete quotient), the latter None once alpha == b exactly.
    """
    if is_zero(alpha):
        raise ZeroQuotient()
    b = partial_quotient(alpha, n, scheme, p)
    rest = sub_rational(alpha, b)
    if is_zero(rest):
        return b, None
    return b, reciprocal(rest)


def _vp_or_none(x, p):
    return None if x == 0 else valuation(x, p)


@timeit
def expand(input: Union[Fraction, int, QuadIrr], scheme: Scheme, p: int,
           max_steps: int = DEFAULT_MAX_STEPS) -> ExpansionTrace:
    require_odd_prime(p, scheme.min_prime)
    assert max_steps >= 1, "max_steps must be positive"
    alpha = input if isinstance(input, QuadIrr) else Fraction(input)
    if isinstance(alpha, QuadIrr):
        assert alpha.p == p, "prime mismatch"
    trace = ExpansionTrace(p, scheme, alpha)

    if is_zero(alpha):
        trace.steps.append(Step(0, Fraction(0), None, alpha, None, Fraction(0), Fraction(1), 0))
        trace.status = Status.finite()
        return trace

    L = scheme.period_length
    seen = {}
    A_prev, A = Fraction(0), Fraction(1)
    B_prev, B = Fraction(1), Fraction(0)
    n = 0
    while True:
        # cycles are only looked for at block starts
        block_start = n % L == 0
        if block_start and alpha in seen:
            trace.status = Status.periodic(seen[alpha], n - seen[alpha])
            trace.tail = alpha
            break
        if n == max_steps:
            trace.status = Status.truncated()
            trace.tail = alpha
            break
        if block_start:
            seen[alpha] = n

        b, nxt = step(alpha, n, scheme, p)
        A_prev, A = A, b * A + A_prev
        B_prev, B = B, b * B + B_prev
        trace.steps.append(Step(n, b, _vp_or_none(b, p), alpha, padic_valuation(alpha, p), A, B, _vp_or_none(B, p)))
        if nxt is None:
            trace.status = Status.finite()
            break
        alpha = nxt
        n += 1

    logger.debug(f"{scheme.value} expansion of {input} in Q_{p}: {trace.status.kind} after {len(trace.steps)} steps")
    return trace


def evaluate(quotients) -> Fraction:
    """Exact value of the finite continued fraction [b_0; b_1, ..., b_N]."""
    assert len(quotients) > 0, "empty continued fraction"
    x = Fraction(quotients[-1])
    for b in reversed(quotients[:-1]):
        if x == 0:
            raise ZeroQuotient()
        x = Fraction(b) + 1 / x
    return x


def _pattern_violations(trace: ExpansionTrace) -> List[str]:
    out = []
    scheme = trace.scheme
    for s in trace.steps[1:]:
        n, v = s.n, s.vp_b
        if v is None:
            out.append(f"step {n}: zero partial quotient")
            continue
        if scheme in (Scheme.BROWKIN1, Scheme.RUBAN):
            want_negative = True
        elif scheme is Scheme.BROWKIN2:
            want_negative = n % 2 == 1
        else:
            want_negative = n % 3 == 1
        if want_negative and v >= 0:
            out.append(f"step {n}: v_p(b) = {v}, expected < 0")
        elif not want_negative and v != 0:
            out.append(f"step {n}: v_p(b) = {v}, expected 0")

    if scheme in (Scheme.NEW1, Scheme.NEW2):
        b = trace.quotients
        k = 0
        while 3 * k + 3 < len(b):
            x = b[3 * k + 2] * b[3 * k + 3] + 1
            if x == 0 or valuation(x, trace.p) != 0:
                out.append(f"step {3 * k + 3}: b_{3 * k + 2}*b_{3 * k + 3} + 1 = {x} is not a unit")
            k += 1
    if scheme is Scheme.RUBAN:
        out += [f"step {s.n}: negative partial quotient {s.b}" for s in trace.steps if s.b < 0]
    return out


def verify_trace(trace: ExpansionTrace) -> List[str]:
    """Re-derives complete quotients, partial quotients and convergents; returns the violations found."""
    steps = trace.steps
    if not steps:
        return []
    p = trace.p
    out = []
    if steps[0].alpha != trace.input:
        out.append("step 0: alpha differs from the input")

    for s in steps:
        if s.alpha is None:
            continue
        if s.vp_alpha is not None and not is_zero(s.alpha) and padic_valuation(s.alpha, p) != s.vp_alpha:
            out.append(f"step {s.n}: stored v_p(alpha) = {s.vp_alpha} is wrong")
        if is_zero(s.alpha):
            continue
        try:
            b = partial_quotient(s.alpha, s.n, trace.scheme, p)
            if b != s.b:
                out.append(f"step {s.n}: partial quotient {s.b} differs from {b}")
        except SchemeInvariantError as e:
            out.append(f"step {s.n}: {e}")

    for s, nxt in zip(steps, steps[1:]):
        if s.alpha is None or nxt.alpha is None:
            continue
        rest = sub_rational(s.alpha, s.b)
        if is_zero(rest) or reciprocal(rest) != nxt.alpha:
            out.append(f"step {nxt.n}: alpha is not 1/(alpha_{s.n} - b_{s.n})")

    conv = continuants(trace.quotients)
    for s, (A, B) in zip(steps, conv):
        if (A, B) != (s.A, s.B):
            out.append(f"step {s.n}: convergent {s.A}/{s.B} differs from {A}/{B}")
        if s.vp_B != _vp_or_none(B, p):
            out.append(f"step {s.n}: stored v_p(B) = {s.vp_B} is wrong")
    for n, ((A0, B0), (A1, B1)) in enumerate(zip(conv, conv[1:])):
        if A1 * B0 - A0 * B1 != (-1) ** n:
            out.append(f"step {n + 1}: A_(n+1)B_n - A_nB_(n+1) != (-1)^n")

    last = steps[-1]
    status = trace.status
    if status.kind == Status.FINITE:
        if last.alpha is not None and not is_zero(sub_rational(last.alpha, last.b)):
            out.append(f"step {last.n}: finite trace ends with alpha != b")
        if not isinstance(trace.input, QuadIrr) or trace.input.is_rational:
            value = trace.input if not isinstance(trace.input, QuadIrr) else trace.input.rational_value()
            try:
                if evaluate(trace.quotients) != value:
                    out.append("finite trace does not evaluate back to its input")
            except ZeroQuotient:
                out.append("finite trace evaluation divides by zero")
    elif status.kind == Status.PERIODIC:
        lo, t = status.preperiod, status.period
        if lo + t != len(steps) or t % trace.scheme.period_length or lo % trace.scheme.period_length:
            out.append(f"periodic status ({lo}, {t}) inconsistent with {len(steps)} steps")
        elif steps[lo].alpha is not None and trace.tail != steps[lo].alpha:
            out.append(f"alpha_{lo + t} does not repeat alpha_{lo}")

    out += _pattern_violations(trace)
    return out


def descent_quantities(trace: ExpansionTrace):
    """(k, |N_3k| + |D_3k|) for every rational complete quotient alpha_3k, N/D its p-free part."""
    out = []
    for s in trace.steps[::3]:
        alpha = s.alpha
        if isinstance(alpha, QuadIrr):
            if not alpha.is_rational:
                continue
            alpha = alpha.rational_value()
        N, D = p_free_part(alpha, trace.p)
        out.append((s.n // 3, abs(N) + abs(D)))
    return out


def check_descent(trace: ExpansionTrace, first_block: int = 1) -> List[int]:
    """Blocks k >= first_block at which |N_3k| + |D_3k| fails to decrease strictly towards k + 1."""
    q = dict(descent_quantities(trace))
    return [k for k in sorted(q) if k >= first_block and k + 1 in q and q[k + 1] >= q[k]]
