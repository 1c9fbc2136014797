import logging
from fractions import Fraction

import numpy as np
from sympy.ntheory.primetest import is_square

from pcf.arith import require_odd_prime
from pcf.convergence import PQSequence
from pcf.quadratic import is_padic_square

logger = logging.getLogger(__name__)

DEFAULT_VALUATIONS = (-2, -1, 0)
_max_redraws = 50


def random_pq_sequence(p, length, seed, valuations=DEFAULT_VALUATIONS, r=None) -> PQSequence:
    """
    Seeded random partial quotients u * p^v with u a nonzero balanced residue.

    With r set, b_(rn+1) gets a negative valuation and the rest of each block valuation
    zero. A quotient that would make a denominator B_n vanish is drawn again.
    """
    require_odd_prime(p)
    assert length >= 1, "empty sequence"
    rng = np.random.default_rng(seed)
    h = (p - 1) // 2
    units = [u for u in range(-h, h + 1) if u != 0]
    negative = [v for v in valuations if v < 0] or [-1]

    def draw(n):
        if r is not None and n >= 1:
            v = int(rng.choice(negative)) if (n - 1) % r == 0 else 0
        else:
            v = int(rng.choice(valuations))
        return int(rng.choice(units)) * Fraction(p) ** v

    b = [draw(0)]
    B_prev, B = Fraction(0), Fraction(1)
    for n in range(1, length):
        for _ in range(_max_redraws):
            bn = draw(n)
            if bn * B + B_prev != 0:
                break
        else:
            raise RuntimeError(f"could not avoid a zero denominator at index {n} (seed {seed})")
        b.append(bn)
        B_prev, B = B, bn * B + B_prev
    return PQSequence(p, tuple(b), seed=seed)


def rstep_example(p, r, n_blocks, unit=1) -> PQSequence:
    """b_0 = 0, then blocks (1/p, unit, ..., unit) of length r."""
    require_odd_prime(p)
    block = [Fraction(1, p)] + [Fraction(unit)] * (r - 1)
    return PQSequence(p, tuple([Fraction(0)] + block * n_blocks))


def rational_corpus(count, seed, bound=10 ** 6):
    """`count` nonzero rationals a/b with |a|, |b| <= bound."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        a = int(rng.integers(-bound, bound + 1))
        b = int(rng.integers(1, bound + 1))
        if a != 0:
            out.append(Fraction(a, b))
    return out


def quadratic_radicands(p, count, seed, bound=10 ** 4):
    """Distinct non-square integers D that are squares in Q_p."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        D = int(rng.integers(-bound, bound + 1))
        if D == 0 or D in out or (D > 0 and is_square(D)) or not is_padic_square(D, p):
            continue
        out.append(D)
    return out
