import logging
from collections import namedtuple
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

from pcf.arith import balanced_residue, require_odd_prime
from pcf.convergence import PQSequence, continuants, denominator_valuations

log = logging.getLogger('counterexample')

BlockChoice = namedtuple('BlockChoice', ['block', 'a1', 'a2', 'a3', 'branch', 'a4', 'a5', 'b6'])

UNIT_SUM = 'unit'
DIVISIBLE_SUM = 'divisible'


@dataclass
class CounterexampleRun:
    p: int
    sequence: PQSequence
    blocks: List[BlockChoice] = field(default_factory=list)


def _scaled(B, p):
    """p*B as an integer; every B here lies in (1/p)Z."""
    x = B * p
    assert x.denominator == 1, f"denominator {B} outside (1/p)Z"
    return x.numerator


def build_counterexample_run(p: int, n_blocks: int) -> CounterexampleRun:
    """
    Pattern-respecting quotients whose denominators never drop below valuation -1.

    Starts from b_1 = 1/p, b_2 = 2, b_3 = (p-1)/2, so that b_3 b_2 + 1 = p, then
    appends one block (b_(3n+4), b_(3n+5), b_(3n+6)) at a time.
    """
    require_odd_prime(p)
    assert n_blocks >= 1, "at least one block"
    b = [Fraction(0), Fraction(1, p), Fraction(2), Fraction(p - 1, 2)]
    Bs = [B for _, B in continuants(b)]

    run = CounterexampleRun(p, None)
    for n in range(n_blocks - 1):
        a1, a2 = _scaled(Bs[3 * n + 1], p), _scaled(Bs[3 * n + 2], p)
        a3 = Bs[3 * n + 3]
        assert a3.denominator == 1, "B_(3n+3) must be p-integral"
        a3 = a3.numerator
        if (a3 + a2) % p != 0:
            branch, b4 = UNIT_SUM, Fraction(1, p)
        else:
            branch, b4 = DIVISIBLE_SUM, Fraction(2, p)
        B4 = b4 * Bs[-1] + Bs[-2]
        b5 = Fraction(1)
        B5 = b5 * B4 + Bs[-1]
        a4, a5 = _scaled(B4, p), _scaled(B5, p)
        b6 = Fraction(balanced_residue(Fraction(-a4, a5), p))
        B6 = b6 * B5 + B4

        b += [b4, b5, b6]
        Bs += [B4, B5, B6]
        run.blocks.append(BlockChoice(n, a1, a2, a3, branch, a4, a5, b6))

    run.sequence = PQSequence(p, tuple(b))
    log.debug(f"built {len(b)} quotients for p={p}, "
              f"{sum(1 for c in run.blocks if c.branch == DIVISIBLE_SUM)} blocks took the p | a3 + a2 branch")
    return run


def build_counterexample(p: int, n_blocks: int) -> PQSequence:
    return build_counterexample_run(p, n_blocks).sequence


def certify_bounded(seq: PQSequence, bound: int) -> bool:
    return min(denominator_valuations(seq)) >= bound


def valuation_schedule_holds(seq: PQSequence) -> bool:
    """v_p(B_(3n+1)) = v_p(B_(3n+2)) = -1 and v_p(B_(3n+3)) >= 0 for every complete block."""
    vB = denominator_valuations(seq)
    n = 0
    while 3 * n + 3 < len(vB):
        if vB[3 * n + 1] != -1 or vB[3 * n + 2] != -1 or vB[3 * n + 3] < 0:
            return False
        n += 1
    return True
