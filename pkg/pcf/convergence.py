import logging
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from pcf.arith import require_odd_prime, valuation
from pcf.errors import ZeroDenominator
from pcf.quadratic import Number, is_zero, padic_valuation, sub_rational
from pcf.utils import pairwise

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PQSequence:
    """Partial quotients b_0, b_1, ... of a p-adic continued fraction."""
    p: int
    b: Tuple[Fraction, ...]
    seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'b', tuple(Fraction(x) for x in self.b))
        for n, x in enumerate(self.b):
            if n >= 1 and x == 0:
                raise ValueError(f"partial quotient b_{n} is zero")

    def __len__(self):
        return len(self.b)

    def vp(self, n):
        return valuation(self.b[n], self.p)


@dataclass(frozen=True)
class USequence:
    m: int
    values: Tuple[Fraction, ...]

    def __getitem__(self, n):
        return self.values[n]


def continuants(b: Sequence[Fraction]) -> List[Tuple[Fraction, Fraction]]:
    A_prev, A = Fraction(0), Fraction(1)
    B_prev, B = Fraction(1), Fraction(0)
    out = []
    for bn in b:
        A_prev, A = A, bn * A + A_prev
        B_prev, B = B, bn * B + B_prev
        out.append((A, B))
    return out


def convergents(seq: PQSequence) -> List[Tuple[Fraction, Fraction]]:
    return continuants(seq.b)


def denominator_valuations(seq: PQSequence) -> List[int]:
    vals = []
    for n, (_, B) in enumerate(convergents(seq)):
        if B == 0:
            raise ZeroDenominator(n)
        vals.append(valuation(B, seq.p))
    return vals


def valuation_trace(seq: PQSequence) -> pd.DataFrame:
    """
    One row per index n with v_p(B_n) and v_p(B_n B_(n+1)); the second column is
    missing on the last row.
    """
    vals = denominator_valuations(seq)
    vbb = [a + b for a, b in pairwise(vals)] + [pd.NA]
    return pd.DataFrame({
        'n':     pd.array(range(len(vals)), dtype='Int64'),
        'vp_B':  pd.array(vals, dtype='Int64'),
        'vp_BB': pd.array(vbb[:len(vals)], dtype='Int64'),
        })


def _product_valuations(vals):
    return [a + b for a, b in pairwise(vals)]


def _first(indices):
    return indices[0] if indices else None


@dataclass
class PairReport:
    holds: bool
    first_violation: Optional[int]
    checked: int

    def to_dict(self):
        return asdict(self)


def check_pair_condition(seq: PQSequence) -> PairReport:
    bad = [n for n in range(1, len(seq) - 1) if seq.vp(n) + seq.vp(n + 1) >= 0]
    return PairReport(holds=not bad, first_violation=_first(bad), checked=max(0, len(seq) - 2))


@dataclass
class DescentReport:
    condition_i: bool
    condition_ii: bool
    agree: bool
    first_violation_i: Optional[int]
    first_violation_ii: Optional[int]
    strictly_decreasing: bool
    decrease_agrees: bool
    descent_restatement_holds: bool
    descent_monotone_holds: bool
    seed: Optional[int] = None

    def to_dict(self):
        return asdict(self)


def check_descent_equivalence(seq: PQSequence) -> DescentReport:
    """
    Evaluates v_p(b_(n+1) B_n) < v_p(B_(n-1)) from the convergents and
    v_p(b_n b_(n+1)) < 0 from the quotients, independently, for 1 <= n <= len-2.
    """
    vB = denominator_valuations(seq)
    idx = range(1, len(seq) - 1)
    bad_i = [n for n in idx if seq.vp(n + 1) + vB[n] >= vB[n - 1]]
    bad_ii = [n for n in idx if seq.vp(n) + seq.vp(n + 1) >= 0]

    vbb = _product_valuations(vB)
    strict = all(b < a for a, b in pairwise(vbb))

    restatement = all((seq.vp(n + 1) + vB[n] < vB[n - 1]) == (vB[n + 1] < vB[n - 1]) for n in idx)
    monotone = all(vB[n + 1] <= vB[n] for n in idx
                   if vB[n + 1] < vB[n - 1] and seq.vp(n + 1) <= 0)

    return DescentReport(condition_i=not bad_i, condition_ii=not bad_ii, agree=(not bad_i) == (not bad_ii),
                         first_violation_i=_first(bad_i), first_violation_ii=_first(bad_ii),
                         strictly_decreasing=strict, decrease_agrees=strict == (not bad_ii),
                         descent_restatement_holds=restatement, descent_monotone_holds=monotone, seed=seq.seed)


@dataclass
class BlockReport:
    r: int
    pattern_holds: bool
    conditions_hold: bool
    hypotheses_hold: bool
    plateau_holds: Optional[bool]
    complete_blocks: int
    ignored_tail: int
    violations: List[str] = field(default_factory=list)
    threestep_agrees: Optional[bool] = None

    def to_dict(self):
        return asdict(self)


def _pattern_violations(seq: PQSequence, r: int, complete: int) -> List[str]:
    out = []
    for i in range(1, r * complete + 1):
        v = seq.vp(i)
        if (i - 1) % r == 0:
            if v >= 0:
                out.append(f"b_{i}: v_p = {v}, expected < 0")
        elif v != 0:
            out.append(f"b_{i}: v_p = {v}, expected 0")
    return out


def _plateau_violations(vB: List[int], r: int) -> List[str]:
    out = []
    n = 0
    while r * n + r + 1 < len(vB):
        block = vB[r * n + 1: r * n + r + 1]
        nxt = vB[r * n + r + 1]
        if len(set(block)) != 1 or not block[0] > nxt:
            out.append(f"block {n}: v_p(B) = {block} then {nxt}")
        n += 1
    return out


def _block_report(seq, r, condition_violations, complete):
    pattern = _pattern_violations(seq, r, complete)
    hypotheses = not pattern and not condition_violations
    plateau = None
    violations = pattern + condition_violations
    if hypotheses:
        bad = _plateau_violations(denominator_valuations(seq), r)
        plateau = not bad
        violations += bad
    return BlockReport(r=r, pattern_holds=not pattern, conditions_hold=not condition_violations,
                       hypotheses_hold=hypotheses, plateau_holds=plateau, complete_blocks=complete,
                       ignored_tail=(len(seq) - 1) - r * complete, violations=violations)


def check_3step_hypotheses(seq: PQSequence) -> BlockReport:
    p = seq.p
    side = []
    n = 0
    while 3 * n + 3 < len(seq):
        x = seq.b[3 * n + 2] * seq.b[3 * n + 3] + 1
        if x == 0 or valuation(x, p) != 0:
            side.append(f"triple {n}: b_{3 * n + 2}*b_{3 * n + 3} + 1 = {x} is not a unit")
        n += 1
    return _block_report(seq, 3, side, n)


def u_sequence(seq: PQSequence, m: int, n_max: int) -> USequence:
    if m < 2:
        raise ValueError("U sequences start at index m >= 2")
    if n_max < 0 or m + n_max - 1 >= len(seq):
        raise ValueError(f"U_{m}^({n_max}) needs quotients beyond b_{len(seq) - 1}")
    values = [Fraction(1)]
    if n_max >= 1:
        values.append(seq.b[m])
    for n in range(1, n_max):
        values.append(seq.b[m + n] * values[n] + values[n - 1])
    return USequence(m, tuple(values))


def verify_seqden(seq: PQSequence, k: int, n: int, head: USequence = None, tail: USequence = None) -> bool:
    """
    Checks B_(k+n) = U_(k+2)^(n-1) B_(k+1) + U_(k+3)^(n-2) B_k exactly.

    `head` and `tail` replace the computed U_(k+2) and U_(k+3) sequences.
    """
    if k < 0 or n < 2 or k + n >= len(seq):
        raise ValueError(f"indices k={k}, n={n} out of range for {len(seq)} quotients")
    B = [Bn for _, Bn in convergents(seq)]
    head = head or u_sequence(seq, k + 2, n - 1)
    tail = tail or u_sequence(seq, k + 3, n - 2)
    return B[k + n] == head[n - 1] * B[k + 1] + tail[n - 2] * B[k]


def check_rstep_hypotheses(seq: PQSequence, r: int) -> BlockReport:
    if r < 1:
        raise ValueError("r must be >= 1")
    p = seq.p
    conditions = []
    n = 0
    while r * n + r < len(seq):
        base = r * n
        if r >= 3:
            U = u_sequence(seq, base + 2, r - 1)
            for i in range(2, r):
                if U[i] == 0 or valuation(U[i], p) != 0:
                    conditions.append(f"block {n}: U_{base + 2}^({i}) = {U[i]} is not a unit")
        if r >= 4:
            U = u_sequence(seq, base + 3, r - 2)
            for i in range(2, r - 1):
                if U[i] == 0 or valuation(U[i], p) != 0:
                    conditions.append(f"block {n}: U_{base + 3}^({i}) = {U[i]} is not a unit")
        n += 1
    report = _block_report(seq, r, conditions, n)
    if r == 3:
        report.threestep_agrees = check_3step_hypotheses(seq).hypotheses_hold == report.hypotheses_hold
    return report


@dataclass
class DivergenceReport:
    non_increasing: bool
    strict_drops: int
    drop_in_every_window: Optional[bool]
    first_increase: Optional[int]
    min_vp_B: Optional[int]

    def to_dict(self):
        return asdict(self)


def check_divergence(seq: PQSequence, r: int = None) -> DivergenceReport:
    """Monotonicity of v_p(B_n B_(n+1)); with r, a strict drop is required in every r consecutive steps."""
    vB = denominator_valuations(seq)
    vbb = _product_valuations(vB)
    diffs = [b - a for a, b in pairwise(vbb)]
    increases = [n for n, d in enumerate(diffs) if d > 0]
    windows = None
    if r is not None:
        windows = all(any(d < 0 for d in diffs[i:i + r]) for i in range(0, len(diffs) - r + 1))
    return DivergenceReport(non_increasing=not increases, strict_drops=sum(1 for d in diffs if d < 0),
                            drop_in_every_window=windows, first_increase=_first(increases),
                            min_vp_B=min(vB) if vB else None)


def approximation_valuation(alpha: Number, seq: PQSequence, n: int):
    """v_p(alpha - A_n/B_n), or np.inf when the convergent equals alpha."""
    A, B = convergents(seq)[n]
    if B == 0:
        raise ZeroDenominator(n)
    diff = sub_rational(alpha, A / B)
    if is_zero(diff):
        return np.inf
    return padic_valuation(diff, seq.p)


def convergent_gap_valuation(seq: PQSequence, n: int, m: int, conv=None):
    """v_p(A_m/B_m - A_n/B_n); `conv` takes precomputed convergents of `seq`."""
    conv = conv or convergents(seq)
    for k in (n, m):
        if conv[k][1] == 0:
            raise ZeroDenominator(k)
    gap = conv[m][0] / conv[m][1] - conv[n][0] / conv[n][1]
    if gap == 0:
        return np.inf
    return valuation(gap, seq.p)


@dataclass
class MetricReport:
    checked_pairs: int
    violations: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def holds(self):
        return not self.violations

    def to_dict(self):
        return {'checked_pairs': self.checked_pairs, 'holds': self.holds,
                'violations': [list(v) for v in self.violations]}


def check_metric_identity(seq: PQSequence) -> MetricReport:
    """
    For n < m, v_p(A_m/B_m - A_n/B_n) = -v_p(B_n B_(n+1)) whenever v_p(B_n B_(n+1)) is
    strictly larger than every v_p(B_k B_(k+1)) with n < k < m.
    """
    require_odd_prime(seq.p)
    vbb = _product_valuations(denominator_valuations(seq))
    conv = convergents(seq)
    checked, bad = 0, []
    for n in range(len(vbb)):
        for m in range(n + 1, len(seq)):
            if m - 1 > n and vbb[m - 1] >= vbb[n]:
                break
            checked += 1
            if convergent_gap_valuation(seq, n, m, conv) != -vbb[n]:
                bad.append((n, m))
    return MetricReport(checked_pairs=checked, violations=bad)
