from fractions import Fraction

import numpy as np
import pandas as pd
import pytest
from hypothesis import given, settings, strategies as st

from pcf.convergence import (PQSequence, USequence, approximation_valuation, check_3step_hypotheses,
                             check_descent_equivalence, check_divergence, check_metric_identity,
                             check_pair_condition, check_rstep_hypotheses, convergent_gap_valuation, convergents,
                             denominator_valuations, u_sequence, valuation_trace, verify_seqden)
from pcf.errors import ZeroDenominator
from pcf.sampling import random_pq_sequence, rstep_example
from pcf.schemes import Scheme, expand

F = Fraction
seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


def seq(p, *b):
    return PQSequence(p, tuple(F(x) for x in b))


def test_sequence_rejects_zero_quotients():
    with pytest.raises(ValueError):
        seq(5, 1, 0, 2)
    assert len(seq(5, 0, 1)) == 2


def test_convergents():
    conv = convergents(seq(5, 2, F(1, 5)))
    assert [A for A, _ in conv] == [F(2), F(7, 5)]
    assert [B for _, B in conv] == [F(1), F(1, 5)]
    A, B = convergents(seq(5, 0, F(1, 5)))[1]
    assert A / B == 5
    A, B = convergents(seq(5, 2, F(2, 5), -2, 1))[3]
    assert A / B == F(1, 3)


def test_valuation_trace():
    df = valuation_trace(seq(5, 2, F(2, 5), -2, 1))
    assert list(df['vp_B']) == [0, -1, -1, -1]
    assert list(df['vp_BB'][:3]) == [-1, -2, -2]
    assert pd.isna(df['vp_BB'].iloc[-1])
    assert denominator_valuations(seq(5, 7, F(1, 5)))[1] == -1


def test_valuation_trace_zero_denominator():
    with pytest.raises(ZeroDenominator, match="zero denominator") as e:
        valuation_trace(seq(5, 0, 1, -1))
    assert e.value.n == 2


def test_pair_condition():
    assert check_pair_condition(seq(5, 7, F(1, 5), 2, F(1, 5))).holds
    report = check_pair_condition(seq(5, 7, F(1, 5), 2, 3))
    assert not report.holds
    assert report.first_violation == 2


def test_pair_condition_fails_on_three_step_expansions(new2_third_trace, new2_sqrt2_trace):
    for trace in (new2_third_trace, new2_sqrt2_trace):
        report = check_pair_condition(trace.to_sequence())
        assert not report.holds
        assert report.first_violation == 2


def test_descent_equivalence_examples():
    report = check_descent_equivalence(seq(5, 0, F(1, 5), 2, 3, F(1, 5)))
    assert not report.condition_i and not report.condition_ii
    assert report.first_violation_i == report.first_violation_ii == 2
    short = check_descent_equivalence(seq(5, 2, F(1, 5)))
    assert short.condition_i and short.condition_ii and short.agree


@settings(max_examples=200)
@given(seeds, st.sampled_from([3, 5, 7]))
def test_descent_conditions_agree(seed, p):
    report = check_descent_equivalence(random_pq_sequence(p, 20, seed))
    assert report.agree
    assert report.decrease_agrees
    assert report.descent_restatement_holds
    assert report.descent_monotone_holds
    assert report.seed == seed


@settings(max_examples=50)
@given(seeds)
def test_descent_conditions_hold_in_pair_regime(seed):
    s = random_pq_sequence(5, 20, seed, r=1)
    report = check_descent_equivalence(s)
    assert report.condition_i and report.condition_ii and report.strictly_decreasing


def test_3step_on_new2_trace(new2_sqrt2_trace):
    report = check_3step_hypotheses(new2_sqrt2_trace.to_sequence())
    assert report.hypotheses_hold
    assert report.plateau_holds


def test_3step_side_condition_failures():
    report = check_3step_hypotheses(seq(5, 0, F(1, 5), 2, 2))
    assert report.pattern_holds
    assert not report.conditions_hold
    assert report.violations[0].startswith("triple 0")
    assert not check_3step_hypotheses(seq(5, 1, F(1, 5), 2, 2)).hypotheses_hold


def test_u_sequence():
    u = u_sequence(seq(5, 0, F(1, 5), 2, 3), 2, 2)
    assert u.values == (1, 2, 7)
    u = u_sequence(seq(5, 0, F(1, 5), 2, 2), 2, 2)
    assert u[2] == 5
    assert u_sequence(seq(5, 0, F(1, 5), 2), 2, 0).values == (1,)


def test_u_sequence_range():
    s = seq(5, 0, F(1, 5), 2, 3)
    with pytest.raises(ValueError):
        u_sequence(s, 1, 2)
    with pytest.raises(ValueError):
        u_sequence(s, 2, 3)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_seqden_identity(seed):
    s = random_pq_sequence(7, 23, seed)
    for k in range(11):
        for n in range(2, 13):
            assert verify_seqden(s, k, n)


def test_seqden_detects_tampered_u():
    s = random_pq_sequence(7, 12, seed=3)
    assert verify_seqden(s, 3, 4)
    head = u_sequence(s, 5, 3)
    tampered = USequence(head.m, head.values[:-1] + (head.values[-1] + 1,))
    assert not verify_seqden(s, 3, 4, head=tampered)


@pytest.mark.parametrize("p", [5, 7, 11])
@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_rstep_plateau(p, r):
    s = rstep_example(p, r, 10)
    report = check_rstep_hypotheses(s, r)
    assert report.hypotheses_hold
    assert report.plateau_holds
    assert check_divergence(s, r).drop_in_every_window


def test_rstep_low_r_regimes():
    vB = denominator_valuations(rstep_example(7, 1, 8))
    assert all(b < a for a, b in zip(vB, vB[1:]))
    vB = denominator_valuations(rstep_example(7, 2, 8))
    assert vB[1] == vB[2] > vB[3]


def test_rstep_3_matches_threestep(new2_sqrt2_trace):
    s = new2_sqrt2_trace.to_sequence()
    report = check_rstep_hypotheses(s, 3)
    assert report.threestep_agrees
    assert report.hypotheses_hold == check_3step_hypotheses(s).hypotheses_hold


def test_rstep_4_locates_failing_block():
    report = check_rstep_hypotheses(seq(5, 0, F(1, 5), 2, 2, 1, F(1, 5), 1, 1, 1), 4)
    assert not report.hypotheses_hold
    assert report.plateau_holds is None
    assert any(v.startswith("block 0: U_2^(2)") for v in report.violations)
    assert report.complete_blocks == 2


def test_divergence_of_new2(new2_sqrt2_trace):
    report = check_divergence(new2_sqrt2_trace.to_sequence(), r=3)
    assert report.non_increasing
    assert report.drop_in_every_window


def test_approximation_valuation(new2_third_trace, browkin1_sqrt2_trace):
    assert approximation_valuation(F(1, 3), new2_third_trace.to_sequence(), 3) == np.inf
    s = browkin1_sqrt2_trace.to_sequence()
    vB = denominator_valuations(s)
    for n in range(len(s) - 1):
        assert approximation_valuation(browkin1_sqrt2_trace.input, s, n) == -(vB[n] + vB[n + 1])


@settings(max_examples=50)
@given(seeds)
def test_consecutive_convergent_gaps(seed):
    s = random_pq_sequence(5, 12, seed)
    vB = denominator_valuations(s)
    for n in range(len(s) - 1):
        assert convergent_gap_valuation(s, n, n + 1) == -(vB[n] + vB[n + 1])


def test_metric_identity(browkin1_sqrt2_trace, new2_sqrt2_trace):
    for trace in (browkin1_sqrt2_trace, new2_sqrt2_trace):
        report = check_metric_identity(trace.to_sequence())
        assert report.checked_pairs > 0
        assert report.holds


@pytest.mark.slow
def test_descent_equivalence_corpus():
    for k in range(10 ** 4):
        report = check_descent_equivalence(random_pq_sequence(5 if k % 2 else 7, 20, seed=k))
        assert report.agree and report.decrease_agrees, k


@pytest.mark.slow
@pytest.mark.parametrize("p", [5, 7, 13])
def test_quadratic_corpus_patterns(p):
    from pcf.quadratic import QuadIrr
    from pcf.sampling import quadratic_radicands

    for D in quadratic_radicands(p, 100, seed=p):
        for scheme in (Scheme.NEW1, Scheme.NEW2):
            s = expand(QuadIrr.of(0, 1, D, 1, p), scheme, p, max_steps=60).to_sequence()
            report = check_3step_hypotheses(s)
            assert report.hypotheses_hold and report.plateau_holds, (D, scheme)
            assert check_rstep_hypotheses(s, 3).threestep_agrees
            div = check_divergence(s, r=3)
            assert div.non_increasing and div.drop_in_every_window


def test_incomplete_tail_block_is_ignored():
    s = seq(5, 0, F(1, 5), 2, 1, F(1, 5), 5)
    for report in (check_3step_hypotheses(s), check_rstep_hypotheses(s, 3)):
        assert report.complete_blocks == 1
        assert report.ignored_tail == 2
        assert report.pattern_holds
        assert report.hypotheses_hold
        assert report.violations == []


def test_gap_valuation_with_precomputed_convergents(browkin1_sqrt2_trace):
    s = browkin1_sqrt2_trace.to_sequence()
    conv = convergents(s)
    for m in range(1, len(s)):
        assert convergent_gap_valuation(s, 0, m, conv) == convergent_gap_valuation(s, 0, m)


@pytest.mark.slow
@pytest.mark.parametrize("p", [5, 7, 13])
@pytest.mark.parametrize("scheme", [Scheme.BROWKIN1, Scheme.NEW2])
def test_metric_identity_corpus(p, scheme):
    from pcf.quadratic import QuadIrr
    from pcf.sampling import quadratic_radicands, rational_corpus

    inputs = [QuadIrr.of(0, 1, D, 1, p) for D in quadratic_radicands(p, 100, seed=p)]
    inputs += rational_corpus(100, seed=p)
    for alpha in inputs:
        report = check_metric_identity(expand(alpha, scheme, p, max_steps=60).to_sequence())
        assert report.holds, (alpha, report.violations[:3])
