import logging
import os
import sys
from fractions import Fraction

import enlighten
import pandas as pd

from pcf.arith import balanced_digits, from_digits, padic_abs
from pcf.convergence import (check_3step_hypotheses, check_descent_equivalence, check_divergence,
                             check_metric_identity, check_rstep_hypotheses, verify_seqden)
from pcf.counterexample import build_counterexample, certify_bounded, valuation_schedule_holds
from pcf.quadratic import QuadIrr, hensel_sqrt
from pcf.sampling import quadratic_radicands, random_pq_sequence, rational_corpus, rstep_example
from pcf.schemes import Scheme, Status, check_descent, evaluate, expand, verify_trace
from pcf.utils import ensure_dir, timeit

logger = logging.getLogger('batch')
logger.setLevel(logging.DEBUG)

SEED = 20200128
out_path = os.path.abspath('acceptance')


def _counter(manager, total, desc):
    return manager.counter(total=total, desc=desc, unit='runs', leave=False)


@timeit
def rational_finiteness(manager, n_inputs=1000, primes=(5, 7, 11), max_steps=500):
    inputs = rational_corpus(n_inputs, SEED)
    rows = []
    schemes = (Scheme.NEW2, Scheme.BROWKIN1, Scheme.BROWKIN2)
    bar = _counter(manager, len(inputs) * len(primes) * len(schemes), 'Rational finiteness')
    for p in primes:
        for scheme in schemes:
            for q in inputs:
                t = expand(q, scheme, p, max_steps=max_steps)
                finite = t.status.kind == Status.FINITE
                rows.append({
                    'p':          p,
                    'scheme':     scheme.value,
                    'input':      str(q),
                    'status':     t.status.kind,
                    'steps':      len(t.steps),
                    'evaluates':  finite and evaluate(t.quotients) == q,
                    'violations': len(verify_trace(t)),
                    'descent':    len(check_descent(t)) if scheme is Scheme.NEW2 else 0,
                    })
                bar.update()
    bar.close()
    return pd.DataFrame(rows)


@timeit
def quadratic_patterns(manager, n_radicands=100, primes=(5, 7, 13), n_quotients=60):
    rows = []
    bar = _counter(manager, n_radicands * len(primes) * 2, 'Quadratic patterns')
    for p in primes:
        for D in quadratic_radicands(p, n_radicands, SEED + p):
            for scheme in (Scheme.NEW1, Scheme.NEW2):
                t = expand(QuadIrr.of(0, 1, D, 1, p), scheme, p, max_steps=n_quotients)
                seq = t.to_sequence()
                three = check_3step_hypotheses(seq)
                div = check_divergence(seq, r=3)
                rows.append({
                    'p':          p,
                    'D':          D,
                    'scheme':     scheme.value,
                    'status':     t.status.kind,
                    'quotients':  len(seq),
                    'violations': len(verify_trace(t)),
                    'hypotheses': three.hypotheses_hold,
                    'plateau':    three.plateau_holds,
                    'rstep3':     check_rstep_hypotheses(seq, 3).threestep_agrees,
                    'monotone':   div.non_increasing and div.drop_in_every_window,
                    'metric':     check_metric_identity(seq).holds,
                    })
                bar.update()
    bar.close()
    return pd.DataFrame(rows)


@timeit
def metric_identity(manager, n_inputs=100, primes=(5, 7, 13), n_quotients=60):
    rows = []
    schemes = (Scheme.BROWKIN1, Scheme.NEW2)
    bar = _counter(manager, 2 * n_inputs * len(primes) * len(schemes), 'Metric identity')
    for p in primes:
        inputs = [QuadIrr.of(0, 1, D, 1, p) for D in quadratic_radicands(p, n_inputs, SEED + p)]
        inputs += rational_corpus(n_inputs, SEED + p)
        for scheme in schemes:
            for alpha in inputs:
                t = expand(alpha, scheme, p, max_steps=n_quotients)
                report = check_metric_identity(t.to_sequence())
                rows.append({
                    'p':          p,
                    'scheme':     scheme.value,
                    'input':      str(alpha),
                    'pairs':      report.checked_pairs,
                    'violations': len(report.violations),
                    })
                bar.update()
    bar.close()
    return pd.DataFrame(rows)


@timeit
def descent_equivalence(manager, n_sequences=10 ** 4, length=20, primes=(5, 7)):
    rows = []
    bar = _counter(manager, n_sequences, 'Descent equivalence')
    for k in range(n_sequences):
        p = primes[k % len(primes)]
        report = check_descent_equivalence(random_pq_sequence(p, length, seed=SEED + k))
        rows.append({'p': p, **report.to_dict()})
        bar.update()
    bar.close()
    return pd.DataFrame(rows)


@timeit
def counterexamples(manager, primes=(5, 7, 11, 13), n_blocks=100):
    rows = []
    bar = _counter(manager, len(primes), 'Counterexample')
    for p in primes:
        seq = build_counterexample(p, n_blocks)
        three = check_3step_hypotheses(seq)
        rows.append({
            'p':         p,
            'blocks':    n_blocks,
            'min_vp_B':  check_divergence(seq).min_vp_B,
            'certified': certify_bounded(seq, -1),
            'pattern':   three.pattern_holds,
            'side':      three.conditions_hold,
            'schedule':  valuation_schedule_holds(seq),
            })
        bar.update()
    bar.close()
    return pd.DataFrame(rows)


@timeit
def seqden_identity(manager, n_sequences=500, max_k=10, max_n=12, p=7):
    rows = []
    bar = _counter(manager, n_sequences, 'U-sequence identity')
    for k in range(n_sequences):
        seq = random_pq_sequence(p, max_k + max_n + 1, seed=SEED + k)
        bad = [(kk, nn) for kk in range(max_k + 1) for nn in range(2, max_n + 1) if not verify_seqden(seq, kk, nn)]
        rows.append({'seed': seq.seed, 'failures': len(bad)})
        bar.update()
    bar.close()
    return pd.DataFrame(rows)


@timeit
def rstep_plateaus(manager, primes=(5, 7, 11), n_blocks=20):
    rows = []
    bar = _counter(manager, len(primes) * 4, 'r-step plateaus')
    for p in primes:
        for r in (1, 2, 3, 4):
            report = check_rstep_hypotheses(rstep_example(p, r, n_blocks), r)
            rows.append({'p': p, 'r': r, 'hypotheses': report.hypotheses_hold, 'plateau': report.plateau_holds})
            bar.update()
    bar.close()
    return pd.DataFrame(rows)


@timeit
def hensel_oracle(manager, primes=(5, 7, 11), n_rationals=10 ** 4, precision=20):
    rows = []
    bar = _counter(manager, len(primes), 'Hensel oracle')
    for p in primes:
        mod = p ** 3
        squares = {}
        for x in range(mod):
            squares.setdefault(x * x % mod, set()).add(x)
        mismatches = 0
        for D in range(1, mod):
            if D % p == 0 or D not in squares:
                continue
            x = hensel_sqrt(D, p, 3)
            if x not in squares[D] or not 1 <= x % p <= (p - 1) // 2:
                mismatches += 1
        rows.append({'p': p, 'check': 'hensel', 'mismatches': mismatches})
        bar.update()
    bar.close()

    failures = 0
    for q in rational_corpus(n_rationals, SEED):
        p = primes[q.numerator % len(primes)]
        w = balanced_digits(q, p, precision)
        rest = q - from_digits(w)
        if padic_abs(rest, p) > Fraction(p) ** -(w.start + precision):
            failures += 1
    rows.append({'p': None, 'check': 'digits', 'mismatches': failures})
    return pd.DataFrame(rows)


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO, stream=sys.stderr)
    logging.getLogger('timeit').setLevel(logging.DEBUG)
    pd.set_option('display.width', 320)
    pd.set_option('display.max_columns', 20)

    ensure_dir(out_path)
    manager = enlighten.get_manager()
    times = dict()
    runs = {
        'rational_finiteness': rational_finiteness,
        'quadratic_patterns':  quadratic_patterns,
        'metric_identity':     metric_identity,
        'descent_equivalence': descent_equivalence,
        'counterexample':      counterexamples,
        'seqden_identity':     seqden_identity,
        'rstep_plateaus':      rstep_plateaus,
        'hensel_oracle':       hensel_oracle,
        }
    for name, run in runs.items():
        logger.info(f"Running {name}.")
        df = run(manager, log_time=times, log_name=name)
        df.to_csv(os.path.join(out_path, f"{name}.csv"), index=False)
        logger.info(f"{name}: {len(df)} rows in {times[name]} ms.")
    manager.stop()
