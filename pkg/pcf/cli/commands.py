import argparse
import logging
import sys

import pandas as pd

from pcf.arith import require_odd_prime, valuation
from pcf.cli import document as doc
from pcf.convergence import (PQSequence, check_3step_hypotheses, check_descent_equivalence, check_divergence,
                             check_pair_condition, check_rstep_hypotheses, convergents, verify_seqden)
from pcf.counterexample import build_counterexample_run, certify_bounded, valuation_schedule_holds
from pcf.errors import NoSquareRoot, PadicError
from pcf.quadratic import QuadIrr, digits_of, is_padic_square, sqrt_approx
from pcf.schemes import DEFAULT_MAX_STEPS, Scheme, Status, expand, verify_trace

logger = logging.getLogger('pcf.cli')

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_INPUT = 2
EXIT_TRUNCATED = 3

CONDITIONS = ('pair', 'threestep', 'rstep', 'seqden', 'descent', 'divergence')
VALUE_FLAGS = ('--rational', '--quad', '--b', '--d')


class UsageError(ValueError):
    pass


def _fail(message, code=EXIT_INPUT):
    print(f"error: {message}", file=sys.stderr)
    return code


def _emit(args, document, table):
    if args.format == 'json':
        print(doc.dumps(document))
    else:
        print(table)


def _report_table(document):
    rows = [(k, v) for k, v in document.items() if k != 'report']
    rows += [(k, v) for k, v in document.get('report', {}).items()]
    return pd.DataFrame(rows, columns=['field', 'value']).to_string(index=False)


def parse_quad(text, p):
    parts = text.split(',')
    if len(parts) != 4:
        raise UsageError(f"--quad expects P,Q,D,R, got {text!r}")
    try:
        P, Q, D, R = (int(x) for x in parts)
    except ValueError:
        raise UsageError(f"--quad expects four integers, got {text!r}")
    if R == 0:
        raise UsageError("R must be nonzero")
    return QuadIrr.of(P, Q, D, R, p)


def cmd_expand(args):
    try:
        scheme = Scheme.from_tag(args.alg)
        require_odd_prime(args.p, scheme.min_prime)
        if args.max_steps < 1:
            raise UsageError("--max-steps must be positive")
        if args.rational is not None:
            alpha = doc.parse_fraction(args.rational)
        else:
            alpha = parse_quad(args.quad, args.p)
            if args.branch == 'minus':
                alpha = alpha.conjugate()
    except ValueError as e:
        return _fail(str(e))

    try:
        trace = expand(alpha, scheme, args.p, max_steps=args.max_steps)
    except PadicError as e:
        return _fail(str(e))
    violations = verify_trace(trace)
    if violations:
        logger.warning(f"trace failed verification: {violations[:3]}")
    document = doc.trace_document(trace)
    _emit(args, document, doc.render_table(document))
    return EXIT_TRUNCATED if trace.status.kind == Status.TRUNCATED else EXIT_OK


def _load_sequence(args) -> PQSequence:
    if args.trace is not None:
        with open(args.trace) as fh:
            return doc.document_to_sequence(doc.loads(fh.read()))
    if args.b is None:
        raise UsageError("one of --trace or --b is required")
    if args.p is None:
        raise UsageError("--p is required with --b")
    require_odd_prime(args.p)
    return PQSequence(args.p, tuple(doc.parse_fraction_list(args.b)))


def _seqden_report(seq, k, n):
    if k is not None and n is not None:
        pairs = [(k, n)]
    else:
        pairs = [(kk, nn) for kk in range(0, len(seq) - 2) for nn in range(2, len(seq) - kk)]
    bad = [(kk, nn) for kk, nn in pairs if not verify_seqden(seq, kk, nn)]
    return {'checked': len(pairs), 'holds': not bad, 'first_violation': list(bad[0]) if bad else None}


def evaluate_condition(condition, seq, r=None, k=None, n=None):
    """:return: (holds, report dict)"""
    if condition == 'pair':
        report = check_pair_condition(seq)
        return report.holds, report.to_dict()
    if condition == 'threestep':
        report = check_3step_hypotheses(seq)
        return report.hypotheses_hold and report.plateau_holds is not False, report.to_dict()
    if condition == 'rstep':
        if r is None or r < 1:
            raise UsageError("--r >= 1 is required for the rstep condition")
        report = check_rstep_hypotheses(seq, r)
        return report.hypotheses_hold and report.plateau_holds is not False, report.to_dict()
    if condition == 'seqden':
        report = _seqden_report(seq, k, n)
        return report['holds'], report
    if condition == 'descent':
        report = check_descent_equivalence(seq)
        return report.condition_i and report.condition_ii, report.to_dict()
    if condition == 'divergence':
        report = check_divergence(seq, r)
        return report.non_increasing and report.drop_in_every_window is not False, report.to_dict()
    raise UsageError(f"unknown condition {condition!r}")


def cmd_check(args):
    try:
        seq = _load_sequence(args)
        holds, report = evaluate_condition(args.condition, seq, r=args.r, k=args.k, n=args.n)
    except (ValueError, OSError) as e:
        return _fail(str(e))

    document = {'schema_version': doc.SCHEMA_VERSION, 'p': seq.p, 'condition': args.condition,
                'length': len(seq), 'holds': holds, 'report': report}
    _emit(args, document, _report_table(document))
    return EXIT_OK if holds else EXIT_VIOLATED


def counterexample_document(p, blocks, bound=-1) -> dict:
    run = build_counterexample_run(p, blocks)
    seq = run.sequence
    conv = convergents(seq)
    steps = []
    for n, (b, (A, B)) in enumerate(zip(seq.b, conv)):
        steps.append({'n': n, 'b': doc.format_fraction(b), 'vp_b': None if b == 0 else seq.vp(n), 'vp_alpha': None,
                      'A': doc.format_fraction(A), 'B': doc.format_fraction(B),
                      'vp_B': _vp(B, p), 'alpha': None})
    vp_B = [s['vp_B'] for s in steps]
    three = check_3step_hypotheses(seq)
    summary = {
        'blocks':               blocks,
        'bound':                bound,
        'min_vp_B':             min(vp_B),
        'certified':            certify_bounded(seq, bound),
        'pattern_holds':        three.pattern_holds,
        'side_condition_holds': three.conditions_hold,
        'pair_condition_holds': check_pair_condition(seq).holds,
        'schedule_holds':       valuation_schedule_holds(seq),
        'divisible_branches':   sum(1 for c in run.blocks if c.branch == 'divisible'),
        }
    return {'schema_version': doc.SCHEMA_VERSION, 'p': p, 'algorithm': doc.COUNTEREXAMPLE, 'input': None,
            'status': Status.TRUNCATED, 'preperiod': None, 'period': None, 'steps': steps, 'tail': None,
            'summary': summary}


def _vp(x, p):
    return None if x == 0 else valuation(x, p)


def cmd_counterexample(args):
    try:
        require_odd_prime(args.p)
        if args.blocks < 1:
            raise UsageError("--blocks must be >= 1")
    except ValueError as e:
        return _fail(str(e))
    document = counterexample_document(args.p, args.blocks, args.bound)
    _emit(args, document, doc.render_table(document))
    return EXIT_OK if document['summary']['certified'] else EXIT_VIOLATED


def cmd_sqrt(args):
    try:
        require_odd_prime(args.p)
        if args.precision < 1:
            raise UsageError("--precision must be positive")
        if args.d == 0:
            raise UsageError("D must be nonzero")
    except ValueError as e:
        return _fail(str(e))
    try:
        if not is_padic_square(args.d, args.p):
            raise NoSquareRoot(args.d, args.p)
        window = digits_of(QuadIrr(0, 1, args.d, 1, args.p), args.precision)
        residue = sqrt_approx(args.d, args.p, args.precision)
    except NoSquareRoot as e:
        return _fail(f"{e} (D={args.d}, p={args.p})", EXIT_VIOLATED)
    except PadicError as e:
        return _fail(str(e))

    modulus = args.p ** (args.precision + window.start)
    document = {'schema_version': doc.SCHEMA_VERSION, 'p': args.p, 'D': str(args.d), 'start': window.start,
                'digits': list(window.digits), 'residue': str(residue % modulus), 'modulus': str(modulus)}
    table = (f"p={args.p}  D={args.d}  start={window.start}\n"
             f"digits={list(window.digits)}\n"
             f"residue={document['residue']} mod {document['modulus']}")
    _emit(args, document, table)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog='pcf', description='p-adic continued fraction expansions and checks.')
    parser.add_argument('-v', '--verbose', action='store_true', help='debug logging on standard error')
    sub = parser.add_subparsers(dest='command', required=True)

    def common(p):
        p.add_argument('--format', choices=['json', 'table'], default='table')

    e = sub.add_parser('expand', help='expand a rational or quadratic irrational')
    e.add_argument('--p', type=int, required=True)
    e.add_argument('--alg', required=True, choices=[s.value for s in Scheme])
    src = e.add_mutually_exclusive_group(required=True)
    src.add_argument('--rational', help='"a/b"')
    src.add_argument('--quad', help='"P,Q,D,R" for (P + Q*sqrt(D))/R')
    e.add_argument('--max-steps', type=int, default=DEFAULT_MAX_STEPS)
    e.add_argument('--branch', choices=['plus', 'minus'], default='plus',
                   help='square root branch; plus is the root whose first balanced digit lies in 1..(p-1)/2')
    common(e)
    e.set_defaults(func=cmd_expand)

    c = sub.add_parser('check', help='check a convergence condition on partial quotients')
    c.add_argument('--condition', required=True, choices=CONDITIONS)
    c.add_argument('--r', type=int)
    c.add_argument('--k', type=int)
    c.add_argument('--n', type=int)
    c.add_argument('--p', type=int)
    c.add_argument('--trace', help='trace document (JSON)')
    c.add_argument('--b', help='"b0,b1,..."')
    common(c)
    c.set_defaults(func=cmd_check)

    x = sub.add_parser('counterexample', help='bounded-denominator non-convergent sequence')
    x.add_argument('--p', type=int, required=True)
    x.add_argument('--blocks', type=int, required=True)
    x.add_argument('--bound', type=int, default=-1)
    common(x)
    x.set_defaults(func=cmd_counterexample)

    s = sub.add_parser('sqrt', help='digits of the canonical square root of D in Q_p')
    s.add_argument('--p', type=int, required=True)
    s.add_argument('--d', type=int, required=True)
    s.add_argument('--precision', type=int, required=True)
    common(s)
    s.set_defaults(func=cmd_sqrt)
    return parser


def attach_values(argv):
    """Joins `--flag value` into `--flag=value` for flags whose values may start with a minus sign."""
    out = []
    it = iter(argv)
    for arg in it:
        if arg in VALUE_FLAGS:
            value = next(it, None)
            out.append(arg if value is None else f"{arg}={value}")
        else:
            out.append(arg)
    return out


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(attach_values(sys.argv[1:] if argv is None else argv))
    if not logging.getLogger().handlers:
        logging.basicConfig(level=logging.WARNING, stream=sys.stderr)
    if args.verbose:
        for name in ('pcf', 'counterexample', 'timeit'):
            logging.getLogger(name).setLevel(logging.DEBUG)
    return args.func(args)
