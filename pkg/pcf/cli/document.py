import json
import logging
import re
from fractions import Fraction

import pandas as pd

from pcf.convergence import PQSequence
from pcf.quadratic import QuadIrr
from pcf.schemes import ExpansionTrace, Scheme, Status, Step

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1"
COUNTEREXAMPLE = 'counterexample'

_fraction_re = re.compile(r'^-?\d+(/\d+)?$')
_integer_re = re.compile(r'^-?\d+$')

_document_keys = {'schema_version', 'p', 'algorithm', 'input', 'status', 'preperiod', 'period', 'steps', 'tail',
                  'summary'}
_required_keys = _document_keys - {'summary', 'tail'}
_step_keys = {'n', 'b', 'vp_b', 'vp_alpha', 'A', 'B', 'vp_B', 'alpha'}
_rational_keys = {'kind', 'num', 'den'}
_quadratic_keys = {'kind', 'P', 'Q', 'D', 'R'}


class DocumentError(ValueError):
    pass


def format_fraction(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_fraction(text) -> Fraction:
    if not isinstance(text, str) or not _fraction_re.match(text.strip()):
        raise DocumentError(f"malformed fraction {text!r}")
    q = text.strip()
    if '/' in q:
        num, den = q.split('/')
        if int(den) == 0:
            raise DocumentError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(q))


def parse_fraction_list(text) -> list:
    return [parse_fraction(x) for x in text.split(',')]


def _parse_int(text, what):
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise DocumentError(f"{what}: expected an integer, got {text!r}")
    if isinstance(text, str) and not _integer_re.match(text):
        raise DocumentError(f"{what}: malformed integer {text!r}")
    return int(text)


def _parse_optional_int(value, what):
    return None if value is None else _parse_int(value, what)


def _check_keys(obj, allowed, what, required=None):
    if not isinstance(obj, dict):
        raise DocumentError(f"{what}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise DocumentError(f"{what}: unknown fields {sorted(unknown)}")
    missing = (allowed if required is None else required) - set(obj)
    if missing:
        raise DocumentError(f"{what}: missing fields {sorted(missing)}")


def number_descriptor(x):
    if x is None:
        return None
    if isinstance(x, QuadIrr):
        return {'kind': 'quadratic', 'P': str(x.P), 'Q': str(x.Q), 'D': str(x.D), 'R': str(x.R)}
    x = Fraction(x)
    return {'kind': 'rational', 'num': str(x.numerator), 'den': str(x.denominator)}


def parse_number(desc, p, what='alpha'):
    if desc is None:
        return None
    if not isinstance(desc, dict) or desc.get('kind') not in ('rational', 'quadratic'):
        raise DocumentError(f"{what}: unknown descriptor kind")
    if desc['kind'] == 'rational':
        _check_keys(desc, _rational_keys, what)
        den = _parse_int(desc['den'], what)
        if den <= 0:
            raise DocumentError(f"{what}: denominator must be positive")
        return Fraction(_parse_int(desc['num'], what), den)
    _check_keys(desc, _quadratic_keys, what)
    P, Q, D, R = (_parse_int(desc[k], what) for k in 'PQDR')
    if R == 0:
        raise DocumentError(f"{what}: zero denominator")
    return QuadIrr(P, Q, D, R, p)


def step_record(step: Step) -> dict:
    return {
        'n':        step.n,
        'b':        format_fraction(step.b),
        'vp_b':     step.vp_b,
        'vp_alpha': step.vp_alpha,
        'A':        format_fraction(step.A),
        'B':        format_fraction(step.B),
        'vp_B':     step.vp_B,
        'alpha':    number_descriptor(step.alpha),
        }


def trace_document(trace: ExpansionTrace) -> dict:
    return {
        'schema_version': SCHEMA_VERSION,
        'p':              trace.p,
        'algorithm':      trace.scheme.value,
        'input':          number_descriptor(trace.input),
        'status':         trace.status.kind,
        'preperiod':      trace.status.preperiod,
        'period':         trace.status.period,
        'steps':          [step_record(s) for s in trace.steps],
        'tail':           number_descriptor(trace.tail),
        }


def parse_steps(records, p):
    if not isinstance(records, list):
        raise DocumentError("steps: expected an array")
    steps = []
    for k, r in enumerate(records):
        what = f"steps[{k}]"
        _check_keys(r, _step_keys, what)
        n = _parse_int(r['n'], what)
        if n != k:
            raise DocumentError(f"{what}: index {n} out of order")
        steps.append(Step(n, parse_fraction(r['b']), _parse_optional_int(r['vp_b'], what),
                          parse_number(r['alpha'], p, what), _parse_optional_int(r['vp_alpha'], what),
                          parse_fraction(r['A']), parse_fraction(r['B']), _parse_optional_int(r['vp_B'], what)))
    return steps


def validate_document(doc: dict) -> dict:
    _check_keys(doc, _document_keys, 'document', required=_required_keys)
    if doc['schema_version'] != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema_version {doc['schema_version']!r}")
    _parse_int(doc['p'], 'p')
    if doc['status'] not in (Status.FINITE, Status.PERIODIC, Status.TRUNCATED):
        raise DocumentError(f"unknown status {doc['status']!r}")
    if doc['algorithm'] != COUNTEREXAMPLE:
        try:
            Scheme(doc['algorithm'])
        except ValueError:
            raise DocumentError(f"unknown algorithm {doc['algorithm']!r}")
    return doc


def document_to_trace(doc: dict) -> ExpansionTrace:
    validate_document(doc)
    if doc['algorithm'] == COUNTEREXAMPLE:
        raise DocumentError("a counterexample document holds no expansion")
    p = int(doc['p'])
    steps = parse_steps(doc['steps'], p)
    status = Status(doc['status'], _parse_optional_int(doc['preperiod'], 'preperiod'),
                    _parse_optional_int(doc['period'], 'period'))
    inp = parse_number(doc['input'], p, 'input')
    if inp is None:
        raise DocumentError("input descriptor missing")
    return ExpansionTrace(p, Scheme(doc['algorithm']), inp, steps, status, parse_number(doc.get('tail'), p, 'tail'))


def document_to_sequence(doc: dict) -> PQSequence:
    validate_document(doc)
    p = int(doc['p'])
    try:
        return PQSequence(p, tuple(s.b for s in parse_steps(doc['steps'], p)))
    except ValueError as e:
        raise DocumentError(str(e))


def loads(text) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"invalid JSON: {e}")
    return validate_document(doc)


def dumps(doc) -> str:
    return json.dumps(doc, indent=2)


def steps_table(doc: dict) -> pd.DataFrame:
    """Tabular view of a document's steps with the same numeric content as its JSON form."""
    rows = []
    for s in doc['steps']:
        row = {k: s[k] for k in ('n', 'b', 'vp_b', 'vp_alpha', 'A', 'B', 'vp_B')}
        row['alpha'] = describe(s['alpha'])
        rows.append(row)
    df = pd.DataFrame(rows, columns=['n', 'b', 'vp_b', 'vp_alpha', 'A', 'B', 'vp_B', 'alpha'])
    for col in ('n', 'vp_b', 'vp_alpha', 'vp_B'):
        df[col] = df[col].astype('Int64')
    return df


def describe(desc) -> str:
    if desc is None:
        return '-'
    if desc['kind'] == 'rational':
        return desc['num'] if desc['den'] == '1' else f"{desc['num']}/{desc['den']}"
    return f"({desc['P']}{int(desc['Q']):+d}*sqrt({desc['D']}))/{desc['R']}"


def render_table(doc: dict) -> str:
    head = [f"p={doc['p']}  algorithm={doc['algorithm']}  input={describe(doc['input'])}",
            f"status={doc['status']}  preperiod={doc['preperiod']}  period={doc['period']}"]
    if doc.get('tail') is not None:
        head.append(f"tail={describe(doc['tail'])}")
    lines = head + ['', steps_table(doc).to_string(index=False)]
    if doc.get('summary'):
        lines += [''] + [f"{k}: {v}" for k, v in doc['summary'].items()]
    return '\n'.join(lines)
