from fractions import Fraction

import pytest

from pcf.quadratic import QuadIrr
from pcf.schemes import Scheme, expand


@pytest.fixture
def sqrt2_q7():
    return QuadIrr.of(0, 1, 2, 1, 7)


@pytest.fixture
def new2_sqrt2_trace(sqrt2_q7):
    return expand(sqrt2_q7, Scheme.NEW2, 7, max_steps=30)


@pytest.fixture
def browkin1_sqrt2_trace(sqrt2_q7):
    return expand(sqrt2_q7, Scheme.BROWKIN1, 7, max_steps=12)


@pytest.fixture
def new2_third_trace():
    return expand(Fraction(1, 3), Scheme.NEW2, 5)
