import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import settings

from treelift.matrix import RingMatrix
from treelift.poly import MultiPoly

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# filled by the acceptance tests, printed at the end of the session
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def to_sympy(x):
    """Convert a weight (int, Fraction or MultiPoly) to a sympy expression."""
    if isinstance(x, MultiPoly):
        out = sympy.Integer(0)
        for exps, c in x.items():
            term = sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else sympy.Integer(c)
            for name, e in zip(x.names, exps):
                term *= sympy.Symbol(name) ** e
            out += term
        return sympy.expand(out)
    x = Fraction(x)
    return sympy.Rational(x.numerator, x.denominator)


def sympy_matrix(m: RingMatrix):
    return sympy.Matrix([[to_sympy(x) for x in row] for row in m.rows])


@pytest.fixture
def rng():
    return random.Random(1234)
