from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import sympy_matrix, to_sympy
from treelift.matrix import (
    RingMatrix,
    charpoly,
    cofactor_det,
    det,
    det_one_minus_s,
    diagonal,
    identity,
    minor_matrix,
    restrict,
)
from treelift.poly import MultiPoly

rationals = st.fractions(min_value=-9, max_value=9, max_denominator=5)


def square(elements, max_n=5):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(elements, min_size=n, max_size=n), min_size=n, max_size=n)
    ).map(RingMatrix)


X = [MultiPoly.var(v) for v in ("x", "y", "z")]
small_polys = st.builds(
    lambda a, b, c, k: a * X[0] + b * X[1] * X[2] + c + k * X[k % 3] ** 2,
    st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 2),
)


def test_empty_and_identity():
    assert det(RingMatrix([])) == 1
    assert det(identity(4)) == 1
    assert det(diagonal([2, Fraction(1, 2), 3])) == 3


def test_known_determinants():
    assert det(RingMatrix([[1, 2], [3, 4]])) == -2
    assert det(RingMatrix([[0, 1], [1, 0]])) == -1
    assert det(RingMatrix([[1, 2], [2, 4]])) == 0
    assert det(RingMatrix([[Fraction(1, 2), 1], [1, 3]])) == Fraction(1, 2)


@given(square(st.integers(-20, 20), max_n=6))
def test_integer_bareiss_matches_leibniz(m):
    assert det(m) == cofactor_det(m)


@given(square(rationals))
def test_rational_det_matches_leibniz(m):
    assert det(m) == cofactor_det(m)


@given(square(small_polys, max_n=3))
def test_symbolic_det_matches_sympy(m):
    assert sympy.expand(to_sympy(det(m)) - sympy_matrix(m).det(method="berkowitz")) == 0


@given(square(small_polys, max_n=4), st.tuples(rationals, rationals, rationals))
def test_det_commutes_with_evaluation(m, point):
    pt = dict(zip(("x", "y", "z"), point))
    ev = m.map(lambda e: e.evaluate(pt) if isinstance(e, MultiPoly) else e)
    d = det(m)
    d = d.evaluate(pt) if isinstance(d, MultiPoly) else d
    assert d == det(ev)


@given(square(rationals, max_n=6))
def test_charpoly_matches_sympy(m):
    x = sympy.Symbol("x")
    want = sympy.Poly(sympy_matrix(m).charpoly(x).as_expr(), x).all_coeffs()[::-1]
    got = charpoly(m)
    assert [to_sympy(c) for c in got] == want


@given(square(rationals, max_n=6))
def test_charpoly_route_agrees_with_bareiss(m):
    # the rational path uses the characteristic polynomial; the symbolic one eliminates
    s = MultiPoly.var("s")
    via_bareiss = det(identity(m.labels) - m.scale(s))
    assert det_one_minus_s(m) == via_bareiss


def test_det_one_minus_s_symbolic():
    x, y = MultiPoly.var("x"), MultiPoly.var("y")
    s = MultiPoly.var("s")
    m = RingMatrix([[0, x], [y, 0]])
    assert det_one_minus_s(m) == 1 - s * s * x * y


def test_minors_and_restriction():
    m = RingMatrix([[1, 2, 3], [4, 5, 6], [7, 8, 10]], labels=("a", "b", "c"))
    sub = minor_matrix(m, ["b"])
    assert sub.labels == ("a", "c")
    assert sub.rows == ((1, 3), (7, 10))
    assert restrict(m, {"a", "c"}) == sub
    with pytest.raises(KeyError):
        minor_matrix(m, ["q"])


def test_matrix_algebra():
    a = RingMatrix([[1, 2], [3, 4]])
    b = RingMatrix([[0, 1], [1, 0]])
    assert (a @ b) == RingMatrix([[2, 1], [4, 3]])
    assert (a + b) - b == a
    assert a.trace() == 5
    assert a.scale(2) == RingMatrix([[2, 4], [6, 8]])


def test_shape_errors():
    with pytest.raises(ValueError):
        RingMatrix([[1, 2]])
    with pytest.raises(ValueError):
        RingMatrix([[1]], labels=("a", "b"))
