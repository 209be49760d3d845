import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import sympy_matrix, to_sympy
from strategies import strong_digraphs, weights
from treelift import identities as ident
from treelift.arborescence import tau
from treelift.digraph import Digraph, complete_digraph, cycle_digraph
from treelift.lift import build_lift, lift_matrix, schrodinger_matrix
from treelift.matrix import det, det_one_minus_s, diagonal, identity
from treelift.poly import MultiPoly
from treelift.samples import with_random_chain

F = frozenset
H = Fraction(1, 2)


def uniform_k3():
    return complete_digraph(3, weight=H)


def test_k3_tables():
    g = complete_digraph(3)
    ks = ident.k_table(g)
    assert ks[F({0, 1})] == 2 and ks[F({0})] == 3 and ks[F({0, 1, 2})] == 1
    mt = ident.m_prime(g, ks)
    assert mt == {F({0, 1, 2}): 1, F({0, 1}): 1, F({0, 2}): 1, F({1, 2}): 1, F({0}): 0, F({1}): 0, F({2}): 0}
    assert ident.m_condition_check(g, mt, ks)
    assert ident.negative_exponents(mt) == []


def test_named_phi_values():
    rep = ident.phi_report(complete_digraph(3))
    assert (rep.phi_lift, rep.tau, rep.tau_lift) == (27, 9, 243)
    assert rep.agree
    assert ident.phi_report(cycle_digraph(3, weight="sym")).phi_lift == 1
    rep = ident.phi_report(uniform_k3())
    assert (rep.phi_lift, rep.tau, rep.tau_lift) == (Fraction(27, 64), Fraction(9, 4), Fraction(243, 256))


def test_phi_symbolic_k3():
    g = complete_digraph(3, weight="sym")
    rep = ident.phi_report(g)
    assert rep.agree
    assert ident.phi_check(g)


@settings(max_examples=30)
@given(strong_digraphs(max_n=3))
def test_lift_tree_count_by_enumeration(g):
    # tau of the lift enumerated directly, independent of the minors
    rep = ident.phi_report(g)
    assert rep.agree
    assert tau(build_lift(g).graph) == rep.tau_lift


def test_r_for_uniform_k3():
    g = uniform_k3()
    R = ident.r_polynomial(g)
    s = MultiPoly.var("s")
    assert R == (1 - s * s / 4) ** 3
    assert ident.r_factorization_check(g)
    assert ident.linear_coefficient(R) == 0
    assert ident.phi_r1_check(g, Fraction(27, 64), R)
    assert det_one_minus_s(g.weight_matrix()) == 1 - Fraction(3, 4) * s**2 - Fraction(1, 4) * s**3


@settings(max_examples=25)
@given(strong_digraphs(max_n=3))
def test_r_matches_sympy_quotient(g):
    s = sympy.Symbol("s")
    lift = build_lift(g)
    top = (sympy.eye(lift.graph.n) - s * sympy_matrix(lift_matrix(lift))).det(method="berkowitz")
    bottom = (sympy.eye(g.n) - s * sympy_matrix(g.weight_matrix())).det(method="berkowitz")
    R = ident.r_polynomial(g, lift)
    assert sympy.expand(to_sympy(R) * bottom - top) == 0
    assert ident.r_factorization_check(g, lift)
    assert ident.linear_coefficient_check(g, lift)


def test_zeta_uniform_k3():
    lhs = ident.zeta_series(uniform_k3(), 3)
    assert list(lhs.coeffs) == [1, 0, Fraction(3, 4), Fraction(1, 4)]
    assert ident.zeta_truncated_check(uniform_k3(), 8)


@settings(max_examples=20)
@given(strong_digraphs(max_n=3))
def test_inverse_det_series_matches_sympy(g):
    s = sympy.Symbol("s")
    d = (sympy.eye(g.n) - s * sympy_matrix(g.weight_matrix())).det(method="berkowitz")
    ser = sympy.series(1 / d, s, 0, 5).removeO()
    got = ident.inverse_det_series(g.weight_matrix(), 4)
    assert [to_sympy(c) for c in got.coeffs] == [ser.coeff(s, k) for k in range(5)]


def test_zeta_symbolic_cycle():
    g = cycle_digraph(3, weight="sym")
    assert ident.zeta_truncated_check(g, 6)


@settings(max_examples=25)
@given(strong_digraphs(max_n=4), st.lists(weights, min_size=4, max_size=4))
def test_vertex_weighted_zeta(g, s_values):
    assert ident.vertex_weighted_zeta_check(g, tuple(s_values[: g.n]), 6)


@settings(max_examples=25)
@given(strong_digraphs(max_n=3), st.lists(weights, min_size=3, max_size=3))
def test_sp_formula(g, s_values):
    assert ident.sp_formula_check(g, tuple(s_values[: g.n]))


@given(strong_digraphs(max_n=3), weights)
def test_scalar_s_reduces_to_r(g, c):
    lift = build_lift(g)
    R = ident.r_polynomial(g, lift)
    lhs = det(identity(lift.graph.n) - lift_matrix(lift).scale(c))
    rhs = det(identity(g.n) - g.weight_matrix().scale(c)) * R.evaluate({"s": c})
    assert lhs == rhs


def test_sp_formula_symbolic_weights():
    g = complete_digraph(3, weight="sym")
    assert ident.sp_formula_check(g, (2, Fraction(1, 3), 5))


def test_schrodinger_symbolic():
    y = tuple(MultiPoly.var(f"y_{v}") for v in range(3))
    g = complete_digraph(3, weight="sym").replace(vweights=y)
    assert ident.schrodinger_identity_check(g)


def test_schrodinger_needs_vertex_weights():
    with pytest.raises(ValueError):
        ident.schrodinger_identity_check(complete_digraph(3))


@given(strong_digraphs(max_n=3, vweights=True))
def test_schrodinger_bridge_reproduces_h(g):
    if any(y == 1 for y in g.vweights):
        return
    s_values, chain = ident.schrodinger_bridge(g)
    lhs = identity(g.n) - diagonal(s_values) @ chain.weight_matrix()
    assert lhs == schrodinger_matrix(g)
    assert ident.schrodinger_identity_check(g)


@settings(max_examples=30)
@given(strong_digraphs(max_n=4), st.integers(0, 10**6))
def test_chain_identities(g, seed):
    chain = with_random_chain(g, random.Random(seed))
    assert chain.is_row_stochastic()
    lift = build_lift(chain)
    assert ident.tree_weight_stationarity_check(chain, lift)
    assert ident.tau_from_zeta_derivative(chain)
    R = ident.r_polynomial(chain, lift)
    assert ident.phi_r1_check(chain, ident.phi_via_product(chain), R)


def test_associated_chain():
    g = complete_digraph(3).replace(diag=(1, 0, 0))
    c = ident.associated_chain(g)
    assert c.is_row_stochastic()
    assert c.weight(0, 1) == Fraction(1, 3) and c.weight(1, 0) == H
    with pytest.raises(ValueError):
        ident.associated_chain(complete_digraph(3, weight="sym"))


def test_reserved_variable():
    g = Digraph(2, ((0, 1, MultiPoly.var("s")), (1, 0, 1)))
    with pytest.raises(ValueError):
        ident.r_polynomial(g)


def test_no_negative_exponents_on_small_family():
    from treelift.samples import strongly_connected_family

    for g in strongly_connected_family(3):
        assert ident.negative_exponents(ident.m_prime(g)) == []
