"""Identities relating a digraph to its spanning tree graph.

Conventions: ``M`` is the weight matrix of G (edge weights off the diagonal,
the graph's diagonal on it; P for a Markov chain) and ``M_hat`` the same for
the lift.  Products with integer exponents that may be negative are compared
cross-multiplied, never divided out.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arborescence import k_count, laplacian, psi_sum, tau
from .checks import CheckResult
from .digraph import closed_walk_support_sums, is_strongly_connected, strongly_connected_subsets, walk_totals
from .lift import build_lift, lift_diagonal, lift_matrix, lift_schrodinger, schrodinger_matrix
from .matrix import det, det_one_minus_s, diagonal, identity, minor_matrix, restrict
from .poly import MultiPoly, poly_div_exact, simplify
from .series import DEFAULT_ORDER, TruncatedSeries, series_derivative, series_exp, series_inverse

S = "s"


def _require_sc(g):
    if not is_strongly_connected(g):
        raise ValueError("graph is not strongly connected")


def _full(g):
    return frozenset(range(g.n))


# m' recursion ---------------------------------------------------------------


def k_table(g, subsets=None):
    subsets = strongly_connected_subsets(g) if subsets is None else subsets
    return {W: k_count(g, W) for W in subsets}


def m_prime(g, ks=None):
    """m'(V) = 1 and m'(W) = k(W) - sum of m' over strongly connected strict supersets."""
    _require_sc(g)
    subsets = strongly_connected_subsets(g)
    ks = k_table(g, subsets) if ks is None else ks
    full = _full(g)
    m = {}
    for W in subsets:  # size-descending, so supersets come first
        if W == full:
            m[W] = 1
        else:
            m[W] = ks[W] - sum(v for U, v in m.items() if W < U)
    return m


def m_condition_check(g, mtable=None, ks=None):
    """k(W) - 1 = sum of m'(W') over proper strongly connected W' containing W."""
    ks = k_table(g) if ks is None else ks
    mtable = m_prime(g, ks) if mtable is None else mtable
    full = _full(g)
    for W in mtable:
        if W == full:
            continue
        rhs = sum(v for U, v in mtable.items() if W <= U and U != full)
        if ks[W] - 1 != rhs:
            return CheckResult("m-condition", False, witness={"W": sorted(W), "k-1": ks[W] - 1, "sum": rhs})
    return CheckResult("m-condition", True, values={"subsets": len(mtable)})


def negative_exponents(mtable):
    """Strongly connected sets whose m' is negative (reported as findings)."""
    return [sorted(W) for W, v in mtable.items() if v < 0]


def _proper(g, mtable):
    full = _full(g)
    return [(W, v) for W, v in mtable.items() if W != full and v != 0]


def _power_product(factors):
    """Split ``[(value, exponent)]`` into numerator and denominator products."""
    num, den = 1, 1
    for value, e in factors:
        if e > 0:
            for _ in range(e):
                num = num * value
        elif e < 0:
            for _ in range(-e):
                den = den * value
    return simplify(num), simplify(den)


def _cross_equal(lhs, factors):
    """lhs == prod value**exponent, compared as lhs * den == num."""
    num, den = _power_product(factors)
    return simplify(lhs * den) == num, num, den


# Phi --------------------------------------------------------------------------


@dataclass
class PhiReport:
    phi_lift: object
    phi_product: object
    phi_minor: tuple
    tau: object
    tau_lift: object

    @property
    def minors_agree(self):
        return all(p == self.phi_minor[0] for p in self.phi_minor)

    @property
    def agree(self):
        return self.minors_agree and self.phi_lift == self.phi_product == self.phi_minor[0]


def lift_minors(lift):
    """det of the lift Laplacian with row and column t removed, for every lift vertex t."""
    lap = laplacian(lift.graph)
    return [det(minor_matrix(lap, (t,))) for t in range(lift.graph.n)]


def phi_via_lift(g, lift=None, minors=None):
    """tau(lift) / tau(G), with tau(lift) summed from the lift's Laplacian minors."""
    lift = build_lift(g) if lift is None else lift
    minors = lift_minors(lift) if minors is None else minors
    tl = 0
    for d in minors:
        tl = tl + d
    return poly_div_exact(simplify(tl), tau(g))


def phi_via_product(g, mtable=None):
    """Product over proper strongly connected W of Psi(V - W) ** m'(W)."""
    mtable = m_prime(g) if mtable is None else mtable
    full = _full(g)
    factors = [(psi_sum(g, full - W), e) for W, e in _proper(g, mtable)]
    num, den = _power_product(factors)
    return poly_div_exact(num, den)


def phi_via_minor(g, lift=None, minors=None):
    """det(L_hat minor at t) / w(t) for every lift vertex t."""
    lift = build_lift(g) if lift is None else lift
    minors = lift_minors(lift) if minors is None else minors
    return tuple(poly_div_exact(d, t.weight(g)) for d, t in zip(minors, lift.trees))


def phi_report(g, lift=None, mtable=None):
    _require_sc(g)
    lift = build_lift(g) if lift is None else lift
    minors = lift_minors(lift)
    tl = 0
    for d in minors:
        tl = tl + d
    return PhiReport(
        phi_lift=phi_via_lift(g, lift, minors),
        phi_product=phi_via_product(g, mtable),
        phi_minor=phi_via_minor(g, lift, minors),
        tau=tau(g),
        tau_lift=simplify(tl),
    )


def phi_check(g, lift=None, mtable=None):
    rep = phi_report(g, lift, mtable)
    values = {"phi": rep.phi_lift, "tau": rep.tau, "tau_lift": rep.tau_lift}
    if rep.agree:
        return CheckResult("phi", True, values=values)
    bad = next((k for k, p in enumerate(rep.phi_minor) if p != rep.phi_lift), None)
    return CheckResult(
        "phi",
        False,
        values=values,
        witness={
            "phi_lift": rep.phi_lift,
            "phi_product": rep.phi_product,
            "lift_vertex": bad,
            "phi_minor": None if bad is None else rep.phi_minor[bad],
        },
    )


# R(s) ---------------------------------------------------------------------------


def _guard_var(g):
    if S in g.variables():
        raise ValueError(f"graph uses the reserved variable {S!r}")


def r_polynomial(g, lift=None):
    """det(I - s M_hat) / det(I - s M) as an exact polynomial in s."""
    _guard_var(g)
    lift = build_lift(g) if lift is None else lift
    top = det_one_minus_s(lift_matrix(lift), S)
    bottom = det_one_minus_s(g.weight_matrix(), S)
    q = poly_div_exact(top, bottom)
    return q if isinstance(q, MultiPoly) else MultiPoly.const(q, (S,))


def r_factors(g, mtable):
    """``[(det((I - sM) restricted to W), m'(W))]`` over proper strongly connected W."""
    m = g.weight_matrix()
    return [(det_one_minus_s(restrict(m, W), S), e) for W, e in _proper(g, mtable)]


def r_factorization_check(g, lift=None, mtable=None, R=None):
    """R(s) against the product of principal minors of I - sM; also R(0) = 1."""
    mtable = m_prime(g) if mtable is None else mtable
    R = r_polynomial(g, lift) if R is None else R
    ok, num, den = _cross_equal(R, r_factors(g, mtable))
    r0 = R.substitute({S: 0}).constant_term()
    values = {"R": R, "degree": R.degree(S)}
    if ok and r0 == 1:
        return CheckResult("r-factorization", True, values=values)
    return CheckResult(
        "r-factorization",
        False,
        values=values,
        witness={"R": R, "product_num": num, "product_den": den, "R(0)": r0},
    )


def linear_coefficient(R):
    c = R.coefficients(S)
    return c[1] if len(c) > 1 else 0


def linear_coefficient_check(g, lift=None, R=None):
    """Coefficient of s in R equals trace(M) - trace(M_hat)."""
    lift = build_lift(g) if lift is None else lift
    R = r_polynomial(g, lift) if R is None else R
    got = simplify(linear_coefficient(R))
    want = simplify(g.weight_matrix().trace() - lift_matrix(lift).trace())
    ok = got == want
    return CheckResult(
        "linear-coefficient",
        ok,
        values={"coefficient": got},
        witness={} if ok else {"coefficient": got, "trace_difference": want},
    )


def phi_r1_check(g, phi, R):
    """For a row-stochastic chain, R(1) equals Phi."""
    r1 = R.substitute({S: 1})
    r1 = simplify(r1)
    ok = r1 == phi
    return CheckResult("phi-r1", ok, values={"R(1)": r1}, witness={} if ok else {"R(1)": r1, "phi": phi})


def tau_from_zeta_derivative(g):
    """d/ds det(I - sP) at s = 1 equals -tau(G) for a row-stochastic chain."""
    if not g.is_row_stochastic():
        raise ValueError("needs row-stochastic weights plus diagonal")
    c = det_one_minus_s(g.weight_matrix(), S)
    d = simplify(c.derivative(S).substitute({S: 1}))
    t = tau(g)
    ok = d == -t
    return CheckResult(
        "tau-zeta-derivative", ok, values={"derivative": d, "tau": t},
        witness={} if ok else {"derivative": d, "tau": t},
    )


# zeta series ---------------------------------------------------------------------


def _exponent_series(table, order):
    tot = walk_totals(table, order)
    return TruncatedSeries([0] + [poly_div_exact(tot[n], n) if tot[n] != 0 else 0 for n in range(1, order + 1)], order)


def zeta_series(g, order=DEFAULT_ORDER):
    """exp(sum_n s^n/n * total closed-walk weight of length n), truncated."""
    table = closed_walk_support_sums(g, order)
    return series_exp(_exponent_series(table, order))


def inverse_det_series(m, order=DEFAULT_ORDER, var=S):
    """Expansion of 1/det(I - var*m)."""
    return series_inverse(TruncatedSeries.from_poly(det_one_minus_s(m, var), var, order))


def zeta_truncated_check(g, order=DEFAULT_ORDER):
    _guard_var(g)
    lhs = zeta_series(g, order)
    rhs = inverse_det_series(g.weight_matrix(), order)
    k = lhs.mismatch(rhs)
    return CheckResult(
        "zeta-series",
        k is None,
        values={"order": order, "series": list(lhs.coeffs)},
        witness={} if k is None else {"index": k, "walks": lhs[k], "determinant": rhs[k]},
    )


def scaled_graph(g, s_values):
    """Weights s_u * w(u, v) and diagonal s_u * d_u (the graph of S M)."""
    return g.replace(
        edges=tuple((u, v, simplify(s_values[u] * w)) for u, v, w in g.edges),
        diag=tuple(simplify(s_values[u] * d) for u, d in enumerate(g.diag)),
    )


def overcount_identity_check(g, table, order, mtable, ks):
    """Per walk length: sum (k(W)-1) * walks with support W over proper W
    equals sum m'(W) * walks supported inside W over proper strongly connected W.
    """
    full = _full(g)
    for n in range(1, order + 1):
        lhs, rhs = 0, 0
        for (length, sup), w in table.items():
            if length != n or sup == full:
                continue
            lhs = lhs + (ks[sup] - 1) * w
            for W, e in _proper(g, mtable):
                if sup <= W:
                    rhs = rhs + e * w
        if simplify(lhs) != simplify(rhs):
            return CheckResult("overcount", False, witness={"length": n, "lhs": simplify(lhs), "rhs": simplify(rhs)})
    return CheckResult("overcount", True, values={"order": order})


def vertex_weighted_zeta_check(g, s_values, order=DEFAULT_ORDER, mtable=None, ks=None):
    """exp of the s-weighted closed-walk series against 1/det(I - u S M).

    Also checks the log-derivative form -u C'(u)/C(u) = sum_n tr((SM)^n) u^n
    with C(u) = det(I - u S M), and the over-counting identity on the
    s-weighted walk table.
    """
    u = "u"
    if u in g.variables():
        raise ValueError("graph uses the reserved variable 'u'")
    gs = scaled_graph(g, s_values)
    table = closed_walk_support_sums(gs, order)
    lhs = series_exp(_exponent_series(table, order))
    sm = diagonal(s_values) @ g.weight_matrix()
    c = det_one_minus_s(sm, u)
    cs = TruncatedSeries.from_poly(c, u, order)
    rhs = series_inverse(cs)
    k = lhs.mismatch(rhs)
    if k is not None:
        return CheckResult("vertex-zeta", False, witness={"index": k, "walks": lhs[k], "determinant": rhs[k]})
    # -u C'/C: shift the derivative series up by one power of u
    dc = series_derivative(cs)
    logd = TruncatedSeries([0] + [-x for x in dc.coeffs], order) * series_inverse(cs)
    tot = walk_totals(table, order)
    for n in range(1, order + 1):
        if logd[n] != tot[n]:
            return CheckResult("vertex-zeta", False, witness={"index": n, "log_derivative": logd[n], "walks": tot[n]})
    if is_strongly_connected(g):
        ks = k_table(g) if ks is None else ks
        mtable = m_prime(g, ks) if mtable is None else mtable
        oc = overcount_identity_check(g, table, order, mtable, ks)
        if not oc:
            return CheckResult("vertex-zeta", False, witness=oc.witness)
    return CheckResult("vertex-zeta", True, values={"order": order, "s": list(s_values)})


# vertex-weighted determinant formula ----------------------------------------------


def sp_formula_check(g, s_values, lift=None, mtable=None):
    """det(I - S_hat M_hat) = det(I - S M) * prod over proper strongly connected W
    of det((I - S M) restricted to W) ** m'(W).
    """
    lift = build_lift(g) if lift is None else lift
    mtable = m_prime(g) if mtable is None else mtable
    a = identity(g.n) - diagonal(s_values) @ g.weight_matrix()
    ml = lift_matrix(lift)
    a_hat = identity(ml.labels) - lift_diagonal(lift, s_values) @ ml
    lhs = det(a_hat)
    factors = [(det(a), 1)] + [(det(restrict(a, W)), e) for W, e in _proper(g, mtable)]
    ok, num, den = _cross_equal(lhs, factors)
    return CheckResult(
        "sp-formula",
        ok,
        values={"lhs": lhs},
        witness={} if ok else {"lhs": lhs, "rhs_num": num, "rhs_den": den, "s": list(s_values)},
    )


def schrodinger_bridge(g):
    """Chain and vertex factors with I - S P = H.

    s_i = 1 - y_i, p(i, j) = x_(i,j) / (1 - y_i) off the diagonal and
    p(i, i) = 1 - sum_k p(i, k).  Needs rational x and y with y_i != 1.
    """
    if g.vweights is None or g.is_symbolic():
        raise ValueError("bridge needs rational edge and vertex weights")
    s_values = tuple(simplify(1 - Fraction(y)) for y in g.vweights)
    if any(s == 0 for s in s_values):
        raise ValueError("vertex weight 1 has no chain counterpart")
    edges = tuple((u, v, simplify(Fraction(w) / s_values[u])) for u, v, w in g.edges)
    diag = []
    for u in range(g.n):
        diag.append(simplify(1 - sum(Fraction(w) for a, _, w in edges if a == u)))
    chain = g.replace(edges=edges, diag=tuple(diag), keep_vweights=False)
    return s_values, chain


def schrodinger_identity_check(g, lift=None, mtable=None):
    """det H_hat = prod over strongly connected W (including V) of det(H restricted to W) ** m(W)."""
    if g.vweights is None:
        raise ValueError("graph has no vertex weights")
    lift = build_lift(g) if lift is None else lift
    mtable = m_prime(g) if mtable is None else mtable
    h = schrodinger_matrix(g)
    lhs = det(lift_schrodinger(g, lift))
    factors = [(det(restrict(h, W)), e) for W, e in mtable.items() if e != 0]
    ok, num, den = _cross_equal(lhs, factors)
    return CheckResult(
        "schrodinger",
        ok,
        values={"det_H_hat": lhs, "det_H": det(h)},
        witness={} if ok else {"det_H_hat": lhs, "rhs_num": num, "rhs_den": den},
    )


def tree_weight_stationarity_check(g, lift=None):
    """The vector of tree weights w(t) is left-invariant under M_hat."""
    if not g.is_row_stochastic():
        raise ValueError("needs row-stochastic weights plus diagonal")
    lift = build_lift(g) if lift is None else lift
    vec = [t.weight(g) for t in lift.trees]
    ml = lift_matrix(lift)
    for j in range(ml.n):
        acc = 0
        for i in range(ml.n):
            if ml.rows[i][j] != 0:
                acc = acc + vec[i] * ml.rows[i][j]
        if simplify(acc) != vec[j]:
            return CheckResult("stationarity", False, witness={"lift_vertex": j, "image": simplify(acc), "weight": vec[j]})
    return CheckResult("stationarity", True, values={"lift_vertices": ml.n})


def associated_chain(g):
    """Row-normalize positive rational weights (plus diagonal) into a chain."""
    if g.is_symbolic():
        raise ValueError("needs rational weights")
    if g.is_row_stochastic():
        return g
    totals = []
    for u in range(g.n):
        t = Fraction(g.diag[u]) + sum(Fraction(w) for _, w in g.out_edges(u))
        if t <= 0 or g.diag[u] < 0 or any(w <= 0 for _, w in g.out_edges(u)):
            raise ValueError("weights must be positive to normalize")
        totals.append(t)
    return g.replace(
        edges=tuple((u, v, simplify(Fraction(w) / totals[u])) for u, v, w in g.edges),
        diag=tuple(simplify(Fraction(d) / totals[u]) for u, d in enumerate(g.diag)),
    )
