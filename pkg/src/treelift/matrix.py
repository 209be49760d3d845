"""Square matrices over the rationals or over MultiPoly, with exact determinants."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import lcm

from .poly import MultiPoly, _norm, poly_div_exact, simplify


class RingMatrix:
    """Immutable square matrix with unique row/column labels.

    Row ``i`` and column ``i`` share the label ``labels[i]``, so removing a
    label removes both.
    """

    __slots__ = ("rows", "labels")

    def __init__(self, rows, labels=None):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix is not square")
        labels = tuple(range(n)) if labels is None else tuple(labels)
        if len(labels) != n:
            raise ValueError("label count does not match dimension")
        if len(set(labels)) != n:
            raise ValueError("labels are not unique")
        self.rows = rows
        self.labels = labels

    @property
    def n(self):
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.labels == other.labels and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def __repr__(self):
        body = "; ".join(", ".join(str(simplify(x)) for x in r) for r in self.rows)
        return f"RingMatrix([{body}])"

    def is_symbolic(self):
        return any(isinstance(x, MultiPoly) for r in self.rows for x in r)

    def map(self, f):
        return RingMatrix([[f(x) for x in r] for r in self.rows], self.labels)

    def __add__(self, other):
        _check_same(self, other)
        return RingMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
            self.labels,
        )

    def __sub__(self, other):
        _check_same(self, other)
        return RingMatrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
            self.labels,
        )

    def __matmul__(self, other):
        _check_same(self, other)
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = 0
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return RingMatrix(out, self.labels)

    def scale(self, c):
        return self.map(lambda x: c * x)

    def trace(self):
        acc = 0
        for i in range(self.n):
            acc = acc + self.rows[i][i]
        return simplify(acc)

    def det(self):
        return det(self)


def _check_same(a, b):
    if a.labels != b.labels:
        raise ValueError("matrices have different labels")


def identity(labels):
    labels = tuple(labels) if not isinstance(labels, int) else tuple(range(labels))
    n = len(labels)
    return RingMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)], labels)


def diagonal(values, labels=None):
    values = list(values)
    n = len(values)
    return RingMatrix(
        [[values[i] if i == j else 0 for j in range(n)] for i in range(n)], labels
    )


def minor_matrix(m, remove):
    """Delete the rows and columns whose labels are in ``remove``."""
    remove = set(remove)
    unknown = remove - set(m.labels)
    if unknown:
        raise KeyError(f"unknown labels: {sorted(unknown, key=str)}")
    keep = [i for i, lab in enumerate(m.labels) if lab not in remove]
    return RingMatrix(
        [[m.rows[i][j] for j in keep] for i in keep], [m.labels[i] for i in keep]
    )


def restrict(m, keep):
    """Principal submatrix on the labels in ``keep`` (original order)."""
    keep = set(keep)
    return minor_matrix(m, [lab for lab in m.labels if lab not in keep])


# determinants ---------------------------------------------------------------


def det(m):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if m.n == 0:
        return 1
    if m.is_symbolic():
        return simplify(_bareiss_ring([list(r) for r in m.rows]))
    return _det_rational(m.rows)


def _det_rational(rows):
    scale = 1
    ints = []
    for r in rows:
        d = lcm(*(Fraction(x).denominator for x in r))
        scale *= d
        ints.append([int(Fraction(x) * d) for x in r])
    return _norm(Fraction(_bareiss_int(ints), scale))


def _bareiss_int(rows):
    n = len(rows)
    sign = 1
    prev = 1
    for _ in range(n - 1):
        for p, r in enumerate(rows):
            if r[0]:
                break
        else:
            return 0
        if p:
            rows[0], rows[p] = rows[p], rows[0]
            sign = -sign
        head = rows[0]
        piv = head[0]
        tail = head[1:]
        new = []
        for r in rows[1:]:
            a = r[0]
            if a:
                new.append([(x * piv - a * y) // prev for x, y in zip(r[1:], tail)])
            elif prev == 1:
                new.append([x * piv for x in r[1:]])
            else:
                new.append([(x * piv) // prev for x in r[1:]])
        rows = new
        prev = piv
    return sign * rows[0][0]


def _size(x):
    return len(x.terms) if isinstance(x, MultiPoly) else 1


def _bareiss_ring(rows):
    n = len(rows)
    sign = 1
    prev = 1
    for _ in range(n - 1):
        cands = [p for p, r in enumerate(rows) if r[0] != 0]
        if not cands:
            return 0
        p = min(cands, key=lambda p: _size(rows[p][0]))
        if p:
            rows[0], rows[p] = rows[p], rows[0]
            sign = -sign
        head = rows[0]
        piv = head[0]
        tail = head[1:]
        new = []
        for r in rows[1:]:
            a = r[0]
            if a != 0:
                row = [x * piv - a * y for x, y in zip(r[1:], tail)]
            else:
                row = [x * piv for x in r[1:]]
            if prev != 1:
                row = [poly_div_exact(x, prev) if x != 0 else 0 for x in row]
            new.append(row)
        rows = new
        prev = piv
    return rows[0][0] if sign > 0 else -rows[0][0]


def cofactor_det(m):
    """Leibniz-formula determinant; an independent oracle for small n."""
    n = m.n
    if n > 7:
        raise ValueError("cofactor_det is only meant for small matrices")
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inv % 2 else 1
        for i, j in enumerate(perm):
            term = term * m.rows[i][j]
            if term == 0:
                break
        total = total + term
    return simplify(total)


# characteristic polynomials -------------------------------------------------


def charpoly(m):
    """Coefficients ``c`` of det(x I - m) with ``c[k]`` the x**k coefficient.

    Hessenberg reduction over the rationals followed by the standard
    recurrence on leading principal minors; requires rational entries.
    """
    if m.is_symbolic():
        raise TypeError("charpoly needs a rational matrix")
    n = m.n
    h = [[Fraction(x) for x in r] for r in m.rows]
    for k in range(1, n - 1):
        piv = next((i for i in range(k, n) if h[i][k - 1] != 0), None)
        if piv is None:
            continue
        if piv != k:
            h[piv], h[k] = h[k], h[piv]
            for r in h:
                r[piv], r[k] = r[k], r[piv]
        t = h[k][k - 1]
        rk = h[k]
        for i in range(k + 1, n):
            u = h[i][k - 1] / t
            if u == 0:
                continue
            ri = h[i]
            for j in range(k - 1, n):
                if rk[j]:
                    ri[j] -= u * rk[j]
            for r in h:
                if r[i]:
                    r[k] += u * r[i]
    # p[j] is the charpoly of the leading j x j block, as a coefficient list
    p = [[Fraction(1)]]
    for j in range(1, n + 1):
        hjj = h[j - 1][j - 1]
        prev = p[j - 1]
        cur = [Fraction(0)] + prev
        for i, c in enumerate(prev):
            cur[i] -= hjj * c
        prod = Fraction(1)
        for i in range(j - 1, 0, -1):
            prod *= h[i][i - 1]
            if prod == 0:
                break
            coef = h[i - 1][j - 1] * prod
            if coef:
                for k, c in enumerate(p[i - 1]):
                    cur[k] -= coef * c
        p.append(cur)
    return [_norm(c) for c in p[n]]


def det_one_minus_s(m, var="s"):
    """det(I - s m) as a polynomial in ``var``.

    Rational matrices go through the characteristic polynomial (the result
    is its reversal); symbolic ones through Bareiss on I - s m.
    """
    s = MultiPoly.var(var)
    if m.n == 0:
        return MultiPoly.const(1, (var,))
    if not m.is_symbolic():
        c = charpoly(m)
        n = m.n
        # det(I - s M) = s^n det(s^-1 I - M) = sum_k c[k] s^(n-k)
        items = {(n - k,): c[k] for k in range(n + 1) if c[k]}
        return MultiPoly.from_terms((var,), items)
    a = identity(m.labels) - m.scale(s)
    d = det(a)
    return d if isinstance(d, MultiPoly) else MultiPoly.const(d, (var,))
