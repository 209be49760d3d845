"""Truncated univariate formal power series."""

from __future__ import annotations

from fractions import Fraction

from .poly import MultiPoly, poly_div_exact, simplify

DEFAULT_ORDER = 8


class TruncatedSeries:
    """Power series known up to and including ``s**order``.

    Coefficients are rationals; MultiPoly coefficients also work for every
    operation whose divisions are by integers or by the constant term.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order=None):
        coeffs = [simplify(c) for c in coeffs]
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("order must be nonnegative")
        coeffs = coeffs[: order + 1] + [0] * (order + 1 - len(coeffs))
        self.coeffs = tuple(coeffs)
        self.order = order

    @classmethod
    def from_poly(cls, p, var, order):
        """Expand a polynomial in ``var`` (other variables stay symbolic)."""
        if isinstance(p, MultiPoly):
            return cls(p.coefficients(var), order)
        return cls([p], order)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return self.order + 1

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    def __repr__(self):
        return f"TruncatedSeries({[str(c) for c in self.coeffs]}, order={self.order})"

    def _common(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries([other], self.order)
        return min(self.order, other.order), other

    def __add__(self, other):
        n, other = self._common(other)
        return TruncatedSeries([self[k] + other[k] for k in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        n, other = self._common(other)
        return TruncatedSeries([self[k] - other[k] for k in range(n + 1)], n)

    def __mul__(self, other):
        n, other = self._common(other)
        out = []
        for k in range(n + 1):
            acc = 0
            for i in range(k + 1):
                a, b = self[i], other[k - i]
                if a != 0 and b != 0:
                    acc = acc + a * b
            out.append(acc)
        return TruncatedSeries(out, n)

    __rmul__ = __mul__

    def mismatch(self, other):
        """Index of the first differing coefficient, or None."""
        n = min(self.order, other.order)
        for k in range(n + 1):
            if self[k] != other[k]:
                return k
        return None


def series_exp(f):
    """exp(f) for f with zero constant term."""
    if f[0] != 0:
        raise ValueError("series_exp needs a zero constant term")
    n = f.order
    g = [1] + [0] * n
    # k g_k = sum_{j=1..k} j f_j g_{k-j}
    for k in range(1, n + 1):
        acc = 0
        for j in range(1, k + 1):
            if f[j] != 0 and g[k - j] != 0:
                acc = acc + j * f[j] * g[k - j]
        g[k] = _div(acc, k)
    return TruncatedSeries(g, n)


def series_log(f):
    """log(f) for f with constant term 1."""
    if f[0] != 1:
        raise ValueError("series_log needs constant term 1")
    n = f.order
    g = [0] * (n + 1)
    # f' = f g'  =>  k g_k = k f_k - sum_{j=1..k-1} j g_j f_{k-j}
    for k in range(1, n + 1):
        acc = k * f[k]
        for j in range(1, k):
            if g[j] != 0 and f[k - j] != 0:
                acc = acc - j * g[j] * f[k - j]
        g[k] = _div(acc, k)
    return TruncatedSeries(g, n)


def series_inverse(f):
    """1/f for f with nonzero constant term."""
    c0 = f[0]
    if c0 == 0:
        raise ZeroDivisionError("series_inverse needs a nonzero constant term")
    n = f.order
    g = [_div(1, c0)] + [0] * n
    for k in range(1, n + 1):
        acc = 0
        for j in range(1, k + 1):
            if f[j] != 0 and g[k - j] != 0:
                acc = acc + f[j] * g[k - j]
        g[k] = _div(-acc, c0)
    return TruncatedSeries(g, n)


def series_derivative(f):
    """Formal derivative; known one order lower than ``f``."""
    if f.order == 0:
        return TruncatedSeries([0], 0)
    return TruncatedSeries([k * f[k] for k in range(1, f.order + 1)], f.order - 1)


def _div(a, b):
    if isinstance(a, MultiPoly) or isinstance(b, MultiPoly):
        return poly_div_exact(a, b)
    return simplify(Fraction(a) / Fraction(b))
