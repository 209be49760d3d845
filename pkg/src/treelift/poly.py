"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial is a map from exponent vectors to nonzero coefficients.  The
exponent vector of a monomial is packed into a single Python int, one 16-bit
slot per variable with the first variable in the most significant slot, so
that monomial multiplication is integer addition and integer comparison is
lexicographic order.  The top bit of every slot is a guard bit used to test
divisibility without unpacking.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

SLOT = 16
MAX_EXP = (1 << (SLOT - 1)) - 1


class InexactDivisionError(ArithmeticError):
    """Raised when a division that must be exact leaves a remainder."""


@lru_cache(maxsize=None)
def _guard(nvars):
    g = 0
    for i in range(nvars):
        g |= 1 << (i * SLOT + SLOT - 1)
    return g


def _pack(exps):
    m = 0
    for e in exps:
        if e < 0 or e > MAX_EXP:
            raise OverflowError(f"exponent {e} out of range")
        m = (m << SLOT) | e
    return m


def _unpack(m, nvars):
    mask = (1 << SLOT) - 1
    out = [0] * nvars
    for i in range(nvars - 1, -1, -1):
        out[i] = m & mask
        m >>= SLOT
    return tuple(out)


def _norm(c):
    if c.__class__ is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _scalar_div(a, b):
    if a.__class__ is int and b.__class__ is int:
        q, r = divmod(a, b)
        return q if r == 0 else Fraction(a, b)
    return _norm(Fraction(a) / b)


class MultiPoly:
    """Immutable polynomial over the rationals in named variables.

    ``names`` is the sorted variable registry; ``terms`` maps packed
    monomials to int or Fraction coefficients (never zero).
    """

    __slots__ = ("names", "terms", "_hash")

    def __init__(self, names=(), terms=None):
        self.names = tuple(names)
        self.terms = {} if terms is None else terms
        self._hash = None

    # construction -----------------------------------------------------

    @classmethod
    def var(cls, name):
        return cls((name,), {1: 1})

    @classmethod
    def const(cls, c, names=()):
        c = _norm(Fraction(c)) if not isinstance(c, int) else c
        return cls(names, {0: c} if c else {})

    @classmethod
    def from_terms(cls, names, items):
        """Build from ``{exponent tuple: coefficient}`` over ``names``."""
        names = tuple(names)
        order = sorted(range(len(names)), key=lambda i: names[i])
        sorted_names = tuple(names[i] for i in order)
        if len(set(sorted_names)) != len(sorted_names):
            raise ValueError("duplicate variable names")
        terms = {}
        for exps, c in dict(items).items():
            if len(exps) != len(names):
                raise ValueError("exponent vector length does not match registry")
            m = _pack([exps[i] for i in order])
            terms[m] = terms.get(m, 0) + c
        return cls(sorted_names, {m: _norm(c) for m, c in terms.items() if c})

    # registry alignment -------------------------------------------------

    def _convert(self, names):
        if names == self.names:
            return self.terms
        pos = [names.index(v) for v in self.names]
        n, k = len(self.names), len(names)
        out = {}
        for m, c in self.terms.items():
            exps = _unpack(m, n)
            full = [0] * k
            for i, e in zip(pos, exps):
                full[i] = e
            out[_pack(full)] = c
        return out

    def _align(self, other):
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, Rational)):
                return self.names, self.terms, ({0: _norm(other)} if other else {})
            return None
        if self.names == other.names:
            return self.names, self.terms, other.terms
        names = tuple(sorted(set(self.names) | set(other.names)))
        return names, self._convert(names), other._convert(names)

    # predicates / accessors ---------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_term(self):
        return self.terms.get(0, 0)

    def variables(self):
        """Names of variables that actually occur."""
        used = 0
        for m in self.terms:
            used |= m
        n = len(self.names)
        exps = _unpack(used, n)
        # OR of packed exponents is nonzero in a slot iff the variable occurs
        return tuple(v for v, e in zip(self.names, exps) if e)

    def items(self):
        """Yield ``(exponent tuple, coefficient)`` in descending lex order."""
        n = len(self.names)
        for m in sorted(self.terms, reverse=True):
            yield _unpack(m, n), self.terms[m]

    def degree(self, name):
        if name not in self.names:
            return 0 if self.terms else -1
        if not self.terms:
            return -1
        i = self.names.index(name)
        return max(_unpack(m, len(self.names))[i] for m in self.terms)

    def __len__(self):
        return len(self.terms)

    # arithmetic -----------------------------------------------------------

    def __neg__(self):
        return MultiPoly(self.names, {m: -c for m, c in self.terms.items()})

    def __pos__(self):
        return self

    def __add__(self, other):
        al = self._align(other)
        if al is None:
            return NotImplemented
        names, a, b = al
        out = dict(a)
        for m, c in b.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return MultiPoly(names, out)

    __radd__ = __add__

    def __sub__(self, other):
        al = self._align(other)
        if al is None:
            return NotImplemented
        names, a, b = al
        out = dict(a)
        for m, c in b.items():
            v = out.get(m, 0) - c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return MultiPoly(names, out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        al = self._align(other)
        if al is None:
            return NotImplemented
        names, a, b = al
        if len(a) < len(b):
            a, b = b, a
        out = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = ma + mb
                out[m] = get(m, 0) + ca * cb
        return MultiPoly(names, {m: _norm(c) for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        result = MultiPoly.const(1, self.names)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        return self.divexact(other)

    def __rtruediv__(self, other):
        return MultiPoly.const(other).divexact(self)

    def divexact(self, other):
        """Return ``q`` with ``q * other == self``; raise if not exact."""
        if not isinstance(other, MultiPoly):
            if not other:
                raise ZeroDivisionError("division by zero polynomial")
            return MultiPoly(self.names, {m: _scalar_div(c, other) for m, c in self.terms.items()})
        if not other.terms:
            raise ZeroDivisionError("division by zero polynomial")
        names, a, b = self._align(other)
        if len(b) == 1 and 0 in b:
            d = b[0]
            return MultiPoly(names, {m: _scalar_div(c, d) for m, c in a.items()})
        guard = _guard(len(names))
        lm = max(b)
        lc = b[lm]
        rest = [(m, c) for m, c in b.items() if m != lm]
        rem = dict(a)
        heap = [-m for m in rem]
        heapq.heapify(heap)
        q = {}
        while heap:
            m = -heapq.heappop(heap)
            c = rem.pop(m, None)
            if c is None:
                continue
            d = (m | guard) - lm
            if d & guard != guard:
                raise InexactDivisionError("nonzero remainder")
            qm = d ^ guard
            qc = _scalar_div(c, lc)
            q[qm] = qc
            for mb, cb in rest:
                mm = qm + mb
                v = rem.get(mm)
                if v is None:
                    rem[mm] = -qc * cb
                    heapq.heappush(heap, -mm)
                else:
                    v = v - qc * cb
                    if v:
                        rem[mm] = v
                    else:
                        del rem[mm]
        return MultiPoly(names, q)

    # comparison -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            if self.names == other.names:
                return self.terms == other.terms
            _, a, b = self._align(other)
            return a == b
        if isinstance(other, (int, Rational)):
            if not other:
                return not self.terms
            return len(self.terms) == 1 and self.terms.get(0) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                return hash(self.constant_term())
            used = self.variables()
            p = self._restrict(used)
            self._hash = hash((used, frozenset(p.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def _restrict(self, names):
        return MultiPoly(names, self._convert_down(names))

    def _convert_down(self, names):
        if names == self.names:
            return self.terms
        n = len(self.names)
        keep = [self.names.index(v) for v in names]
        out = {}
        for m, c in self.terms.items():
            exps = _unpack(m, n)
            out[_pack([exps[i] for i in keep])] = c
        return out

    def compact(self):
        """Drop registry variables that do not occur."""
        return self._restrict(self.variables())

    # substitution ----------------------------------------------------------

    def evaluate(self, assignment):
        """Substitute a rational for every variable that occurs."""
        n = len(self.names)
        vals = []
        for v, e in zip(self.names, _unpack(_or_all(self.terms), n)):
            if e:
                if v not in assignment:
                    raise KeyError(f"no value for variable {v!r}")
                vals.append(Fraction(assignment[v]))
            else:
                vals.append(None)
        total = Fraction(0)
        for m, c in self.terms.items():
            t = Fraction(c)
            for val, e in zip(vals, _unpack(m, n)):
                if e:
                    t *= val ** e
            total += t
        return _norm(total)

    def substitute(self, assignment):
        """Substitute rationals for a subset of the variables."""
        n = len(self.names)
        keep = [i for i, v in enumerate(self.names) if v not in assignment]
        names = tuple(self.names[i] for i in keep)
        out = {}
        for m, c in self.terms.items():
            exps = _unpack(m, n)
            t = Fraction(c)
            for i, e in enumerate(exps):
                if e and self.names[i] in assignment:
                    t *= Fraction(assignment[self.names[i]]) ** e
            mm = _pack([exps[i] for i in keep])
            out[mm] = out.get(mm, 0) + t
        return MultiPoly(names, {m: _norm(c) for m, c in out.items() if c})

    def derivative(self, name):
        if name not in self.names:
            return MultiPoly(self.names, {})
        i = self.names.index(name)
        n = len(self.names)
        out = {}
        for m, c in self.terms.items():
            exps = list(_unpack(m, n))
            e = exps[i]
            if e:
                exps[i] = e - 1
                out[_pack(exps)] = c * e
        return MultiPoly(self.names, out)

    def coefficients(self, name):
        """Coefficients in ``name`` as a list indexed by power.

        Each coefficient is a rational when ``name`` is the only variable
        that occurs, otherwise a MultiPoly in the remaining variables.
        """
        if self.is_zero():
            return []
        deg = self.degree(name)
        others = tuple(v for v in self.names if v != name)
        n = len(self.names)
        i = self.names.index(name) if name in self.names else None
        buckets = [dict() for _ in range(deg + 1)]
        keep = [j for j in range(n) if j != i]
        for m, c in self.terms.items():
            exps = _unpack(m, n)
            e = exps[i] if i is not None else 0
            buckets[e][_pack([exps[j] for j in keep])] = c
        out = []
        for b in buckets:
            p = MultiPoly(others, b)
            out.append(p.constant_term() if p.is_constant() else p)
        return out

    # display ----------------------------------------------------------------

    def __repr__(self):
        return f"MultiPoly({str(self)!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.items():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.names, exps) if e
            )
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)


def _or_all(terms):
    used = 0
    for m in terms:
        used |= m
    return used


def poly_div_exact(num, den):
    """Exact quotient of two weights (rationals or polynomials)."""
    if isinstance(num, MultiPoly) or isinstance(den, MultiPoly):
        if not isinstance(num, MultiPoly):
            num = MultiPoly.const(num)
        q = num.divexact(den)
        return q.constant_term() if q.is_constant() else q
    if den == 0:
        raise ZeroDivisionError("division by zero")
    return _norm(Fraction(num) / Fraction(den))


def evaluate(p, assignment):
    """Evaluate a weight at a rational point; rationals pass through."""
    if isinstance(p, MultiPoly):
        return p.evaluate(assignment)
    return p


def simplify(w):
    """Collapse constant polynomials to plain rationals."""
    if isinstance(w, MultiPoly) and w.is_constant():
        return w.constant_term()
    if isinstance(w, Fraction):
        return _norm(w)
    return w


def is_symbolic(w):
    return isinstance(w, MultiPoly) and not w.is_constant()


def format_weight(w):
    w = simplify(w)
    return str(w)
