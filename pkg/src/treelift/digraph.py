"""Weighted simple digraphs, strong connectivity, and closed-walk accounting."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from .matrix import RingMatrix
from .poly import MultiPoly, evaluate, format_weight, is_symbolic, simplify

MAX_WALK_LENGTH = 16

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?\Z")


class GraphFormatError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True, eq=False)
class Digraph:
    """A simple weighted digraph on vertices ``0..n-1``.

    ``edges`` holds ``(u, v, weight)`` triples with ``u != v``; self
    transitions live in ``diag``.  ``vweights`` holds the optional vertex
    weights used by Schroedinger matrices.
    """

    n: int
    edges: tuple
    diag: tuple = None
    vweights: tuple = None
    labels: tuple = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a graph needs at least one vertex")
        edges = tuple(sorted((int(u), int(v), simplify(w)) for u, v, w in self.edges))
        seen = set()
        for u, v, _ in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if u == v:
                raise ValueError(f"self-loop at {u}: use the diagonal")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        object.__setattr__(self, "edges", edges)
        diag = (0,) * self.n if self.diag is None else tuple(simplify(d) for d in self.diag)
        if len(diag) != self.n:
            raise ValueError("diagonal length does not match vertex count")
        object.__setattr__(self, "diag", diag)
        if self.vweights is not None:
            vw = tuple(simplify(y) for y in self.vweights)
            if len(vw) != self.n:
                raise ValueError("vertex weight count does not match vertex count")
            object.__setattr__(self, "vweights", vw)
        labels = tuple(str(i) for i in range(self.n)) if self.labels is None else tuple(self.labels)
        object.__setattr__(self, "labels", labels)

    def __eq__(self, other):
        if not isinstance(other, Digraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.edges == other.edges
            and self.diag == other.diag
            and self.vweights == other.vweights
        )

    __hash__ = None

    @cached_property
    def _weights(self):
        return {(u, v): w for u, v, w in self.edges}

    @cached_property
    def _out(self):
        out = [[] for _ in range(self.n)]
        for u, v, w in self.edges:
            out[u].append((v, w))
        return tuple(tuple(x) for x in out)

    @cached_property
    def _in(self):
        inc = [[] for _ in range(self.n)]
        for u, v, w in self.edges:
            inc[v].append((u, w))
        return tuple(tuple(x) for x in inc)

    def weight(self, u, v):
        if u == v:
            return self.diag[u]
        return self._weights.get((u, v), 0)

    def has_edge(self, u, v):
        return (u, v) in self._weights

    def out_edges(self, u):
        return self._out[u]

    def in_edges(self, v):
        return self._in[v]

    def out_degree(self, u):
        return len(self._out[u])

    def edge_pairs(self):
        return [(u, v) for u, v, _ in self.edges]

    def vertices(self):
        return range(self.n)

    def weight_matrix(self):
        """Edge weights off the diagonal, ``diag`` on it (P for a chain)."""
        rows = [[0] * self.n for _ in range(self.n)]
        for u, v, w in self.edges:
            rows[u][v] = w
        for i, d in enumerate(self.diag):
            rows[i][i] = d
        return RingMatrix(rows)

    def variables(self):
        names = set()
        for w in [w for *_, w in self.edges] + list(self.diag) + list(self.vweights or ()):
            if isinstance(w, MultiPoly):
                names.update(w.variables())
        return tuple(sorted(names))

    def is_symbolic(self):
        return bool(self.variables())

    def is_row_stochastic(self):
        if self.is_symbolic():
            return False
        for u in range(self.n):
            ws = [w for _, w in self._out[u]] + [self.diag[u]]
            if any(w < 0 for w in ws) or sum(ws) != 1:
                return False
        return True

    def evaluate(self, assignment):
        """Substitute rationals for every variable."""
        ev = lambda w: evaluate(w, assignment)
        return Digraph(
            self.n,
            tuple((u, v, ev(w)) for u, v, w in self.edges),
            tuple(ev(d) for d in self.diag),
            None if self.vweights is None else tuple(ev(y) for y in self.vweights),
            self.labels,
        )

    def replace(self, edges=None, diag=None, vweights=None, keep_vweights=True):
        return Digraph(
            self.n,
            self.edges if edges is None else edges,
            self.diag if diag is None else diag,
            (self.vweights if keep_vweights else None) if vweights is None else vweights,
            self.labels,
        )

    def is_strongly_connected(self):
        return is_strongly_connected(self)

    def induced_subgraph(self, keep):
        return induced_subgraph(self, keep)


# construction helpers -------------------------------------------------------


def from_edges(n, edges, diag=None, vweights=None):
    return Digraph(n, tuple(edges), diag, vweights)


def sym(u, v):
    return MultiPoly.var(f"x_{u}_{v}")


def complete_digraph(n, weight=1):
    """Complete digraph; ``weight='sym'`` gives the canonical variables."""
    w = (lambda u, v: sym(u, v)) if weight == "sym" else (lambda u, v: weight)
    return Digraph(n, tuple((u, v, w(u, v)) for u in range(n) for v in range(n) if u != v))


def cycle_digraph(n, weight=1):
    w = (lambda u, v: sym(u, v)) if weight == "sym" else (lambda u, v: weight)
    return Digraph(n, tuple((u, (u + 1) % n, w(u, (u + 1) % n)) for u in range(n)))


# text format ----------------------------------------------------------------


def _parse_weight(tok, default_var, line):
    if tok == "sym":
        return MultiPoly.var(default_var)
    if _RATIONAL.match(tok):
        try:
            return simplify(Fraction(tok))
        except ZeroDivisionError:
            raise GraphFormatError(f"zero denominator in {tok!r}", line) from None
    if _IDENT.match(tok):
        return MultiPoly.var(tok)
    raise GraphFormatError(f"bad weight {tok!r}", line)


def _parse_index(tok, n, line):
    try:
        v = int(tok)
    except ValueError:
        raise GraphFormatError(f"bad vertex index {tok!r}", line) from None
    if not 0 <= v < n:
        raise GraphFormatError(f"vertex {v} out of range 0..{n - 1}", line)
    return v


def parse_graph(text):
    """Parse the line-oriented graph format.

    Directives: ``graph n``, ``edge u v w``, ``diag v w``, ``vweight v w``.
    A weight is an integer, ``p/q``, ``sym`` (the canonical variable
    ``x_u_v`` / ``d_v`` / ``y_v``) or a variable name.
    """
    n = None
    edges = {}
    diag = {}
    vweights = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        if kind == "graph":
            if n is not None:
                raise GraphFormatError("repeated graph directive", lineno)
            if len(tok) != 2:
                raise GraphFormatError("expected: graph <n>", lineno)
            try:
                n = int(tok[1])
            except ValueError:
                raise GraphFormatError(f"bad vertex count {tok[1]!r}", lineno) from None
            if n < 1:
                raise GraphFormatError("vertex count must be positive", lineno)
            continue
        if n is None:
            raise GraphFormatError("graph directive must come first", lineno)
        if kind == "edge":
            if len(tok) != 4:
                raise GraphFormatError("expected: edge <u> <v> <w>", lineno)
            u, v = _parse_index(tok[1], n, lineno), _parse_index(tok[2], n, lineno)
            if u == v:
                raise GraphFormatError(f"self-loop {u} {v} in edge section", lineno)
            if (u, v) in edges:
                raise GraphFormatError(f"duplicate edge {u} {v}", lineno)
            edges[u, v] = _parse_weight(tok[3], f"x_{u}_{v}", lineno)
        elif kind in ("diag", "vweight"):
            if len(tok) != 3:
                raise GraphFormatError(f"expected: {kind} <v> <w>", lineno)
            v = _parse_index(tok[1], n, lineno)
            target = diag if kind == "diag" else vweights
            if v in target:
                raise GraphFormatError(f"duplicate {kind} for vertex {v}", lineno)
            prefix = "d" if kind == "diag" else "y"
            target[v] = _parse_weight(tok[2], f"{prefix}_{v}", lineno)
        else:
            raise GraphFormatError(f"unknown directive {kind!r}", lineno)
    if n is None:
        raise GraphFormatError("missing graph directive")
    return Digraph(
        n,
        tuple((u, v, w) for (u, v), w in edges.items()),
        tuple(diag.get(v, 0) for v in range(n)),
        tuple(vweights.get(v, 0) for v in range(n)) if vweights else None,
    )


def _weight_token(w, canonical):
    w = simplify(w)
    if isinstance(w, MultiPoly):
        if w == MultiPoly.var(canonical):
            return "sym"
        names = w.variables()
        if len(names) == 1 and w == MultiPoly.var(names[0]):
            return names[0]
        raise ValueError(f"weight {w} is not expressible in the graph format")
    return format_weight(w)


def format_graph(g):
    """Canonical text form; ``parse_graph(format_graph(g)) == g``."""
    lines = [f"graph {g.n}"]
    for u, v, w in g.edges:
        lines.append(f"edge {u} {v} {_weight_token(w, f'x_{u}_{v}')}")
    for v, d in enumerate(g.diag):
        if d != 0:
            lines.append(f"diag {v} {_weight_token(d, f'd_{v}')}")
    if g.vweights is not None:
        for v, y in enumerate(g.vweights):
            lines.append(f"vweight {v} {_weight_token(y, f'y_{v}')}")
    return "\n".join(lines) + "\n"


def read_graph(path):
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


# connectivity ---------------------------------------------------------------


def _reach(g, start, allowed, forward=True):
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        nbrs = g.out_edges(u) if forward else g.in_edges(u)
        for v, _ in nbrs:
            if v in allowed and v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def _strongly_connected_on(g, vs):
    vs = set(vs)
    if not vs:
        return False
    s = next(iter(vs))
    return _reach(g, s, vs) == vs and _reach(g, s, vs, forward=False) == vs


def is_strongly_connected(g):
    return _strongly_connected_on(g, range(g.n))


def induced_subgraph(g, keep):
    """Subgraph on ``keep``, relabeled ``0..|keep|-1`` in increasing order."""
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("induced subgraph needs a nonempty vertex set")
    idx = {v: i for i, v in enumerate(keep)}
    edges = tuple((idx[u], idx[v], w) for u, v, w in g.edges if u in idx and v in idx)
    return Digraph(
        len(keep),
        edges,
        tuple(g.diag[v] for v in keep),
        None if g.vweights is None else tuple(g.vweights[v] for v in keep),
        tuple(g.labels[v] for v in keep),
    )


def strongly_connected_component(g, v, allowed):
    """Vertices of the strongly connected component of ``v`` in g[allowed]."""
    allowed = set(allowed)
    return frozenset(_reach(g, v, allowed) & _reach(g, v, allowed, forward=False))


def subset_order(ws):
    """Canonical order: size descending, then lexicographic."""
    return sorted(ws, key=lambda w: (-len(w), sorted(w)))


def strongly_connected_subsets(g):
    """All nonempty vertex sets inducing a strongly connected subgraph.

    Singletons always qualify.
    """
    out = []
    for k in range(g.n, 0, -1):
        for w in combinations(range(g.n), k):
            if k == 1 or _strongly_connected_on(g, w):
                out.append(frozenset(w))
    return subset_order(out)


# closed walks -----------------------------------------------------------------


def closed_walk_support_sums(g, max_len):
    """Total weight of based closed walks, keyed by ``(length, support)``.

    A based closed walk ``v1..vn`` has weight
    ``M[v1,v2] ... M[vn,v1]`` where M is the weight matrix including the
    diagonal; its support is the set of visited vertices.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    if max_len > MAX_WALK_LENGTH:
        raise ValueError(f"max_len {max_len} exceeds cap {MAX_WALK_LENGTH}")
    steps = []
    for u in range(g.n):
        nb = list(g.out_edges(u))
        if g.diag[u] != 0:
            nb.append((u, g.diag[u]))
        steps.append(nb)
    table = {}
    for start in range(g.n):
        states = {(start, 1 << start): 1}
        for length in range(1, max_len + 1):
            nxt = {}
            for (cur, mask), w in states.items():
                for v, wv in steps[cur]:
                    key = (v, mask | (1 << v))
                    nxt[key] = nxt.get(key, 0) + w * wv
            states = {k: w for k, w in nxt.items() if w != 0}
            for (cur, mask), w in states.items():
                if cur == start:
                    sup = frozenset(i for i in range(g.n) if mask >> i & 1)
                    key = (length, sup)
                    table[key] = table.get(key, 0) + w
    return {k: simplify(w) for k, w in table.items() if w != 0}


def walk_totals(table, max_len):
    """Per-length totals of a support table (index 0 unused)."""
    tot = [0] * (max_len + 1)
    for (n, _), w in table.items():
        if n <= max_len:
            tot[n] = tot[n] + w
    return [simplify(t) for t in tot]


def based_closed_walks(g, max_len):
    """Yield every based closed walk of length 1..max_len as a vertex tuple."""
    steps = []
    for u in range(g.n):
        nb = [v for v, _ in g.out_edges(u)]
        if g.diag[u] != 0:
            nb.append(u)
        steps.append(sorted(nb))

    def extend(walk, remaining):
        cur = walk[-1]
        for v in steps[cur]:
            if remaining == 1:
                if v == walk[0]:
                    yield walk
            else:
                yield from extend(walk + (v,), remaining - 1)

    for length in range(1, max_len + 1):
        for s in range(g.n):
            yield from extend((s,), length)
