"""Graph families and seeded random weights for identity checking."""

from __future__ import annotations

import random
from fractions import Fraction

from .digraph import Digraph, is_strongly_connected
from .poly import MultiPoly, simplify

DEFAULT_SEED = 20171

# numerators and denominators of random evaluation points
POINT_RANGE = (1, 1000)


def random_rational(rng, lo=1, hi=1000):
    return simplify(Fraction(rng.randint(lo, hi), rng.randint(lo, hi)))


def strongly_connected_family(max_n):
    """Every strongly connected digraph on 1..max_n labeled vertices.

    Edge sets are all subsets of the complete digraph's edges, in order of
    vertex count and then bitmask; weights are 1.
    """
    out = []
    for n in range(1, max_n + 1):
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        for mask in range(1 << len(pairs)):
            edges = tuple((u, v, 1) for k, (u, v) in enumerate(pairs) if mask >> k & 1)
            g = Digraph(n, edges)
            if is_strongly_connected(g):
                out.append(g)
    return out


def with_random_weights(g, rng, lo=1, hi=9):
    """Positive random rational edge weights; diagonal and vertex weights untouched."""
    return g.replace(edges=tuple((u, v, random_rational(rng, lo, hi)) for u, v, _ in g.edges))


def with_random_chain(g, rng, lo=1, hi=9, loops=True):
    """A random row-stochastic chain on g's edges, optionally with self-transitions."""
    edges, diag = [], []
    for u in range(g.n):
        outs = [v for v, _ in g.out_edges(u)]
        raw = [Fraction(rng.randint(lo, hi)) for _ in outs]
        d = Fraction(rng.randint(0, hi)) if loops else Fraction(0)
        tot = sum(raw) + d
        if tot == 0:
            d, tot = Fraction(1), Fraction(1)
        edges.extend((u, v, simplify(r / tot)) for v, r in zip(outs, raw))
        diag.append(simplify(d / tot))
    return g.replace(edges=tuple(edges), diag=tuple(diag))


def symbolic(g, vertex_weights=False):
    """Replace every edge weight by its canonical variable x_u_v."""
    edges = tuple((u, v, MultiPoly.var(f"x_{u}_{v}")) for u, v, _ in g.edges)
    vw = tuple(MultiPoly.var(f"y_{v}") for v in range(g.n)) if vertex_weights else None
    return g.replace(edges=edges, vweights=vw)


def random_point(names, rng):
    return {v: random_rational(rng, *POINT_RANGE) for v in names}


def specializations(g, rng, count):
    """``count`` copies of g with every variable replaced by a random rational."""
    names = g.variables()
    return [g.evaluate(random_point(names, rng)) for _ in range(count)]


def random_vertex_factors(n, rng, lo=1, hi=9):
    return tuple(random_rational(rng, lo, hi) for _ in range(n))
