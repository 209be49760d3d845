"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from treelift.digraph import Digraph, is_strongly_connected

weights = st.one_of(st.integers(1, 9), st.fractions(min_value=Fraction(1, 9), max_value=9, max_denominator=9))


@st.composite
def digraphs(draw, max_n=4, diag=True, vweights=False, min_n=1):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    edges = tuple((u, v, draw(weights)) for u, v in sorted(chosen))
    d = tuple(draw(st.one_of(st.just(0), weights)) for _ in range(n)) if diag else None
    y = tuple(draw(weights) for _ in range(n)) if vweights else None
    return Digraph(n, edges, d, y)


def strong_digraphs(**kw):
    return digraphs(**kw).filter(is_strongly_connected)
