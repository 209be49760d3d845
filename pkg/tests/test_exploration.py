import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import strong_digraphs
from treelift import identities as ident
from treelift.arborescence import Arborescence, Forest, enumerate_trees
from treelift.digraph import Digraph, complete_digraph, cycle_digraph
from treelift.exploration import (
    canonical_tree,
    default_ordering,
    exploration_check,
    exploration_psi,
    m_count,
    psi_histogram,
    random_ordering,
    sample_orderings,
)

V = frozenset({0, 1, 2})


def test_k3_histogram():
    g = complete_digraph(3)
    assert psi_histogram(g, 0) == {V: 1, frozenset({0, 1}): 1, frozenset({0, 2}): 1}


def test_k3_psi_by_tree():
    g = complete_digraph(3)
    psi = {t.encode(): exploration_psi(g, t) for t in enumerate_trees(g, 0)}
    # scanning in-edges of 0 meets 1 first: 1>0 kept; then 2 via (2,0)
    assert psi == {"1>0,2>0": V, "1>0,2>1": frozenset({0, 1}), "1>2,2>0": frozenset({0, 2})}


def test_ordering_changes_individual_results_but_not_counts():
    # the reversed order reaches 1 from 3 before 2, so 1 is deleted
    g = Digraph(4, ((0, 1, 1), (1, 2, 1), (1, 3, 1), (2, 0, 1), (3, 0, 1)))
    rev = tuple(reversed(default_ordering(g)))
    t = Arborescence.from_parent((None, 2, 0, 0))
    assert exploration_psi(g, t) == frozenset(range(4))
    assert exploration_psi(g, t, rev) == frozenset({0})
    mt = ident.m_prime(g)
    for W in mt:
        if 0 in W:
            assert m_count(g, W, 0) == m_count(g, W, 0, rev) == mt[W]


def test_cycle_explores_everything():
    g = cycle_digraph(4)
    (t,) = enumerate_trees(g, 2)
    assert exploration_psi(g, t) == frozenset(range(4))


def test_canonical_tree_k3():
    g = complete_digraph(3)
    f = Forest(frozenset({0, 1}), (None, None, 1))
    t = canonical_tree(g, f, 0)
    assert t.encode() == "1>0,2>1"
    assert frozenset({0, 1}) <= exploration_psi(g, t)


def test_canonical_tree_errors():
    g = complete_digraph(3)
    f = Forest(frozenset({0, 1}), (None, None, 1))
    with pytest.raises(ValueError):
        canonical_tree(g, f, 2)
    with pytest.raises(ValueError):
        exploration_psi(g, f)


def test_bad_ordering():
    g = complete_digraph(3)
    with pytest.raises(ValueError):
        exploration_psi(g, enumerate_trees(g, 0)[0], ((0, 1),))


@settings(max_examples=25)
@given(strong_digraphs(max_n=4), st.integers(0, 10**6))
def test_exploration_invariants(g, seed):
    mt = ident.m_prime(g)
    res = exploration_check(g, mt, sample_orderings(g, 3, seed))
    assert res, res.witness


def test_random_ordering_is_a_permutation():
    g = complete_digraph(4)
    o = random_ordering(g, random.Random(3))
    assert sorted(o) == g.edge_pairs()
    first = sample_orderings(g, 4, 9)
    assert first[0] == default_ordering(g) and len(first) == 4
