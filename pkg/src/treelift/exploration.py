"""Breadth-first exploration of a spanning tree and the canonical-tree map.

Both traversals start at a root w and follow incoming edges: processing u
scans the surviving edges (x, u) in edge-ordering order.  A vertex reached
for the first time through an edge the tree (or forest) does not contain is
deleted along with all its edges.
"""

from __future__ import annotations

import random
from collections import deque

from .arborescence import Arborescence, enumerate_forests, enumerate_trees, is_valid_forest
from .checks import CheckResult
from .digraph import strongly_connected_component


def default_ordering(g):
    """Lexicographic by (source, target)."""
    return tuple(g.edge_pairs())


def random_ordering(g, rng):
    edges = list(g.edge_pairs())
    rng.shuffle(edges)
    return tuple(edges)


def _incoming_by_rank(g, ordering):
    if sorted(ordering) != g.edge_pairs():
        raise ValueError("ordering is not a permutation of the edge list")
    inc = [[] for _ in range(g.n)]
    for u, v in ordering:
        inc[v].append(u)
    return inc


def _traverse(g, w, ordering, keeps):
    """Shared traversal; ``keeps(x, u)`` decides whether a first visit survives.

    Returns ``(visited, deleted, adopted)`` where ``adopted`` maps each visited
    vertex other than w to the vertex it was first reached from.
    """
    inc = _incoming_by_rank(g, ordering)
    visited = {w}
    deleted = set()
    adopted = {}
    queue = deque([w])
    while queue:
        u = queue.popleft()
        for x in inc[u]:
            if x in visited or x in deleted:
                continue
            if keeps(x, u):
                visited.add(x)
                adopted[x] = u
                queue.append(x)
            else:
                deleted.add(x)
    return visited, deleted, adopted


def exploration_psi(g, t, ordering=None):
    """The strongly connected set left around the root after exploring ``t``."""
    if not isinstance(t, Arborescence) or not is_valid_forest(g, t):
        raise ValueError("not a spanning tree of the graph")
    ordering = default_ordering(g) if ordering is None else ordering
    w = t.root
    _, deleted, _ = _traverse(g, w, ordering, lambda x, u: t.parent[x] == u)
    alive = set(range(g.n)) - deleted
    return strongly_connected_component(g, w, alive)


def canonical_tree(g, f, w, ordering=None):
    """The unique tree rooted at w containing forest ``f`` whose exploration keeps f's roots."""
    if not is_valid_forest(g, f):
        raise ValueError("not a spanning forest of the graph")
    roots = f.roots
    if w not in roots:
        raise ValueError("w must be one of the forest's roots")
    ordering = default_ordering(g) if ordering is None else ordering

    def keeps(x, u):
        return x in roots or f.parent[x] == u

    visited, _, adopted = _traverse(g, w, ordering, keeps)
    parent = list(f.parent)
    for x in roots:
        if x == w:
            continue
        if x not in visited:
            raise ValueError("root set is not strongly connected around w")
        parent[x] = adopted[x]
    return Arborescence(frozenset((w,)), tuple(parent))


def m_count(g, roots, w, ordering=None):
    """Trees rooted at w whose exploration yields exactly ``roots``."""
    roots = frozenset(roots)
    return sum(1 for t in enumerate_trees(g, w) if exploration_psi(g, t, ordering) == roots)


def count_psi_superset(g, roots, w, ordering=None):
    """Trees rooted at w whose exploration yields a superset of ``roots``."""
    roots = frozenset(roots)
    return sum(1 for t in enumerate_trees(g, w) if roots <= exploration_psi(g, t, ordering))


def psi_histogram(g, w, ordering=None):
    """Map each exploration outcome to the number of trees at w producing it."""
    hist = {}
    for t in enumerate_trees(g, w):
        s = exploration_psi(g, t, ordering)
        hist[s] = hist.get(s, 0) + 1
    return hist


def exploration_check(g, mtable, orderings, subsets=None):
    """Exploration counts against the m' table, the forest counts, and the canonical map.

    For every strongly connected W, every w in W and every ordering:
    the number of trees with exploration result W equals m'(W); those with
    result containing W number k(W); the canonical-tree map from forests
    rooted at W is injective and lands in that set.
    """
    subsets = list(mtable) if subsets is None else subsets
    cases = 0
    for ordering in orderings:
        for w in range(g.n):
            hist = psi_histogram(g, w, ordering)
            for s in hist:
                if s not in mtable or w not in s:
                    return _fail("exploration produced a set that is not strongly connected around w", w=w, psi=sorted(s))
            ntrees = len(enumerate_trees(g, w))
            counted = sum(hist.get(W, 0) for W in subsets if w in W)
            if counted != ntrees:
                return _fail("partition", w=w, trees=ntrees, counted=counted)
            for W in subsets:
                if w not in W:
                    continue
                cases += 1
                m = hist.get(W, 0)
                if m != mtable[W]:
                    return _fail("m_count != m'", W=sorted(W), w=w, m_count=m, m_prime=mtable[W], ordering=ordering)
                sup = sum(c for s, c in hist.items() if W <= s)
                forests = enumerate_forests(g, W)
                if sup != len(forests):
                    return _fail("superset count != k", W=sorted(W), w=w, count=sup, k=len(forests))
                images = set()
                for f in forests:
                    t = canonical_tree(g, f, w, ordering)
                    if not t.contains(f) or not W <= exploration_psi(g, t, ordering):
                        return _fail("canonical tree misses W", W=sorted(W), w=w, forest=f.encode())
                    images.add(t.parent)
                if len(images) != len(forests):
                    return _fail("canonical tree map not injective", W=sorted(W), w=w)
    return CheckResult("exploration", True, values={"cases": cases, "orderings": len(orderings)})


def _fail(reason, **witness):
    return CheckResult("exploration", False, witness={"reason": reason, **witness})


def sample_orderings(g, count, seed):
    rng = random.Random(seed)
    return [default_ordering(g)] + [random_ordering(g, rng) for _ in range(count - 1)]
