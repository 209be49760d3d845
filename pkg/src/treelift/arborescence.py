"""Directed rooted spanning trees and forests.

Edges point toward the roots: every vertex outside the root set has exactly
one outgoing edge, recorded in ``parent``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .checks import CheckResult
from .matrix import RingMatrix, det, minor_matrix
from .poly import simplify


@dataclass(frozen=True)
class Forest:
    roots: frozenset
    parent: tuple  # parent[v] is v's out-neighbour, None for roots

    def edges(self):
        """Canonical encoding: sorted ``(vertex, out-neighbour)`` pairs."""
        return tuple((v, p) for v, p in enumerate(self.parent) if p is not None)

    def encode(self):
        return ",".join(f"{v}>{p}" for v, p in self.edges())

    def contains(self, other):
        return all(p is None or self.parent[v] == p for v, p in enumerate(other.parent))

    def weight(self, g):
        w = 1
        for v, p in self.edges():
            w = w * g.weight(v, p)
        return simplify(w)

    def sort_key(self):
        return tuple(-1 if p is None else p for p in self.parent)


@dataclass(frozen=True)
class Arborescence(Forest):
    @property
    def root(self):
        (r,) = self.roots
        return r

    @classmethod
    def from_parent(cls, parent):
        parent = tuple(parent)
        roots = [v for v, p in enumerate(parent) if p is None]
        if len(roots) != 1:
            raise ValueError("an arborescence has exactly one root")
        return cls(frozenset(roots), parent)


def is_valid_forest(g, f):
    """Every out-edge exists in g and every path reaches the root set."""
    if len(f.parent) != g.n or not f.roots:
        return False
    for v, p in enumerate(f.parent):
        if (p is None) != (v in f.roots):
            return False
        if p is not None and not g.has_edge(v, p):
            return False
    for v in range(g.n):
        seen = set()
        while f.parent[v] is not None:
            if v in seen:
                return False
            seen.add(v)
            v = f.parent[v]
    return True


def _enumerate(g, roots):
    roots = frozenset(roots)
    if not roots:
        raise ValueError("root set must be nonempty")
    if not all(0 <= r < g.n for r in roots):
        raise ValueError("root out of range")
    order = [v for v in range(g.n) if v not in roots]
    choices = [sorted(u for u, _ in g.out_edges(v)) for v in range(g.n)]
    parent = [None] * g.n

    def closes_cycle(v):
        u = parent[v]
        while u is not None:
            if u == v:
                return True
            u = parent[u]
        return False

    def rec(i):
        if i == len(order):
            yield tuple(parent)
            return
        v = order[i]
        for u in choices[v]:
            parent[v] = u
            if not closes_cycle(v):
                yield from rec(i + 1)
        parent[v] = None

    # choice lists are sorted and vertices assigned in index order, so the
    # output is already lexicographic in the parent tuple
    yield from rec(0)


def enumerate_forests(g, roots):
    """All spanning forests rooted at ``roots``."""
    roots = frozenset(roots)
    return [Forest(roots, p) for p in _enumerate(g, roots)]


def enumerate_trees(g, root):
    """All arborescences rooted at ``root``."""
    return [Arborescence(frozenset((root,)), p) for p in _enumerate(g, (root,))]


def all_trees(g):
    """Arborescences of g ordered by root, then lexicographically."""
    out = []
    for r in range(g.n):
        out.extend(enumerate_trees(g, r))
    return out


def k_count(g, roots):
    """Number of spanning forests rooted at ``roots``."""
    return sum(1 for _ in _enumerate(g, roots))


def psi_sum(g, roots):
    """Total weight of the spanning forests rooted at ``roots``."""
    total = 0
    for f in enumerate_forests(g, roots):
        total = total + f.weight(g)
    return simplify(total)


def tau(g):
    """Total weight of all arborescences of g, by enumeration."""
    total = 0
    for r in range(g.n):
        total = total + psi_sum(g, (r,))
    return simplify(total)


def laplacian(g):
    """Out-degree Laplacian: -w(i,j) off the diagonal, row sums zero.

    The diagonal of g is ignored, so for a chain whose weights plus
    diagonal are row-stochastic this is I - P.
    """
    rows = [[0] * g.n for _ in range(g.n)]
    for u, v, w in g.edges:
        rows[u][v] = -w
        rows[u][u] = rows[u][u] + w
    return RingMatrix([[simplify(x) for x in r] for r in rows])


def forest_minor(g, roots, lap=None):
    """det of the Laplacian with the rows and columns of ``roots`` removed."""
    lap = laplacian(g) if lap is None else lap
    return det(minor_matrix(lap, roots))


def tau_by_minors(g, lap=None):
    lap = laplacian(g) if lap is None else lap
    total = 0
    for v in range(g.n):
        total = total + det(minor_matrix(lap, (v,)))
    return simplify(total)


def matrix_forest_check(g, roots):
    """Laplacian minor at ``roots`` against the enumerated forest weights."""
    roots = frozenset(roots)
    d = forest_minor(g, roots)
    e = psi_sum(g, roots)
    ok = d == e
    return CheckResult(
        "matrix-forest",
        ok,
        values={"roots": sorted(roots), "minor": d, "enumerated": e},
        witness={} if ok else {"roots": sorted(roots), "minor": d, "enumerated": e},
    )


def matrix_tree_check(g):
    d = tau_by_minors(g)
    e = tau(g)
    ok = d == e
    return CheckResult(
        "matrix-tree",
        ok,
        values={"minors": d, "enumerated": e},
        witness={} if ok else {"minors": d, "enumerated": e},
    )


def unit_tree_counts(g):
    """Number of arborescences per root, via integer minors of the unit Laplacian."""
    rows = [[0] * g.n for _ in range(g.n)]
    for u, v, _ in g.edges:
        rows[u][v] -= 1
        rows[u][u] += 1
    lap = RingMatrix(rows)
    return [det(minor_matrix(lap, (v,))) for v in range(g.n)]
