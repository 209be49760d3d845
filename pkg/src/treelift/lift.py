"""The spanning tree graph of a digraph.

Its vertices are the arborescences of G.  For a tree ``t_i`` rooted at i and
an edge (i, j) of G there is an edge ``t_i -> t_j`` of the same weight,
where ``t_j`` is ``t_i`` plus the edge (i, j) minus the out-edge of j.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

from .arborescence import Arborescence, all_trees, is_valid_forest, k_count, laplacian, unit_tree_counts
from .checks import CheckResult
from .digraph import Digraph, based_closed_walks, is_strongly_connected, parse_graph
from .matrix import diagonal

DEFAULT_LIFT_CAP = 100_000


class LiftTooLarge(ValueError):
    def __init__(self, size, cap):
        self.size = size
        self.cap = cap
        super().__init__(f"lift would have {size} vertices, above the cap of {cap}")


@dataclass(frozen=True, eq=False)
class LiftGraph:
    graph: Digraph
    trees: tuple  # trees[k] is the arborescence of lift vertex k
    base: Digraph

    @property
    def roots(self):
        return tuple(t.root for t in self.trees)

    def root_of(self, k):
        return self.trees[k].root

    def index(self):
        return {t.parent: k for k, t in enumerate(self.trees)}

    @cached_property
    def successors(self):
        """successors[k][j]: lift vertex reached from k along (root(k), j)."""
        succ = [dict() for _ in self.trees]
        for u, v, _ in self.graph.edges:
            succ[u][self.trees[v].root] = v
        return succ


def predicted_size(g):
    return sum(unit_tree_counts(g))


def swap(t, j):
    """Tree rooted at j obtained from t by adding (root, j) and dropping j's out-edge."""
    parent = list(t.parent)
    parent[t.root] = j
    parent[j] = None
    return Arborescence(frozenset((j,)), tuple(parent))


def lift_label(t):
    return f"r{t.root}[{t.encode()}]"


def build_lift(g, cap=DEFAULT_LIFT_CAP):
    """Construct the spanning tree graph of a strongly connected g."""
    if not is_strongly_connected(g):
        raise ValueError("graph is not strongly connected")
    size = predicted_size(g)
    if size > cap:
        raise LiftTooLarge(size, cap)
    trees = all_trees(g)
    index = {t.parent: k for k, t in enumerate(trees)}
    edges = []
    for k, t in enumerate(trees):
        i = t.root
        for j, w in g.out_edges(i):
            kj = index[swap(t, j).parent]
            assert kj != k, "lift edge would be a loop"
            edges.append((k, kj, w))
    # Digraph rejects parallel edges, so simplicity is checked on construction
    lg = Digraph(
        len(trees),
        tuple(edges),
        tuple(g.diag[t.root] for t in trees),
        None if g.vweights is None else tuple(g.vweights[t.root] for t in trees),
        tuple(lift_label(t) for t in trees),
    )
    return LiftGraph(lg, tuple(trees), g)


def lift_vertex_values(lift, values):
    """Pull per-vertex values of G back to the lift: vertex t gets values[root(t)]."""
    return tuple(values[t.root] for t in lift.trees)


def lift_matrix(lift):
    """Lifted weight matrix: G-weight of (i, j) on lift edges, root diagonal on the diagonal."""
    return lift.graph.weight_matrix()


def lift_diagonal(lift, values):
    return diagonal(lift_vertex_values(lift, values))


def schrodinger_matrix(g, y=None):
    """H = Q + Y with Q the Laplacian of the x-weights and Y = diag(y)."""
    y = g.vweights if y is None else y
    if y is None:
        raise ValueError("graph has no vertex weights")
    return laplacian(g) + diagonal(y)


def lift_schrodinger(g, lift=None):
    """The lifted Schroedinger matrix: lift Laplacian plus y of each tree's root."""
    if g.vweights is None:
        raise ValueError("graph has no vertex weights")
    lift = build_lift(g) if lift is None else lift
    return laplacian(lift.graph) + lift_diagonal(lift, g.vweights)


# verification ---------------------------------------------------------------


def lift_structure_check(g, lift):
    """Structural invariants of a freshly built or loaded lift."""
    problems = []
    lg = lift.graph
    if lg.n != predicted_size(g):
        problems.append(f"size {lg.n} != tree count {predicted_size(g)}")
    if not is_strongly_connected(lg):
        problems.append("lift is not strongly connected")
    for k, t in enumerate(lift.trees):
        if lg.out_degree(k) != g.out_degree(t.root):
            problems.append(f"out-degree of lift vertex {k} differs from root {t.root}")
        if lg.diag[k] != g.diag[t.root]:
            problems.append(f"diagonal of lift vertex {k} differs from root {t.root}")
    for u, v, w in lg.edges:
        i, j = lift.trees[u].root, lift.trees[v].root
        if w != g.weight(i, j):
            problems.append(f"lift edge {u}->{v} weight {w} != base weight of ({i},{j})")
    return CheckResult(
        "lift-structure",
        not problems,
        values={"vertices": lg.n, "edges": len(lg.edges)},
        witness={"problems": problems[:5]} if problems else {},
    )


def walk_lift_records(g, lift, max_len):
    """Per based closed walk of G: ``(walk, lift count, forest count)``.

    A lift of ``v1..vn`` is a based closed walk of the lift starting at a
    tree rooted at v1 whose roots follow the walk.
    """
    succ = lift.successors
    by_root = {}
    for k, t in enumerate(lift.trees):
        by_root.setdefault(t.root, []).append(k)
    kcache = {}
    out = []
    for walk in based_closed_walks(g, max_len):
        lifts = 0
        for k in by_root[walk[0]]:
            cur = k
            for v in walk[1:] + walk[:1]:
                if v != lift.trees[cur].root:
                    cur = succ[cur].get(v)
                    if cur is None:
                        break
            lifts += cur == k
        sup = frozenset(walk)
        if sup not in kcache:
            kcache[sup] = k_count(g, sup)
        out.append((walk, lifts, kcache[sup]))
    return out


def count_walk_lifts(g, lift, max_len):
    """Every closed walk must lift exactly k(support) times."""
    records = walk_lift_records(g, lift, max_len)
    bad = next((r for r in records if r[1] != r[2]), None)
    return CheckResult(
        "walk-lifts",
        bad is None,
        values={"walks": len(records), "max_len": max_len},
        witness={} if bad is None else {"walk": bad[0], "lifts": bad[1], "forests": bad[2]},
    )


# sidecar ----------------------------------------------------------------------

_SIDECAR = re.compile(r"liftvertex (\d+) root (\d+) tree ([0-9>,]*)\Z")


def format_sidecar(lift):
    lines = [f"# lift of a {lift.base.n}-vertex graph: {lift.graph.n} trees"]
    for k, t in enumerate(lift.trees):
        lines.append(f"liftvertex {k} root {t.root} tree {t.encode()}")
    return "\n".join(lines) + "\n"


def parse_sidecar(text, n):
    """Parse a label sidecar into a list of arborescences of an n-vertex graph."""
    trees = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SIDECAR.match(line)
        if not m:
            raise ValueError(f"line {lineno}: malformed sidecar entry")
        k, root, enc = int(m.group(1)), int(m.group(2)), m.group(3)
        parent = [None] * n
        for pair in filter(None, enc.split(",")):
            a, b = pair.split(">")
            parent[int(a)] = int(b)
        if parent[root] is not None:
            raise ValueError(f"line {lineno}: root {root} has an out-edge")
        if k in trees:
            raise ValueError(f"line {lineno}: repeated lift vertex {k}")
        trees[k] = Arborescence(frozenset((root,)), tuple(parent))
    if sorted(trees) != list(range(len(trees))):
        raise ValueError("lift vertex indices are not 0..N-1")
    return [trees[k] for k in range(len(trees))]


def load_lift(g, graph_text, sidecar_text):
    """Load a serialized lift without validating it against g."""
    lg = parse_graph(graph_text)
    trees = parse_sidecar(sidecar_text, g.n)
    if len(trees) != lg.n:
        raise ValueError("sidecar and lift graph disagree on the vertex count")
    return LiftGraph(lg, tuple(trees), g)


def lift_file_check(g, lift):
    """Compare a loaded lift against the construction rules for g."""
    problems = []
    lg = lift.graph
    for k, t in enumerate(lift.trees):
        if not is_valid_forest(g, t):
            problems.append(f"lift vertex {k} is not an arborescence of the graph")
    index = {}
    for k, t in enumerate(lift.trees):
        if t.parent in index:
            problems.append(f"lift vertices {index[t.parent]} and {k} carry the same tree")
        index[t.parent] = k
    expected = {tuple(p) for p in (t.parent for t in all_trees(g))}
    if set(index) != expected:
        problems.append(f"tree set differs: {len(expected)} expected, {len(index)} given")
    if not problems:
        want = set()
        for k, t in enumerate(lift.trees):
            for j, w in g.out_edges(t.root):
                want.add((k, index[swap(t, j).parent], w))
        have = set(lg.edges)
        for e in sorted(want - have, key=str)[:3]:
            problems.append(f"missing or mis-weighted lift edge {e[0]}->{e[1]} (weight {e[2]})")
        for e in sorted(have - want, key=str)[:3]:
            problems.append(f"unexpected lift edge {e[0]}->{e[1]} (weight {e[2]})")
        for k, t in enumerate(lift.trees):
            if lg.diag[k] != g.diag[t.root]:
                problems.append(f"lift vertex {k} diagonal {lg.diag[k]} != {g.diag[t.root]}")
    return CheckResult(
        "lift-file",
        not problems,
        values={"vertices": lg.n, "edges": len(lg.edges)},
        witness={"problems": problems[:5]} if problems else {},
    )
