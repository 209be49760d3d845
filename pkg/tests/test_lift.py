from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import strong_digraphs
from treelift.arborescence import all_trees
from treelift.digraph import Digraph, complete_digraph, cycle_digraph, format_graph
from treelift.lift import (
    LiftTooLarge,
    build_lift,
    count_walk_lifts,
    format_sidecar,
    lift_file_check,
    lift_label,
    lift_schrodinger,
    lift_structure_check,
    load_lift,
    parse_sidecar,
    predicted_size,
    walk_lift_records,
)
from treelift.poly import MultiPoly


def brute_lift_edges(g):
    """Pairs of trees related by adding (i, j) and dropping j's out-edge, compared as edge sets."""
    trees = all_trees(g)
    out = set()
    for a, s in enumerate(trees):
        es = set(s.edges())
        for b, t in enumerate(trees):
            i, j = s.root, t.root
            if i == j or not g.has_edge(i, j):
                continue
            jout = next(e for e in es if e[0] == j)
            if (es - {jout}) | {(i, j)} == set(t.edges()):
                out.add((a, b, g.weight(i, j)))
    return out


def test_k3_lift_shape():
    lift = build_lift(complete_digraph(3))
    assert lift.graph.n == 9 and len(lift.graph.edges) == 18
    assert lift.graph.labels[0] == "r0[1>0,2>0]"
    assert lift.roots == (0, 0, 0, 1, 1, 1, 2, 2, 2)


def test_cycle_lift_is_a_cycle():
    lift = build_lift(cycle_digraph(4))
    assert lift.graph.n == 4
    assert sorted((lift.roots[u], lift.roots[v]) for u, v, _ in lift.graph.edges) == [(0, 1), (1, 2), (2, 3), (3, 0)]


@given(strong_digraphs(max_n=4))
def test_lift_edges_match_definition(g):
    lift = build_lift(g)
    assert set(lift.graph.edges) == brute_lift_edges(g)
    assert lift_structure_check(g, lift)


def test_lift_inherits_diagonal_and_vertex_weights():
    g = complete_digraph(3).replace(diag=(1, 2, 3), vweights=(MultiPoly.var("y_0"), 0, 5))
    lift = build_lift(g)
    for k, t in enumerate(lift.trees):
        assert lift.graph.diag[k] == g.diag[t.root]
        assert lift.graph.vweights[k] == g.vweights[t.root]


def test_lift_errors():
    with pytest.raises(ValueError):
        build_lift(Digraph(2, ((0, 1, 1),)))
    with pytest.raises(LiftTooLarge) as exc:
        build_lift(complete_digraph(4), cap=10)
    assert exc.value.size == predicted_size(complete_digraph(4)) == 64


def test_lift_schrodinger_rows():
    g = complete_digraph(3).replace(vweights=(1, 2, 3))
    lift = build_lift(g)
    h = lift_schrodinger(g, lift)
    for k in range(h.n):
        assert sum(h.rows[k]) == g.vweights[lift.roots[k]]


def test_walk_lifts_k3():
    g = complete_digraph(3)
    lift = build_lift(g)
    assert count_walk_lifts(g, lift, 6)
    recs = {w: (n, k) for w, n, k in walk_lift_records(g, lift, 3)}
    assert recs[(0, 1)] == (2, 2)
    assert recs[(0, 1, 2)] == (1, 1)


def test_walk_lifts_with_self_loops():
    g = cycle_digraph(2).replace(diag=(Fraction(1, 2), 0))
    lift = build_lift(g)
    res = count_walk_lifts(g, lift, 5)
    assert res and res.values["walks"] > 0


def test_sidecar_round_trip():
    g = complete_digraph(3)
    lift = build_lift(g)
    text = format_sidecar(lift)
    assert "liftvertex 0 root 0 tree 1>0,2>0" in text
    assert parse_sidecar(text, 3) == list(lift.trees)
    loaded = load_lift(g, format_graph(lift.graph), text)
    assert lift_file_check(g, loaded)


@pytest.mark.parametrize(
    "bad",
    ["liftvertex 0 root 0 tree 1>0,2>0\nliftvertex 0 root 1 tree 0>1,2>1\n", "liftvertex x\n", "liftvertex 1 root 0 tree 1>0,2>0\n"],
)
def test_sidecar_rejects_malformed(bad):
    with pytest.raises(ValueError):
        parse_sidecar(bad, 3)


@settings(max_examples=30)
@given(st.data())
def test_corrupted_lift_file_fails(data):
    g = complete_digraph(3)
    lift = build_lift(g)
    edges = list(lift.graph.edges)
    k = data.draw(st.integers(0, len(edges) - 1))
    u, v, w = edges[k]
    mode = data.draw(st.sampled_from(["weight", "retarget", "drop"]))
    if mode == "weight":
        edges[k] = (u, v, w + 1)
    elif mode == "retarget":
        taken = {b for a, b, _ in edges if a == u}
        target = data.draw(st.sampled_from([x for x in range(9) if x != u and x not in taken]))
        edges[k] = (u, target, w)
    else:
        del edges[k]
    bad = lift.graph.replace(edges=tuple(edges))
    loaded = load_lift(g, format_graph(bad), format_sidecar(lift))
    res = lift_file_check(g, loaded)
    assert not res and res.witness["problems"]


def test_swapped_sidecar_labels_fail():
    g = complete_digraph(3)
    lift = build_lift(g)
    lines = format_sidecar(lift).splitlines()
    a, b = lines[1].split(" tree "), lines[2].split(" tree ")
    lines[1], lines[2] = f"{a[0]} tree {b[1]}", f"{b[0]} tree {a[1]}"
    loaded = load_lift(g, format_graph(lift.graph), "\n".join(lines))
    assert not lift_file_check(g, loaded)


def test_label_format():
    (t,) = [t for t in all_trees(cycle_digraph(3)) if t.root == 2]
    assert lift_label(t) == "r2[0>1,1>2]"
