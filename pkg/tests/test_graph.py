import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgeguess import (GameGraph, NotATreeError, ParseError, PreconditionError, bipartition,
                       format_edge_list, heights, is_forest, is_tree, parse_edge_list)
from edgeguess.enumerate import labeled_trees, path_graph, prufer_decode


def longest_path_heights(g):
    """h(u, v) by brute force: longest simple path starting u, v, ... counted in vertices after u."""
    best = {}

    def walk(path):
        u, v = path[0], path[1]
        best[(u, v)] = max(best.get((u, v), 0), len(path) - 1)
        for w in g.adjacency[path[-1]]:
            if w not in path:
                walk(path + [w])

    for u in g.vertices:
        for v in g.adjacency[u]:
            walk([u, v])
    return best


def test_parse_undirected_and_directed():
    g = parse_edge_list("a b\n# comment\nb c  # trailing\n")
    assert g.sorted_edges() == [("a", "b"), ("b", "c")]
    assert not g.directed
    d = parse_edge_list("a > b\nb > a\n")
    assert d.directed and d.sorted_edges() == [("a", "b"), ("b", "a")]


def test_parse_isolated_vertex_round_trips():
    g = parse_edge_list("a b\nz\n")
    assert "z" in g.vertices
    assert parse_edge_list(format_edge_list(g)) == g


@pytest.mark.parametrize("text, fragment", [
    ("a b\nb > c\n", "mixed"),
    ("a a\n", "self-loop"),
    ("a b\nb a\n", "duplicate"),
    ("a b c\n", "cannot parse"),
])
def test_parse_errors_name_the_line(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_edge_list(text, "input.edges")


def test_is_tree_and_forest():
    assert is_tree(path_graph(4))
    assert not is_tree(GameGraph.from_edges([("a", "b"), ("c", "d")]))
    assert is_forest(GameGraph.from_edges([("a", "b"), ("c", "d")]))
    tri = GameGraph.from_edges([("x", "y"), ("y", "z"), ("z", "x")])
    assert not is_tree(tri) and not is_forest(tri)
    assert not is_forest(GameGraph.from_edges([("a", "b"), ("b", "a")], directed=True))


def test_require_tree_names_offender():
    tri = GameGraph.from_edges([("x", "y"), ("y", "z"), ("z", "x")])
    with pytest.raises(NotATreeError, match=r"edge \(x, y\)"):
        heights(tri)
    split = GameGraph.from_edges([("a", "b"), ("c", "d")])
    with pytest.raises(NotATreeError, match="'c'"):
        heights(split)


def test_bipartition_anchor_side(two_colour_tree):
    parts = bipartition(two_colour_tree, "w1")
    assert parts.side_a == {v for v in two_colour_tree.vertices if v.startswith("w")}
    assert bipartition(two_colour_tree, "b1").side_a == parts.side_b
    with pytest.raises(PreconditionError):
        bipartition(two_colour_tree, "nope")


def test_heights_on_path():
    h = heights(path_graph(4))
    # rooted at v1, the subtree under v2 is v2-v3-v4
    assert h[("v1", "v2")] == 3
    assert h[("v2", "v1")] == 1
    assert h[("v3", "v2")] == 2


@pytest.mark.parametrize("n", range(2, 7))
def test_heights_match_longest_paths(n):
    for g in labeled_trees(n):
        assert heights(g) == longest_path_heights(g)


def test_prufer_counts_and_distinctness():
    for n in range(2, 7):
        trees = {frozenset(g.edges) for g in labeled_trees(n)}
        assert len(trees) == n ** (n - 2)
        assert all(is_tree(GameGraph.from_edges(e)) for e in itertools.islice(trees, 50))
    with pytest.raises(ValueError):
        prufer_decode([0], 4)


def test_prufer_against_networkx():
    for seq in itertools.product(range(5), repeat=3):
        ours = {frozenset(e) for e in prufer_decode(seq, 5)}
        theirs = {frozenset(e) for e in nx.from_prufer_sequence(list(seq)).edges()}
        assert ours == theirs


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 7), min_size=6, max_size=6), st.permutations(range(8)))
def test_heights_invariant_under_relabeling(seq, perm):
    g = GameGraph.from_edges((str(u), str(v)) for u, v in prufer_decode(seq, 8))
    names = {str(i): f"n{p}" for i, p in enumerate(perm)}
    renamed = GameGraph.from_edges((names[u], names[v]) for u, v in g.edges)
    h, hr = heights(g), heights(renamed)
    assert {(names[u], names[v]): x for (u, v), x in h.items()} == hr
