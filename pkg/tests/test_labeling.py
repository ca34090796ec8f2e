import itertools
import json

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ALL_MODES, fixture_path
from edgeguess import (SIMULTANEOUS, EdgeLabel, GameGraph, InvalidLabelingError, Labeling, bipartition,
                       ParseError, PreconditionError, SpeechMode, adapt_mode, cut_leaves_labeling,
                       guessing_player, heights, playbook_from_labeling, simulate_with_playbook,
                       validate_labeling)
from edgeguess.enumerate import labeled_trees, path_graph, prufer_decode

ALT_A = SpeechMode.alternating("A")


def expected(name):
    return Labeling.from_json(fixture_path(name).read_text())


def test_speech_mode_slots():
    assert SIMULTANEOUS.speakers(3) == ("A", "B")
    assert ALT_A.speakers(1) == ("A",) and ALT_A.speakers(2) == ("B",)
    assert ALT_A.first_slot("A", 2) == 3
    assert SpeechMode.alternating("B").first_slot("A", 1) == 2
    with pytest.raises(ValueError):
        SpeechMode("alternating", None)


def test_simultaneous_labels_of_two_colour_tree(two_colour_tree):
    lab = cut_leaves_labeling(two_colour_tree)
    assert lab == expected("two_colour_tree.simultaneous.json")
    assert lab.bidirected() == [("b5", "w8")]
    assert lab.label("w8", "b5") == 5


def test_alternating_labels_of_two_colour_tree(two_colour_tree):
    lab = cut_leaves_labeling(two_colour_tree, ALT_A, "w1")
    assert lab == expected("two_colour_tree.alternating.json")
    into_w8 = [e for e, el in lab.edges.items() if el.target == "w8" and el.label == 5]
    assert len(into_w8) == 2
    for el in lab.edges.values():
        assert (el.label % 2 == 0) == el.target.startswith("b")


def test_path_of_four():
    lab = cut_leaves_labeling(path_graph(4))
    assert lab[("v1", "v2")] == EdgeLabel("v2", 1)
    assert lab[("v3", "v4")] == EdgeLabel("v3", 1)
    assert lab[("v2", "v3")] == EdgeLabel(None, 2)


def test_single_edge_and_errors():
    g = GameGraph.from_edges([("a", "b")])
    assert cut_leaves_labeling(g)[("a", "b")] == EdgeLabel(None, 1)
    assert cut_leaves_labeling(g, ALT_A, "a")[("a", "b")] == EdgeLabel("a", 1)
    with pytest.raises(PreconditionError):
        cut_leaves_labeling(g, ALT_A)
    with pytest.raises(PreconditionError):
        cut_leaves_labeling(GameGraph.from_edges([("x", "y"), ("y", "z"), ("z", "x")]))
    with pytest.raises(PreconditionError):
        cut_leaves_labeling(GameGraph(frozenset({"a"}), frozenset()))


def test_json_round_trip(two_colour_tree):
    lab = cut_leaves_labeling(two_colour_tree)
    assert Labeling.from_json(lab.to_json()) == lab
    assert lab.to_json() == cut_leaves_labeling(two_colour_tree).to_json()
    with pytest.raises(ParseError):
        Labeling.from_json('[{"edge": ["a", "b"], "direction": "sideways", "label": 1}]')
    with pytest.raises(ParseError):
        Labeling.from_json("{}")


def test_dot_export_marks_bidirected(two_colour_tree):
    dot = cut_leaves_labeling(two_colour_tree).to_dot()
    assert dot.startswith("digraph")
    assert '"b5" -> "w8" [label=5, dir=both]' in dot
    assert '"b3" -> "w7" [label=2, dir=forward]' in dot


@pytest.mark.parametrize("n", range(2, 8))
def test_canonical_labelings_validate(n):
    for g in labeled_trees(n):
        anchor = min(g.vertices)
        for mode in ALL_MODES:
            assert validate_labeling(g, mode, cut_leaves_labeling(g, mode, anchor), anchor) == []


def test_lowered_bidirected_label_breaks_monotonicity(two_colour_tree):
    lab = cut_leaves_labeling(two_colour_tree).with_label(("w8", "b5"), None, 4)
    problems = validate_labeling(two_colour_tree, SIMULTANEOUS, lab)
    assert any("not increasing" in p for p in problems)


def test_two_outgoing_edges_reported():
    g = path_graph(3)
    lab = Labeling({("v1", "v2"): EdgeLabel("v1", 1), ("v2", "v3"): EdgeLabel("v3", 1)})
    problems = validate_labeling(g, SIMULTANEOUS, lab)
    assert any("v2 has 2 outgoing" in p for p in problems)


def test_parity_violation_reported():
    g = path_graph(3)
    lab = Labeling({("v1", "v2"): EdgeLabel("v2", 2), ("v2", "v3"): EdgeLabel("v2", 2)})
    problems = validate_labeling(g, ALT_A, lab, "v2")
    assert any("odd label" in p for p in problems)


def test_simultaneous_label_is_smaller_height():
    for n in range(2, 8):
        for g in labeled_trees(n):
            h = heights(g)
            lab = cut_leaves_labeling(g)
            for (u, v), el in lab.edges.items():
                assert el.label == min(h[(u, v)], h[(v, u)])
                if h[(u, v)] == h[(v, u)]:
                    assert el.target is None
                else:
                    assert el.target == (u if h[(u, v)] < h[(v, u)] else v)


# every valid labeling of a small tree, by brute force


def _all_valid_labelings(g, mode, anchor, max_label):
    """Brute force over orientations with at most one out-edge per vertex, then labels."""
    edges = g.sorted_edges()
    side = bipartition(g, anchor).side_a if mode.starter == "A" else bipartition(g, anchor).side_b
    ends = [(u, v, None) if not mode.is_alternating else (u, v) for u, v in edges]
    for targets in itertools.product(*ends):
        out = {}
        for (u, v), t in zip(edges, targets):
            if t is not None:
                src = v if t == u else u
                out[src] = out.get(src, 0) + 1
        if any(c > 1 for c in out.values()):
            continue
        choices = []
        for t in targets:
            labels = range(1, max_label + 1)
            if mode.is_alternating:
                labels = [n for n in labels if (n % 2 == 1) == (t in side)]
            choices.append(labels)
        for combo in itertools.product(*choices):
            lab = Labeling({e: EdgeLabel(t, n) for e, t, n in zip(edges, targets, combo)})
            if not validate_labeling(g, mode, lab, anchor):
                yield lab


def _small_trees(max_n):
    for n in range(2, max_n + 1):
        for t in nx.nonisomorphic_trees(n):
            yield GameGraph.from_edges((str(u), str(v)) for u, v in t.edges())


@pytest.mark.parametrize("mode, max_n, slack", [(SIMULTANEOUS, 5, 2), (ALT_A, 5, 3), (SpeechMode.alternating("B"), 5, 3)],
                         ids=["simultaneous", "alternating-A", "alternating-B"])
def test_cutting_off_leaves_is_fastest(mode, max_n, slack):
    # labels range over 1 .. (canonical maximum + slack); larger ones are trivially slower
    found = 0
    for g in _small_trees(max_n):
        anchor = "0"
        best = cut_leaves_labeling(g, mode, anchor)
        max_label = max(el.label for el in best.edges.values()) + slack
        for lab in _all_valid_labelings(g, mode, anchor, max_label):
            found += 1
            for e, el in lab.edges.items():
                assert best.edges[e].label <= el.label, (g.sorted_edges(), lab)
    assert found > 100


def _random_valid_labeling(g, mode, anchor, rng):
    """Orient every edge toward a random sink (or sink edge), then grow labels along the way."""
    sink = rng.choice(g.sorted_vertices())
    twin = None
    if not mode.is_alternating and rng.random() < 0.5:
        twin = rng.choice(sorted(g.adjacency[sink]))
    side = bipartition(g, anchor).side_a if mode.starter == "A" else bipartition(g, anchor).side_b
    parent = {sink: None}
    order = [sink]
    if twin is not None:
        parent[twin] = None
        order.append(twin)
    for x in order:
        for y in sorted(g.adjacency[x]):
            if y not in parent:
                parent[y] = x
                order.append(y)
    incoming = {v: 0 for v in g.vertices}
    edges = {}
    for x in reversed(order):
        p = parent[x]
        if p is None:
            continue
        n = incoming[x] + rng.randint(1, 3)
        if mode.is_alternating and (n % 2 == 1) != (p in side):
            n += 1
        edges[(min(x, p), max(x, p))] = EdgeLabel(p, n)
        incoming[p] = max(incoming[p], n)
    if twin is not None:
        n = max(incoming[sink], incoming[twin]) + rng.randint(1, 3)
        edges[(min(sink, twin), max(sink, twin))] = EdgeLabel(None, n)
    return Labeling(edges)


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 8), st.randoms(use_true_random=False), st.sampled_from(ALL_MODES))
def test_cutting_off_leaves_beats_random_valid_labelings(n, rng, mode):
    seq = [rng.randrange(n) for _ in range(n - 2)]
    g = GameGraph.from_edges((str(u), str(v)) for u, v in prufer_decode(seq, n))
    lab = _random_valid_labeling(g, mode, "0", rng)
    assert validate_labeling(g, mode, lab, "0") == []
    best = cut_leaves_labeling(g, mode, "0")
    for e, el in lab.edges.items():
        assert best.edges[e].label <= el.label


def test_playbook_star():
    g = GameGraph.from_edges([("c", "x"), ("c", "y"), ("c", "z")])
    book = playbook_from_labeling(g, SIMULTANEOUS, cut_leaves_labeling(g))
    for player in ("A", "B"):
        assert book.move(player, "x") == (1, "c")
        assert book.move(player, "c") is None


def test_playbook_single_edge():
    g = GameGraph.from_edges([("a", "b")])
    book = playbook_from_labeling(g, SIMULTANEOUS, cut_leaves_labeling(g))
    assert book.move("A", "b") == (1, "a") and book.move("B", "a") == (1, "b")


def test_playbook_alternating_tree(two_colour_tree):
    lab = cut_leaves_labeling(two_colour_tree, ALT_A, "w1")
    book = playbook_from_labeling(two_colour_tree, ALT_A, lab, "w1")
    assert book.move("A", "b6") == (3, "w9")
    # A only ever watches black vertices
    assert set(book.moves["A"]) <= {v for v in two_colour_tree.vertices if v.startswith("b")}
    assert json.loads(json.dumps(book.as_dict()))["A"]["b6"] == {"time": 3, "announce": "w9"}


def test_playbook_rejects_invalid_labeling():
    g = path_graph(3)
    lab = Labeling({("v1", "v2"): EdgeLabel("v1", 1), ("v2", "v3"): EdgeLabel("v3", 1)})
    with pytest.raises(InvalidLabelingError) as info:
        playbook_from_labeling(g, SIMULTANEOUS, lab)
    assert info.value.violations


def test_adapt_single_edge_into_alternating():
    g = GameGraph.from_edges([("a", "b")])
    lab = adapt_mode(g, cut_leaves_labeling(g), SIMULTANEOUS, ALT_A, "a")
    assert lab[("a", "b")] == EdgeLabel("a", 1)
    book = playbook_from_labeling(g, ALT_A, lab, "a")
    trace = simulate_with_playbook(g, ("a", "b"), ALT_A, book)
    assert (trace.outcome.kind, trace.outcome.player, trace.outcome.time) == ("second", "B", 2)


def test_adapt_path_of_three_keeps_time_one():
    g = path_graph(3)
    lab = adapt_mode(g, cut_leaves_labeling(g), SIMULTANEOUS, ALT_A, "v2")
    assert lab[("v1", "v2")] == EdgeLabel("v2", 1)
    assert lab[("v2", "v3")] == EdgeLabel("v2", 1)


def test_adapt_alternating_to_simultaneous_keeps_labels(two_colour_tree):
    lab = cut_leaves_labeling(two_colour_tree, ALT_A, "w1")
    back = adapt_mode(two_colour_tree, lab, ALT_A, SIMULTANEOUS, "w1")
    assert back == lab
    assert validate_labeling(two_colour_tree, SIMULTANEOUS, back) == []


def test_adapt_output_is_valid():
    for n in range(2, 7):
        for g in labeled_trees(n):
            for starter in ("A", "B"):
                mode = SpeechMode.alternating(starter)
                out = adapt_mode(g, cut_leaves_labeling(g), SIMULTANEOUS, mode, "0")
                assert validate_labeling(g, mode, out, "0") == []


def test_guessing_player(two_colour_tree):
    lab = cut_leaves_labeling(two_colour_tree)
    assert guessing_player(lab, ("w8", "b5")) == "both"
    assert guessing_player(lab, ("w7", "b3")) == "A"
    assert guessing_player(lab, ("b3", "w7")) == "B"
