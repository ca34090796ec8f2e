"""Reduction of the directed game to the undirected one.

The players know which end of the oriented edge each of them holds.  From
A's vertex the commonly known candidate positions are closed under
alternately stepping to admissible partners; splitting every vertex that has
both in- and out-edges turns the candidate subgraph into a graph of pure
sources and sinks whose underlying undirected graph carries the same game.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .errors import PlacementError, PreconditionError
from .graph import GameGraph, is_forest, is_tree
from .labeling import SIMULTANEOUS, SpeechMode
from .oracle import World, simulate, simulate_all
from .predictor import Prediction, predict, predict_all

CONVENTIONS = ("tail", "head")


def _as_directed(g: GameGraph) -> GameGraph:
    return g if g.directed else g.bidirected()


def _check_convention(convention: str) -> None:
    if convention not in CONVENTIONS:
        raise PreconditionError(f"orientation convention must be tail or head, not {convention!r}")


@dataclass(frozen=True)
class CandidateSets:
    va: frozenset[str]
    vb: frozenset[str]
    restricted: GameGraph  # the admissible edges among va and vb
    dropped: frozenset[str]


def candidate_sets(g: GameGraph, a: str, convention: str = "tail") -> CandidateSets:
    """Close {a} under admissible partner steps, alternating between the players."""
    _check_convention(convention)
    g = _as_directed(g)
    if a not in g.vertices:
        raise PreconditionError(f"unknown vertex {a!r}")
    # partners of an A-position, and A-positions next to a B-position
    to_b, to_a = ((g.successors, g.predecessors) if convention == "tail"
                  else (g.predecessors, g.successors))
    va, vb = {a}, set()
    queue = deque([("A", a)])
    while queue:
        side, x = queue.popleft()
        step, dest, dest_side = (to_b, vb, "B") if side == "A" else (to_a, va, "A")
        for y in step[x]:
            if y not in dest:
                dest.add(y)
                queue.append((dest_side, y))
    if convention == "tail":
        arcs = frozenset((u, v) for u, v in g.edges if u in va)
    else:
        arcs = frozenset((u, v) for u, v in g.edges if v in va)
    keep = frozenset(va | vb)
    restricted = GameGraph(keep, arcs, True)
    return CandidateSets(frozenset(va), frozenset(vb), restricted, g.vertices - keep)


@dataclass(frozen=True)
class SplitGraph:
    graph: GameGraph
    origin: dict  # split vertex -> original vertex
    out_copy: dict  # original vertex -> vertex keeping its out-edges
    in_copy: dict

    def origin_map(self) -> dict[str, str]:
        return dict(sorted(self.origin.items()))


def _fresh(base: str, tag: str, used: set) -> str:
    name = f"{base}_{tag}"
    while name in used:
        name = f"{name}_"
    used.add(name)
    return name


def split(g: GameGraph) -> SplitGraph:
    """Split every vertex with both in- and out-edges into an in-copy and an out-copy."""
    sg = _split(_as_directed(g))
    return SplitGraph(sg.graph, dict(sg.origin), dict(sg.out_copy), dict(sg.in_copy))


@lru_cache(maxsize=256)
def _split(g: GameGraph) -> SplitGraph:
    succ, pred = g.successors, g.predecessors
    mixed = sorted(v for v in g.vertices if succ[v] and pred[v])
    used = set(g.vertices)
    out_copy = {v: v for v in g.vertices}
    in_copy = {v: v for v in g.vertices}
    for v in mixed:
        used.discard(v)
    for v in mixed:
        in_copy[v] = _fresh(v, "in", used)
        out_copy[v] = _fresh(v, "out", used)
    arcs = frozenset((out_copy[u], in_copy[v]) for u, v in g.edges)
    origin = {}
    for v in g.vertices:
        origin[out_copy[v]] = v
        origin[in_copy[v]] = v
    return SplitGraph(GameGraph(frozenset(origin), arcs, True), origin, out_copy, in_copy)


@lru_cache(maxsize=256)
def _underlying(g: GameGraph) -> GameGraph:
    return g.underlying()


def is_zigzag_forest(g: GameGraph) -> bool:
    """True iff the graph has no zig-zag cycle, i.e. its split graph is a forest."""
    return is_forest(_split(_as_directed(g)).graph)


def _split_placement(sg: SplitGraph, placement, convention: str) -> tuple[str, str]:
    a, b = placement
    if convention == "tail":
        return sg.out_copy[a], sg.in_copy[b]
    return sg.in_copy[a], sg.out_copy[b]


def _check_admissible(g: GameGraph, placement, convention: str) -> None:
    a, b = placement
    for v in (a, b):
        if v not in g.vertices:
            raise PlacementError(f"unknown vertex {v!r}")
    arc = (a, b) if convention == "tail" else (b, a)
    if arc not in g.edges:
        raise PlacementError(f"placement ({a}, {b}) is not admissible with A at the {convention}")


def analyze_directed(g: GameGraph, placement: tuple[str, str], convention: str = "tail",
                     mode: SpeechMode = SIMULTANEOUS) -> Prediction:
    """Predict the directed game through candidate sets and vertex splitting.

    When the split candidate graph is not a tree the game is handed to the
    possible-worlds simulation instead.
    """
    _check_convention(convention)
    g = _as_directed(g)
    _check_admissible(g, placement, convention)
    cands = candidate_sets(g, placement[0], convention)
    sg = split(cands.restricted)
    a, b = _split_placement(sg, placement, convention)
    tree = sg.graph.underlying().restrict_to_component(a)
    if is_tree(tree):
        return predict(tree, (a, b), mode)
    return simulate(g, placement, mode, convention).outcome.as_prediction()


def analyze_directed_all(g: GameGraph, convention: str = "tail",
                         mode: SpeechMode = SIMULTANEOUS) -> dict[World, Prediction]:
    """``analyze_directed`` for every admissible placement, sharing work per component."""
    _check_convention(convention)
    g = _as_directed(g)
    sg = _split(g)
    under = _underlying(sg.graph)
    results: dict[World, Prediction] = {}
    wanted: dict[frozenset, list] = {}
    for u, v in g.edges:
        placement = (u, v) if convention == "tail" else (v, u)
        a, b = _split_placement(sg, placement, convention)
        wanted.setdefault(under.component(a), []).append((placement, (a, b)))
    fallback = None
    for comp, pairs in wanted.items():
        sub = under.subgraph(comp)
        if is_tree(sub):
            got = predict_all(sub, mode, [split_pair for _, split_pair in pairs])
            for placement, split_pair in pairs:
                results[World(*placement)] = got[split_pair]
            continue
        if fallback is None:
            fallback = simulate_all(g, mode, convention)
        for placement, _ in pairs:
            results[World(*placement)] = fallback[World(*placement)].as_prediction()
    return results


def admissible_placements(g: GameGraph, convention: str = "tail") -> list[tuple[str, str]]:
    g = _as_directed(g)
    if convention == "tail":
        return sorted(g.edges)
    return sorted((v, u) for u, v in g.edges)

