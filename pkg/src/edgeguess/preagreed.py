"""A pre-agreed strategy under which both players learn their position."""

from __future__ import annotations

from typing import Iterable, Optional

from .errors import ParseError, PreconditionError
from .graph import Edge, GameGraph, _bipartition, _edge_key, require_tree
from .labeling import (EdgeLabel, Labeling, SpeechMode, cut_leaves_labeling,
                       playbook_from_labeling, starter_side)
from .oracle import simulate_all

EdgeBijection = dict[Edge, int]


def edge_bijection(g: GameGraph, order: Optional[Iterable[tuple[str, str]]] = None) -> EdgeBijection:
    """Number the edges 0..|E|-1, lexicographically unless an order is given."""
    if order is None:
        return {e: i for i, e in enumerate(g.sorted_edges())}
    phi = {}
    for i, (u, v) in enumerate(order):
        key = _edge_key(u, v)
        if key in phi:
            raise PreconditionError(f"edge ({u}, {v}) appears twice in the edge order")
        phi[key] = i
    check_bijection(g, phi)
    return phi


def check_bijection(g: GameGraph, phi: EdgeBijection) -> None:
    if set(phi) != set(g.edges):
        missing = sorted(set(g.edges) - set(phi))
        extra = sorted(set(phi) - set(g.edges))
        raise PreconditionError(f"edge numbering does not match the graph: missing {missing}, extra {extra}")
    if sorted(phi.values()) != list(range(len(g.edges))):
        raise PreconditionError("edge numbering must use each of 0..|E|-1 exactly once")


def parse_edge_order(text: str) -> list[tuple[str, str]]:
    order = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"edge order line {lineno}: expected 'u v', got {raw.strip()!r}")
        order.append((tokens[0], tokens[1]))
    return order


def both_players_labeling(g: GameGraph, mode: SpeechMode, anchor_a: Optional[str] = None,
                          phi: Optional[EdgeBijection] = None) -> Labeling:
    """Spread the cutting-off-leaves labels so that no two edges share a time.

    Each label becomes ``|E| * label + phi(e)``; in alternating play the
    result is doubled and, for edges pointing into the starter's class,
    reduced by one to keep the speaking parity.
    """
    require_tree(g)
    phi = edge_bijection(g) if phi is None else phi
    check_bijection(g, phi)
    base = cut_leaves_labeling(g, mode, anchor_a)
    m = len(g.edges)
    side = starter_side(g, mode, anchor_a) if mode.is_alternating else frozenset()
    edges = {}
    for e, el in base.edges.items():
        label = m * el.label + phi[e]
        if mode.is_alternating:
            label = 2 * label - (1 if el.target in side else 0)
        edges[e] = EdgeLabel(el.target, label)
    return Labeling(edges)


def placements(g: GameGraph, mode: SpeechMode, anchor_a: Optional[str] = None) -> list[tuple[str, str]]:
    """Placements a labeling speaks for: all of them, or those with A in the anchor's class."""
    pairs = sorted([(u, v) for u, v in g.edges] + [(v, u) for u, v in g.edges])
    if mode.is_alternating:
        side_a = _bipartition(g, anchor_a).side_a
        pairs = [(a, b) for a, b in pairs if a in side_a]
    return pairs


def verify_both_learn(g: GameGraph, mode: SpeechMode, lab: Labeling,
                      anchor_a: Optional[str] = None) -> bool:
    """True iff under the labeling's strategy both players end up knowing, everywhere."""
    require_tree(g)
    book = playbook_from_labeling(g, mode, lab, anchor_a)
    outcomes = simulate_all(g, mode, playbook=book)
    for a, b in placements(g, mode, anchor_a):
        if outcomes[(a, b)].kind not in ("both", "second"):
            return False
    return True

