"""Cutting-off-leaves labelings, their validation, and playbooks.

A labeling decorates every tree edge with the vertex whose occupant
guesses first (``None`` when both guess at once) and the time of that
guess.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Optional

from .errors import InvalidLabelingError, ParseError, PreconditionError
from .graph import Bipartition, Edge, GameGraph, _bipartition, _edge_key, require_tree

PLAYERS = ("A", "B")


def other(player: str) -> str:
    return "B" if player == "A" else "A"


@dataclass(frozen=True)
class SpeechMode:
    kind: str = "simultaneous"
    starter: Optional[str] = None

    def __post_init__(self):
        if self.kind == "simultaneous":
            if self.starter is not None:
                raise ValueError("simultaneous mode takes no starter")
        elif self.kind == "alternating":
            if self.starter not in PLAYERS:
                raise ValueError(f"alternating mode needs starter A or B, got {self.starter!r}")
        else:
            raise ValueError(f"unknown speech mode {self.kind!r}")

    @classmethod
    def simultaneous(cls) -> "SpeechMode":
        return cls("simultaneous")

    @classmethod
    def alternating(cls, starter: str = "A") -> "SpeechMode":
        return cls("alternating", starter)

    @property
    def is_alternating(self) -> bool:
        return self.kind == "alternating"

    @property
    def period(self) -> int:
        return 2 if self.is_alternating else 1

    def speakers(self, t: int) -> tuple[str, ...]:
        if not self.is_alternating:
            return PLAYERS
        return (self.starter,) if t % 2 == 1 else (other(self.starter),)

    def may_speak(self, player: str, t: int) -> bool:
        return player in self.speakers(t)

    def first_slot(self, player: str, t: int) -> int:
        """Earliest time >= t at which ``player`` may speak."""
        return t if self.may_speak(player, t) else t + 1

    def __str__(self):
        return self.kind if not self.is_alternating else f"alternating(starter={self.starter})"


SIMULTANEOUS = SpeechMode.simultaneous()


@dataclass(frozen=True)
class EdgeLabel:
    target: Optional[str]  # None: bidirected
    label: int


@dataclass(frozen=True)
class Labeling:
    """Per-edge direction and time, keyed by sorted vertex pair."""

    edges: dict[Edge, EdgeLabel] = field(hash=False)

    def __getitem__(self, edge) -> EdgeLabel:
        return self.edges[_edge_key(*edge)]

    def label(self, u: str, v: str) -> int:
        return self[(u, v)].label

    def target(self, u: str, v: str) -> Optional[str]:
        return self[(u, v)].target

    def bidirected(self) -> list[Edge]:
        return sorted(e for e, el in self.edges.items() if el.target is None)

    def outgoing(self, w: str) -> list[tuple[str, int]]:
        """Edges leaving ``w`` as (far endpoint, label); bidirected edges count."""
        return list(self._leaving.get(w, ()))

    @cached_property
    def _leaving(self) -> dict[str, list[tuple[str, int]]]:
        out: dict[str, list[tuple[str, int]]] = {}
        for (u, v), el in self.edges.items():
            if el.target != u:
                out.setdefault(u, []).append((v, el.label))
            if el.target != v:
                out.setdefault(v, []).append((u, el.label))
        return out

    def with_label(self, edge, target, label) -> "Labeling":
        edges = dict(self.edges)
        edges[_edge_key(*edge)] = EdgeLabel(target, label)
        return Labeling(edges)

    def as_records(self) -> list[dict]:
        records = []
        for (u, v) in sorted(self.edges):
            el = self.edges[(u, v)]
            direction = "both" if el.target is None else ("u" if el.target == u else "v")
            records.append({"edge": [u, v], "direction": direction, "label": el.label})
        return records

    def to_json(self) -> str:
        return json.dumps(self.as_records(), indent=2)

    @classmethod
    def from_records(cls, records) -> "Labeling":
        edges = {}
        try:
            for rec in records:
                u, v = (str(x) for x in rec["edge"])
                direction = rec["direction"]
                label = rec["label"]
                if direction not in ("u", "v", "both"):
                    raise ParseError(f"edge ({u}, {v}): bad direction {direction!r}")
                if not isinstance(label, int) or isinstance(label, bool):
                    raise ParseError(f"edge ({u}, {v}): label must be an integer")
                target = None if direction == "both" else (u if direction == "u" else v)
                key = _edge_key(u, v)
                if key in edges:
                    raise ParseError(f"edge ({u}, {v}) labeled twice")
                edges[key] = EdgeLabel(target, label)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"malformed labeling record: {exc}") from exc
        return cls(edges)

    @classmethod
    def from_json(cls, text: str) -> "Labeling":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"labeling is not valid JSON: {exc}") from exc
        if not isinstance(data, list):
            raise ParseError("labeling JSON must be an array")
        return cls.from_records(data)

    def to_dot(self, name: str = "labeling") -> str:
        lines = [f"digraph {json.dumps(name)} {{"]
        for (u, v) in sorted(self.edges):
            el = self.edges[(u, v)]
            if el.target is None:
                attrs = "dir=both"
                tail, head = u, v
            else:
                tail, head = (v, u) if el.target == u else (u, v)
                attrs = "dir=forward"
            lines.append(f"  {json.dumps(tail)} -> {json.dumps(head)} [label={el.label}, {attrs}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def starter_side(g: GameGraph, mode: SpeechMode, anchor_a: str) -> frozenset[str]:
    """Bipartition class of the player who speaks at odd times."""
    parts = _bipartition(g, anchor_a)
    return parts.side_a if mode.starter == "A" else parts.side_b


def _check_anchor(g: GameGraph, mode: SpeechMode, anchor_a: Optional[str]) -> None:
    if mode.is_alternating:
        if anchor_a is None:
            raise PreconditionError("alternating mode needs an anchor vertex for player A's class")
        if anchor_a not in g.vertices:
            raise PreconditionError(f"anchor {anchor_a!r} is not a vertex")


def cut_leaves_labeling(g: GameGraph, mode: SpeechMode = SIMULTANEOUS,
                        anchor_a: Optional[str] = None) -> Labeling:
    """Label a tree by repeatedly cutting off its current leaves.

    Simultaneous play removes every current leaf each step.  Alternating
    play removes, at odd steps, the leaves outside the starter's class and
    at even steps the leaves inside it.
    """
    require_tree(g)
    if not g.edges:
        raise PreconditionError("cannot label an edgeless graph")
    _check_anchor(g, mode, anchor_a)
    if mode.is_alternating:
        side = starter_side(g, mode, anchor_a)
        return Labeling(dict(_alternating_cut(g, side).edges))
    return Labeling(dict(_simultaneous_cut(g).edges))


@lru_cache(maxsize=4096)
def _simultaneous_cut(g: GameGraph) -> Labeling:
    nbrs = {v: set(ns) for v, ns in g.adjacency.items()}
    labels = {}
    t = 0
    while len(labels) < len(g.edges):
        t += 1
        live = [v for v, ns in nbrs.items() if ns]
        if len(live) == 2:
            u, v = live
            labels[_edge_key(u, v)] = EdgeLabel(None, t)
            break
        leaves = [v for v in live if len(nbrs[v]) == 1]
        for leaf in leaves:
            (parent,) = nbrs[leaf]
            labels[_edge_key(leaf, parent)] = EdgeLabel(parent, t)
        for leaf in leaves:
            (parent,) = nbrs[leaf]
            nbrs[parent].discard(leaf)
            nbrs[leaf].clear()
    return Labeling(labels)


@lru_cache(maxsize=4096)
def _alternating_cut(g: GameGraph, side: frozenset) -> Labeling:
    nbrs = {v: set(ns) for v, ns in g.adjacency.items()}
    labels = {}
    t = 0
    while len(labels) < len(g.edges):
        t += 1
        # the speaker of step t guesses when the partner sits on a leaf of
        # the partner's class; those leaves then drop out
        cut_starter_side = t % 2 == 0
        leaves = [v for v, ns in nbrs.items()
                  if len(ns) == 1 and (v in side) == cut_starter_side]
        for leaf in leaves:
            (parent,) = nbrs[leaf]
            labels[_edge_key(leaf, parent)] = EdgeLabel(parent, t)
        for leaf in leaves:
            (parent,) = nbrs[leaf]
            nbrs[parent].discard(leaf)
            nbrs[leaf].clear()
    return Labeling(labels)


def validate_labeling(g: GameGraph, mode: SpeechMode, lab: Labeling,
                      anchor_a: Optional[str] = None) -> list[str]:
    """Return every violated labeling invariant; empty means valid."""
    problems: list[str] = []
    if g.directed:
        return ["labelings are defined on undirected trees"]
    expected = set(g.edges)
    given = set(lab.edges)
    for e in sorted(expected - given):
        problems.append(f"edge {e} has no label")
    for e in sorted(given - expected):
        problems.append(f"labeled pair {e} is not an edge")
    if problems:
        return problems
    for e in sorted(lab.edges):
        el = lab.edges[e]
        if not isinstance(el.label, int) or el.label < 1:
            problems.append(f"edge {e} has non-positive label {el.label!r}")
        if el.target is not None and el.target not in e:
            problems.append(f"edge {e} points at non-endpoint {el.target!r}")
    if problems:
        return problems

    incoming: dict[str, list[int]] = {v: [] for v in g.vertices}
    for (u, v), el in lab.edges.items():
        if el.target is not None:
            incoming[el.target].append(el.label)

    for w in sorted(g.vertices):
        outs = [(x, n) for x, n in lab.outgoing(w) if lab.target(w, x) is not None]
        if len(outs) > 1:
            problems.append(f"vertex {w} has {len(outs)} outgoing edges")
        leaving = lab.outgoing(w)
        if incoming[w] and leaving:
            worst_in = max(incoming[w])
            for x, n in leaving:
                if n <= worst_in:
                    problems.append(
                        f"labels not increasing through {w}: incoming {worst_in} then {n} toward {x}")

    both = lab.bidirected()
    if len(both) > 1:
        problems.append(f"{len(both)} bidirected edges {both}")
    for u, v in both:
        for end in (u, v):
            if any(lab.target(end, x) is not None for x, _ in lab.outgoing(end)):
                problems.append(f"bidirected edge ({u}, {v}) has endpoint {end} with an outgoing edge")

    if len(g.edges) > 1:
        sinks = [w for w in g.vertices if not any(lab.target(w, x) is not None for x, _ in lab.outgoing(w))]
        want = 1 + len(both)
        if len(sinks) != want:
            problems.append(f"expected {want} vertex(es) with all edges inward, found {sorted(sinks)}")

    if mode.is_alternating:
        if anchor_a is None or anchor_a not in g.vertices:
            problems.append("alternating validation needs an anchor vertex for player A's class")
            return problems
        if both:
            problems.append(f"bidirected edge {both[0]} in alternating mode")
        side = starter_side(g, mode, anchor_a)
        for e in sorted(lab.edges):
            el = lab.edges[e]
            if el.target is None:
                continue
            want_odd = el.target in side
            if (el.label % 2 == 1) != want_odd:
                parity = "odd" if want_odd else "even"
                problems.append(f"edge {e} into {el.target} needs an {parity} label, has {el.label}")
    return problems


def require_valid(g, mode, lab, anchor_a=None) -> None:
    problems = validate_labeling(g, mode, lab, anchor_a)
    if problems:
        raise InvalidLabelingError(problems)


@dataclass(frozen=True)
class Playbook:
    """What each player says, keyed by the partner vertex they observe.

    ``moves[player][w] = (time, vertex)``; a missing key means silence.
    """

    moves: dict[str, dict[str, tuple[int, str]]] = field(hash=False)

    def move(self, player: str, observed: str) -> Optional[tuple[int, str]]:
        return self.moves[player].get(observed)

    def horizon(self) -> int:
        return max((t for book in self.moves.values() for t, _ in book.values()), default=0)

    def as_dict(self) -> dict:
        return {p: {w: {"time": t, "announce": x} for w, (t, x) in sorted(book.items())}
                for p, book in sorted(self.moves.items())}


def playbook_from_labeling(g: GameGraph, mode: SpeechMode, lab: Labeling,
                           anchor_a: Optional[str] = None) -> Playbook:
    """Turn a valid labeling into each player's announcement schedule.

    A player watching ``w`` announces ``x`` at time ``n`` when the edge
    from ``w`` to ``x`` points away from ``w`` with label ``n``.  In
    alternating mode each player only ever observes the opposite class,
    so the schedule is restricted to it.
    """
    require_tree(g)
    require_valid(g, mode, lab, anchor_a)
    observable = {p: g.vertices for p in PLAYERS}
    if mode.is_alternating:
        parts = _bipartition(g, anchor_a)
        observable = {"A": parts.side_b, "B": parts.side_a}
    moves: dict[str, dict[str, tuple[int, str]]] = {}
    for player in PLAYERS:
        book = {}
        for w in observable[player]:
            for x, n in lab.outgoing(w):
                book[w] = (n, x)
        moves[player] = book
    return Playbook(moves)


def adapt_mode(g: GameGraph, lab: Labeling, source: SpeechMode, target: SpeechMode,
               anchor_a: Optional[str] = None) -> Labeling:
    """Carry a pre-agreed labeling from one speech mode to another.

    Into alternating play, time ``t`` becomes ``2t - 1`` for the starter
    and ``2t`` for the other player; a simultaneous double guess goes to
    the starter.  Into simultaneous play the labels are kept.
    """
    require_tree(g)
    require_valid(g, source, lab, anchor_a)
    if source == target:
        return Labeling(dict(lab.edges))
    if not target.is_alternating:
        return Labeling(dict(lab.edges))
    if source.is_alternating:
        lab = adapt_mode(g, lab, source, SIMULTANEOUS, anchor_a)
    _check_anchor(g, target, anchor_a)
    side = starter_side(g, target, anchor_a)
    edges = {}
    for (u, v), el in lab.edges.items():
        dest = el.target
        if dest is None:
            dest = u if u in side else v
        slot = 2 * el.label - 1 if dest in side else 2 * el.label
        edges[(u, v)] = EdgeLabel(dest, slot)
    return Labeling(edges)


def guessing_player(lab: Labeling, placement: tuple[str, str]) -> str:
    """'A', 'B' or 'both' for the edge the players sit on."""
    a, b = placement
    target = lab.target(a, b)
    if target is None:
        return "both"
    return "A" if target == a else "B"
