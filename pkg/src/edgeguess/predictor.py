"""Closed-form answers to who guesses first, when, and whether the partner follows."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .errors import PlacementError, PreconditionError
from .graph import GameGraph, _bipartition, _heights, require_tree
from .labeling import (SIMULTANEOUS, Labeling, SpeechMode, _alternating_cut, _simultaneous_cut,
                       cut_leaves_labeling, starter_side)


@dataclass(frozen=True)
class Prediction:
    """``first`` is 'A', 'B', 'both' or 'never'.

    ``second`` is the time the other player learns, or None when they never
    do (or when the question does not arise).
    """

    first: str
    time: Optional[int]
    second: Optional[int] = None

    @classmethod
    def never(cls) -> "Prediction":
        return cls("never", None, None)

    def as_dict(self) -> dict:
        if self.first in ("both", "never"):
            second = None
        elif self.second is None:
            second = "never"
        else:
            second = {"learns_at": self.second}
        return {"first": self.first, "time": self.time, "second": second}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)

    def __str__(self):
        if self.first == "never":
            return "nobody ever learns their position"
        if self.first == "both":
            return f"both players announce at time {self.time}"
        tail = (f"the other player follows at time {self.second}" if self.second is not None
                else "the other player never learns")
        return f"player {self.first} announces first at time {self.time}; {tail}"


@dataclass(frozen=True)
class ParityHeights:
    """Heights rounded up to the times each player may speak."""

    a_time: int  # when A could first know: h(a, b) rounded to A's parity
    b_time: int


def _round_to_slot(mode: SpeechMode, player: str, h: int) -> int:
    return mode.first_slot(player, h)


def parity_heights(g: GameGraph, placement: tuple[str, str], mode: SpeechMode) -> ParityHeights:
    a, b = _check_placement(g, placement)
    h = (_heights(g.restrict_to_component(a)))
    return ParityHeights(_round_to_slot(mode, "A", h[(a, b)]), _round_to_slot(mode, "B", h[(b, a)]))


def _check_placement(g: GameGraph, placement) -> tuple[str, str]:
    a, b = placement
    for v in (a, b):
        if v not in g.vertices:
            raise PlacementError(f"unknown vertex {v!r}")
    if g.directed:
        raise PreconditionError("use analyze_directed for directed graphs")
    if not g.has_edge(a, b):
        raise PlacementError(f"players at {a!r} and {b!r} are not adjacent")
    return a, b


def _component_labeling(g: GameGraph, mode: SpeechMode, anchor_a: str) -> Labeling:
    if mode.is_alternating:
        return _alternating_cut(g, starter_side(g, mode, anchor_a))
    return _simultaneous_cut(g)


def predict(g: GameGraph, placement: tuple[str, str], mode: SpeechMode = SIMULTANEOUS) -> Prediction:
    """Predict the game on a tree from rooted heights alone."""
    a, b = _check_placement(g, placement)
    g = g.restrict_to_component(a)
    require_tree(g)
    h = (_heights(g))
    a_time = _round_to_slot(mode, "A", h[(a, b)])
    b_time = _round_to_slot(mode, "B", h[(b, a)])
    if a_time == b_time:
        return Prediction("both", a_time, None)
    first, time = ("A", a_time) if a_time < b_time else ("B", b_time)
    lab = _component_labeling(g, mode, a)
    return Prediction(first, time, second_guesser(g, (a, b), mode, lab))


def predict_all(g: GameGraph, mode: SpeechMode = SIMULTANEOUS,
                placements: Optional[list[tuple[str, str]]] = None) -> dict[tuple[str, str], Prediction]:
    """``predict`` for many placements on one tree, sharing heights and labelings."""
    if g.directed:
        raise PreconditionError("use analyze_directed for directed graphs")
    require_tree(g)
    if placements is None:
        placements = [(u, v) for u, v in g.edges] + [(v, u) for u, v in g.edges]
    h = _heights(g)
    labs: dict[str, Labeling] = {}
    counts: dict[str, dict] = {}
    side_a = None
    out = {}
    for a, b in placements:
        if not g.has_edge(a, b):
            raise PlacementError(f"players at {a!r} and {b!r} are not adjacent")
        a_time = mode.first_slot("A", h[(a, b)])
        b_time = mode.first_slot("B", h[(b, a)])
        if a_time == b_time:
            out[(a, b)] = Prediction("both", a_time, None)
            continue
        first, time = ("A", a_time) if a_time < b_time else ("B", b_time)
        # alternating play has one labeling per class of A's vertex
        key = ""
        if mode.is_alternating:
            if side_a is None:
                side_a = _bipartition(g, a).side_a
            key = "same" if a in side_a else "other"
        if key not in labs:
            labs[key] = lab = _component_labeling(g, mode, a)
            tally: dict = {}
            for (u, v), el in lab.edges.items():
                for x in (u, v):
                    tally[(x, el.label)] = tally.get((x, el.label), 0) + 1
            counts[key] = tally
        el = labs[key][(a, b)]
        n = el.label
        second = n + 1 if counts[key][(el.target, n)] == 1 else None
        out[(a, b)] = Prediction(first, time, second)
    return out


def second_guesser(g: GameGraph, placement: tuple[str, str], mode: SpeechMode,
                   lab: Optional[Labeling] = None) -> Optional[int]:
    """Time at which the slower player learns, or None for never.

    The slower player learns exactly when the placement edge is the only
    edge at the first guesser's vertex carrying its label.
    """
    a, b = _check_placement(g, placement)
    g = g.restrict_to_component(a)
    if lab is None:
        lab = cut_leaves_labeling(g, mode, a)
    el = lab[(a, b)]
    if el.target is None:
        raise PreconditionError(f"edge ({a}, {b}) is bidirected: both players already know")
    u, n = el.target, el.label
    same = sum(1 for w in g.adjacency[u] if lab.label(u, w) == n)
    return n + 1 if same == 1 else None
