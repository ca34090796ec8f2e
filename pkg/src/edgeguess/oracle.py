"""Possible-worlds simulation of the game.

Every joint placement is a world.  What a player can tell apart depends only
on the partner's vertex, and everything said (or not said) is public, so the
commonly known world set shrinks by public announcement: after a silent step
every world in which some permitted speaker would have known their vertex is
discarded.  The simulation needs no tree structure and is the reference for
every analytic shortcut in this package.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, NamedTuple, Optional

from .errors import PlacementError, PreconditionError
from .graph import GameGraph
from .labeling import PLAYERS, SIMULTANEOUS, Playbook, SpeechMode, other
from .predictor import Prediction


class World(NamedTuple):
    a: str
    b: str

    def position(self, player: str) -> str:
        return self.a if player == "A" else self.b


@dataclass(frozen=True)
class Outcome:
    """``kind`` is 'first', 'both', 'second' or 'never'.

    'first' and 'second' name the player the outcome is about: for 'second'
    that is the partner, who learns at ``time`` one step after the first
    announcement.
    """

    kind: str
    player: Optional[str] = None
    time: Optional[int] = None

    @property
    def first_player(self) -> Optional[str]:
        if self.kind == "first":
            return self.player
        if self.kind == "second":
            return other(self.player)
        return "both" if self.kind == "both" else None

    @property
    def first_time(self) -> Optional[int]:
        return self.time - 1 if self.kind == "second" else self.time

    def as_prediction(self) -> Prediction:
        if self.kind == "never":
            return _NEVER
        if self.kind == "both":
            return Prediction("both", self.time)
        if self.kind == "first":
            return Prediction(self.player, self.time, None)
        return Prediction(other(self.player), self.time - 1, self.time)

    def as_dict(self) -> dict:
        return {"outcome": self.kind, "player": self.player, "time": self.time}

    def __str__(self):
        if self.kind == "never":
            return "never"
        if self.kind == "both":
            return f"both at {self.time}"
        return f"{self.kind} {self.player} at {self.time}"


_NEVER = Prediction.never()


@dataclass(frozen=True)
class Step:
    time: int
    speakers: tuple[str, ...]
    announcements: tuple[tuple[str, str], ...]
    eliminated: frozenset
    surviving: frozenset

    def as_dict(self) -> dict:
        return {
            "time": self.time,
            "speakers": list(self.speakers),
            "announcements": [list(x) for x in self.announcements],
            "eliminated": sorted([list(w) for w in self.eliminated]),
            "surviving": sorted([list(w) for w in self.surviving]),
        }


@dataclass(frozen=True)
class OracleTrace:
    placement: World
    mode: SpeechMode
    steps: tuple[Step, ...]
    outcome: Outcome
    # the partner's candidate positions after the first announcement
    inference: frozenset = field(default_factory=frozenset)

    def to_jsonl(self) -> str:
        lines = [json.dumps(s.as_dict(), sort_keys=True) for s in self.steps]
        final = self.outcome.as_dict()
        final["partner_candidates"] = sorted(self.inference)
        lines.append(json.dumps(final, sort_keys=True))
        return "\n".join(lines) + "\n"


# world sets


def initial_worlds(g: GameGraph, convention: str = "tail") -> set[World]:
    """All joint placements; for directed graphs A sits at the tail or head."""
    if convention not in ("tail", "head"):
        raise PreconditionError(f"unknown orientation convention {convention!r}")
    if not g.directed:
        worlds = set()
        for u, v in g.edges:
            worlds.add(World(u, v))
            worlds.add(World(v, u))
        return worlds
    if convention == "tail":
        return {World(u, v) for u, v in g.edges}
    return {World(v, u) for u, v in g.edges}


class _Index:
    """The world set with lookups by either player's position."""

    def __init__(self, worlds):
        self.worlds = set(worlds)
        self.by_a: dict[str, set[str]] = defaultdict(set)
        self.by_b: dict[str, set[str]] = defaultdict(set)
        for w in self.worlds:
            self.by_a[w.a].add(w.b)
            self.by_b[w.b].add(w.a)

    def candidates(self, player: str, w: World) -> set[str]:
        """Own positions ``player`` still considers possible in world ``w``."""
        return self.by_b[w.b] if player == "A" else self.by_a[w.a]

    def discard(self, dead):
        for w in dead:
            self.worlds.discard(w)
            self.by_a[w.a].discard(w.b)
            self.by_b[w.b].discard(w.a)


Announcer = Callable[[str, World, int, _Index], Optional[str]]


def _rational(player: str, w: World, t: int, index: _Index) -> Optional[str]:
    cands = index.candidates(player, w)
    if len(cands) == 1:
        return next(iter(cands))
    return None


def _scripted(playbook: Playbook) -> Announcer:
    def announce(player, w, t, index):
        move = playbook.move(player, w.position(other(player)))
        if move is not None and move[0] == t:
            return move[1]
        return None
    return announce


def _pattern(announcer, speakers, w, t, index) -> tuple:
    said = []
    for p in speakers:
        x = announcer(p, w, t, index)
        if x is not None:
            said.append((p, x))
    return tuple(said)


def _partner_view(index: _Index, announcer, speakers, actual: World, t: int, pattern) -> frozenset:
    """Positions the silent partner still deems possible after the announcement."""
    (speaker, _), = pattern
    partner = other(speaker)
    seen = actual.position(speaker)
    keep = set()
    for q in index.candidates(partner, actual):
        w = World(seen, q) if speaker == "A" else World(q, seen)
        if _pattern(announcer, speakers, w, t, index) == pattern:
            keep.add(q)
    return frozenset(keep)


def _settle(index, announcer, speakers, actual, t, pattern) -> tuple[Outcome, frozenset]:
    for p, x in pattern:
        if x != actual.position(p):
            raise PreconditionError(f"player {p} announces {x} at time {t} but sits on "
                                    f"{actual.position(p)}")
    if len(pattern) == 2:
        return Outcome("both", None, t), frozenset()
    view = _partner_view(index, announcer, speakers, actual, t, pattern)
    speaker = pattern[0][0]
    if len(view) == 1:
        return Outcome("second", other(speaker), t + 1), view
    return Outcome("first", speaker, t), view


def _run(worlds: set[World], actual: World, mode: SpeechMode, announcer: Announcer,
         horizon: Optional[int]) -> OracleTrace:
    index = _Index(worlds)
    steps = []
    quiet = 0
    t = 0
    while True:
        t += 1
        if horizon is not None and t > horizon:
            return OracleTrace(actual, mode, tuple(steps), Outcome("never"))
        speakers = mode.speakers(t)
        pattern = _pattern(announcer, speakers, actual, t, index)
        if pattern:
            dead = {w for w in index.worlds
                    if _pattern(announcer, speakers, w, t, index) != pattern}
            outcome, view = _settle(index, announcer, speakers, actual, t, pattern)
            index.discard(dead)
            steps.append(Step(t, speakers, pattern, frozenset(dead), frozenset(index.worlds)))
            return OracleTrace(actual, mode, tuple(steps), outcome, view)
        dead = {w for w in index.worlds if _pattern(announcer, speakers, w, t, index)}
        index.discard(dead)
        steps.append(Step(t, speakers, (), frozenset(dead), frozenset(index.worlds)))
        if dead:
            quiet = 0
        else:
            quiet += 1
            if horizon is None and quiet >= mode.period:
                return OracleTrace(actual, mode, tuple(steps), Outcome("never"))


def _placement_world(g: GameGraph, placement, convention: str) -> tuple[World, GameGraph]:
    a, b = placement
    for v in (a, b):
        if v not in g.vertices:
            raise PlacementError(f"unknown vertex {v!r}")
    if g.directed:
        arc = (a, b) if convention == "tail" else (b, a)
        if arc not in g.edges:
            if (arc[1], arc[0]) in g.edges:
                raise PlacementError(f"edge between {a!r} and {b!r} is not admissible: "
                                     f"A must sit at the {convention}")
            raise PlacementError(f"players at {a!r} and {b!r} are not adjacent")
    elif not g.has_edge(a, b):
        raise PlacementError(f"players at {a!r} and {b!r} are not adjacent")
    return World(a, b), g.restrict_to_component(a)


def simulate(g: GameGraph, placement: tuple[str, str], mode: SpeechMode = SIMULTANEOUS,
             convention: str = "tail") -> OracleTrace:
    """Play the game between perfect reasoners with no agreed strategy."""
    actual, g = _placement_world(g, placement, convention)
    return _run(initial_worlds(g, convention), actual, mode, _rational, None)


def _check_playbook(g: GameGraph, mode: SpeechMode, playbook: Playbook, convention: str):
    worlds = initial_worlds(g, convention)
    for player in PLAYERS:
        for w, (t, x) in playbook.moves.get(player, {}).items():
            if w not in g.vertices or x not in g.vertices:
                raise PreconditionError(f"playbook for {player} mentions unknown vertex")
            own, seen = (x, w)
            world = World(own, seen) if player == "A" else World(seen, own)
            if world not in worlds:
                raise PreconditionError(
                    f"playbook for {player} announces {x} on seeing {w}, which is not adjacent")
            if t < 1 or not mode.may_speak(player, t):
                raise PreconditionError(
                    f"playbook for {player} announces at time {t}, when {player} may not speak")


def simulate_with_playbook(g: GameGraph, placement: tuple[str, str], mode: SpeechMode,
                           playbook: Playbook, convention: str = "tail") -> OracleTrace:
    """Play a pre-agreed schedule; the partner inverts it after the first announcement."""
    actual, g = _placement_world(g, placement, convention)
    _check_playbook(g, mode, playbook, convention)
    return _run(initial_worlds(g, convention), actual, mode, _scripted(playbook), playbook.horizon())


def simulate_all(g: GameGraph, mode: SpeechMode = SIMULTANEOUS, convention: str = "tail",
                 playbook: Optional[Playbook] = None) -> dict[World, Outcome]:
    """Outcome for every placement at once.

    Until someone speaks, the public history is the same whatever the true
    placement, so one pass over the shrinking world set settles each world
    at the first step where its own announcement pattern is non-empty.
    """
    if playbook is not None:
        _check_playbook(g, mode, playbook, convention)
        return _sweep_scripted(initial_worlds(g, convention), playbook)
    return dict(_rational_outcomes(g, mode, convention))


@lru_cache(maxsize=256)
def _rational_outcomes(g: GameGraph, mode: SpeechMode, convention: str) -> dict[World, Outcome]:
    return _sweep_rational(initial_worlds(g, convention), mode)


def _sweep(worlds, mode: SpeechMode, announcer: Announcer, horizon: Optional[int]) -> dict[World, Outcome]:
    index = _Index(worlds)
    results: dict[World, Outcome] = {}
    quiet = 0
    t = 0
    while index.worlds:
        t += 1
        if horizon is not None and t > horizon:
            break
        speakers = mode.speakers(t)
        loud = {}
        for w in index.worlds:
            pattern = _pattern(announcer, speakers, w, t, index)
            if pattern:
                loud[w] = pattern
        for w, pattern in loud.items():
            results[w] = _settle(index, announcer, speakers, w, t, pattern)[0]
        index.discard(loud)
        if loud:
            quiet = 0
        else:
            quiet += 1
            if horizon is None and quiet >= mode.period:
                break
    for w in index.worlds:
        results[w] = Outcome("never")
    return results


def _sweep_rational(worlds, mode: SpeechMode) -> dict[World, Outcome]:
    """``_sweep`` for rational players, visiting only worlds where someone knows.

    A knows in (x, y) iff y has a single A-candidate left; B knows iff x has
    a single B-candidate.  After a lone announcement by A at x the partner
    keeps exactly the y' next to x where A would also have known.
    """
    index = _Index(worlds)
    by_a, by_b = index.by_a, index.by_b
    results: dict[World, Outcome] = {}
    quiet = 0
    t = 0
    while index.worlds:
        t += 1
        speakers = mode.speakers(t)
        a_knows = {y for y, xs in by_b.items() if len(xs) == 1} if "A" in speakers else set()
        b_knows = {x for x, ys in by_a.items() if len(ys) == 1} if "B" in speakers else set()
        loud = set()
        for y in a_knows:
            loud.add(World(next(iter(by_b[y])), y))
        for x in b_knows:
            loud.add(World(x, next(iter(by_a[x]))))
        for w in loud:
            a_says, b_says = w.b in a_knows, w.a in b_knows
            if a_says and b_says:
                results[w] = Outcome("both", None, t)
            elif a_says:
                view = sum(1 for q in by_a[w.a] if q in a_knows)
                results[w] = Outcome("second", "B", t + 1) if view == 1 else Outcome("first", "A", t)
            else:
                view = sum(1 for q in by_b[w.b] if q in b_knows)
                results[w] = Outcome("second", "A", t + 1) if view == 1 else Outcome("first", "B", t)
        index.discard(loud)
        if loud:
            quiet = 0
        else:
            quiet += 1
            if quiet >= mode.period:
                break
    for w in index.worlds:
        results[w] = Outcome("never")
    return results


def _sweep_scripted(worlds, playbook: Playbook) -> dict[World, Outcome]:
    """``_sweep`` for a fixed playbook.

    Scripted announcements ignore the world set, so each world's first
    announcement is known up front and a world is still alive at time t
    exactly when nothing was said in it earlier.
    """
    first: dict[World, tuple[int, tuple]] = {}
    for w in worlds:
        said = []
        for p in PLAYERS:
            move = playbook.move(p, w.position(other(p)))
            if move is not None:
                said.append((move[0], p, move[1]))
        if said:
            t = min(s[0] for s in said)
            first[w] = (t, tuple((p, x) for tt, p, x in sorted(said) if tt == t))
    by_a: dict[str, list[str]] = defaultdict(list)
    by_b: dict[str, list[str]] = defaultdict(list)
    for w in worlds:
        by_a[w.a].append(w.b)
        by_b[w.b].append(w.a)
    results: dict[World, Outcome] = {}
    for w in worlds:
        if w not in first:
            results[w] = Outcome("never")
            continue
        t, pattern = first[w]
        for p, x in pattern:
            if x != w.position(p):
                raise PreconditionError(f"player {p} announces {x} at time {t} but sits on "
                                        f"{w.position(p)}")
        if len(pattern) == 2:
            results[w] = Outcome("both", None, t)
            continue
        speaker = pattern[0][0]
        if speaker == "A":
            view = sum(1 for q in by_a[w.a] if first.get(World(w.a, q)) == first[w])
        else:
            view = sum(1 for q in by_b[w.b] if first.get(World(q, w.b)) == first[w])
        results[w] = (Outcome("second", other(speaker), t + 1) if view == 1
                      else Outcome("first", speaker, t))
    return results
