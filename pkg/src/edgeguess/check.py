"""Cross-validation of the analytic shortcuts against the possible-worlds simulation."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Iterable

from .directed import analyze_directed_all, is_zigzag_forest
from .graph import GameGraph, is_tree
from .labeling import SIMULTANEOUS, Labeling, SpeechMode, cut_leaves_labeling
from .enumerate import trees_up_to
from .oracle import simulate_all
from .predictor import Prediction, predict

DEFAULT_MODES = (SIMULTANEOUS, SpeechMode.alternating("A"), SpeechMode.alternating("B"))


def mode_name(mode: SpeechMode) -> str:
    return f"alternating-{mode.starter}" if mode.is_alternating else "simultaneous"


def graph_name(g: GameGraph) -> str:
    sep = ">" if g.directed else "-"
    return " ".join(f"{u}{sep}{v}" for u, v in g.sorted_edges())


@dataclass(frozen=True)
class Mismatch:
    graph: str
    mode: str
    placement: tuple[str, str]
    expected: str  # what the simulation says
    got: str
    source: str  # which shortcut disagreed

    def as_dict(self) -> dict:
        return {"graph": self.graph, "mode": self.mode, "placement": list(self.placement),
                "oracle": self.expected, "got": self.got, "source": self.source}


@dataclass
class CheckReport:
    graphs: int = 0
    placements: int = 0
    never: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def absorb(self, other: "CheckReport") -> None:
        self.graphs += other.graphs
        self.placements += other.placements
        self.never += other.never
        self.mismatches.extend(other.mismatches)

    def summary(self) -> str:
        return (f"{self.graphs} graphs, {self.placements} placement checks, "
                f"{self.never} never, {len(self.mismatches)} mismatches")

    def as_dict(self, limit: int = 20) -> dict:
        shown = sorted(self.mismatches, key=lambda m: (m.graph, m.mode, m.placement, m.source))
        return {"graphs": self.graphs, "placements": self.placements, "never": self.never,
                "mismatch_count": len(self.mismatches),
                "mismatches": [m.as_dict() for m in shown[:limit]]}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)


def labeling_prediction(g: GameGraph, lab: Labeling, placement: tuple[str, str]) -> Prediction:
    """What the labeling alone says about a placement on a tree."""
    a, b = placement
    el = lab[(a, b)]
    if el.target is None:
        return Prediction("both", el.label)
    first = "A" if el.target == a else "B"
    same = sum(1 for w in g.adjacency[el.target] if lab.label(el.target, w) == el.label)
    return Prediction(first, el.label, el.label + 1 if same == 1 else None)


def check_tree(g: GameGraph, modes: Iterable[SpeechMode] = DEFAULT_MODES) -> CheckReport:
    """Simulation vs. height predictor vs. labeling on every placement of a tree."""
    report = CheckReport(graphs=1)
    name = None
    for mode in modes:
        outcomes = simulate_all(g, mode)
        for (a, b), outcome in outcomes.items():
            report.placements += 1
            expected = outcome.as_prediction()
            if expected.first == "never":
                report.never += 1
            predicted = predict(g, (a, b), mode)
            labeled = labeling_prediction(g, cut_leaves_labeling(g, mode, a), (a, b))
            for source, got in (("predict", predicted), ("labeling", labeled)):
                if got != expected:
                    name = name or graph_name(g)
                    report.mismatches.append(
                        Mismatch(name, mode_name(mode), (a, b), str(expected), str(got), source))
    return report


def check_trees(max_n: int, modes: Iterable[SpeechMode] = DEFAULT_MODES, min_n: int = 2) -> CheckReport:
    """``check_tree`` over every labeled tree with min_n..max_n vertices."""
    modes = tuple(modes)
    start = time.perf_counter()
    report = CheckReport()
    for g in trees_up_to(max_n, min_n):
        report.absorb(check_tree(g, modes))
    report.seconds = time.perf_counter() - start
    return report


def check_directed(g: GameGraph, modes: Iterable[SpeechMode] = DEFAULT_MODES,
                   conventions: Iterable[str] = ("tail", "head")) -> CheckReport:
    """Reduction vs. simulation on every admissible placement, plus the zig-zag verdict."""
    report = CheckReport(graphs=1)
    forest = is_zigzag_forest(g)
    name = None
    for convention in conventions:
        for mode in modes:
            outcomes = simulate_all(g, mode, convention)
            reduced = analyze_directed_all(g, convention, mode)
            never = 0
            for w, outcome in outcomes.items():
                report.placements += 1
                expected = outcome.as_prediction()
                never += expected.first == "never"
                if reduced[w] != expected:
                    name = name or graph_name(g)
                    report.mismatches.append(Mismatch(name, f"{mode_name(mode)}/{convention}", tuple(w),
                                                      str(expected), str(reduced[w]), "analyze_directed"))
            report.never += never
            if forest != (never == 0):
                name = name or graph_name(g)
                report.mismatches.append(Mismatch(
                    name, f"{mode_name(mode)}/{convention}", ("*", "*"),
                    f"{never} never placements", f"zig-zag forest = {forest}", "is_zigzag_forest"))
    return report


def check_graph(g: GameGraph, modes: Iterable[SpeechMode] = DEFAULT_MODES,
                conventions: Iterable[str] = ("tail", "head")) -> CheckReport:
    """Check whichever shortcuts apply to a single supplied graph.

    Trees get the full three-way comparison.  Other undirected graphs are
    compared with their bidirected form, which must play identically.
    """
    modes = tuple(modes)
    start = time.perf_counter()
    if g.directed:
        report = check_directed(g, modes, conventions)
    elif is_tree(g):
        report = check_tree(g, modes)
        report.absorb(check_directed(g.bidirected(), modes, ("tail",)))
        report.graphs = 1
    else:
        report = CheckReport(graphs=1)
        for mode in modes:
            plain = simulate_all(g, mode)
            embedded = simulate_all(g.bidirected(), mode, "tail")
            for w, outcome in plain.items():
                report.placements += 1
                report.never += outcome.kind == "never"
                if embedded[w] != outcome:
                    report.mismatches.append(Mismatch(graph_name(g), mode_name(mode), tuple(w),
                                                      str(outcome), str(embedded[w]), "bidirected"))
        report.absorb(check_directed(g.bidirected(), modes, ("tail",)))
        report.graphs = 1
    report.seconds = time.perf_counter() - start
    return report


def never_placements(g: GameGraph, mode: SpeechMode = SIMULTANEOUS,
                     convention: str = "tail") -> list[tuple[str, str]]:
    return sorted(tuple(w) for w, o in simulate_all(g, mode, convention).items() if o.kind == "never")

