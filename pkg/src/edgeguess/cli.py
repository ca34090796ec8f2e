"""Command-line entry point.

    edgeguess analyze tree.edges --mode alternating --starter A --a w1
    edgeguess predict tree.edges --a x --b y
    edgeguess simulate graph.edges --a x --b y --trace
    edgeguess reduce digraph.edges --a x
    edgeguess strategy tree.edges --phi order.txt
    edgeguess validate tree.edges labels.json
    edgeguess check --max-n 5

Exit status: 0 fine, 1 check or validation found problems, 2 parse error,
3 invalid placement, 4 precondition violated (non-tree input, missing
anchor, ...).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .check import check_graph, check_trees
from .directed import analyze_directed, candidate_sets, is_zigzag_forest, split
from .errors import ParseError, PlacementError, PreconditionError
from .graph import GameGraph, format_edge_list, read_edge_list, require_tree
from .labeling import (Labeling, Playbook, SpeechMode, cut_leaves_labeling,
                       playbook_from_labeling, validate_labeling)
from .oracle import simulate
from .preagreed import both_players_labeling, edge_bijection, parse_edge_order
from .predictor import predict

EXIT_OK, EXIT_PROBLEMS, EXIT_PARSE, EXIT_PLACEMENT, EXIT_PRECONDITION = 0, 1, 2, 3, 4


def _dump(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _mode(args) -> SpeechMode:
    if args.mode == "alternating":
        return SpeechMode.alternating(args.starter or "A")
    if args.starter is not None:
        raise PreconditionError("--starter only applies to --mode alternating")
    return SpeechMode.simultaneous()


def _placement(args) -> tuple[str, str]:
    if args.a is None or args.b is None:
        raise PlacementError("this command needs a placement: give both --a and --b")
    return args.a, args.b


def _anchor(args, mode: SpeechMode, g: GameGraph) -> Optional[str]:
    if mode.is_alternating and args.a is None:
        raise PreconditionError("alternating mode needs --a naming a vertex in player A's class")
    if args.a is not None and args.a not in g.vertices:
        raise PreconditionError(f"anchor vertex {args.a!r} is not in the graph")
    return args.a


def _require_undirected_tree(g: GameGraph, command: str) -> None:
    if g.directed:
        raise PreconditionError(f"{command} works on undirected trees; use reduce or predict for digraphs")
    require_tree(g)


def _labeling_text(lab: Labeling) -> str:
    lines = []
    for (u, v) in sorted(lab.edges):
        el = lab.edges[(u, v)]
        if el.target is None:
            arrow = f"{u} <-> {v}"
        else:
            src = v if el.target == u else u
            arrow = f"{src} -> {el.target}"
        lines.append(f"{arrow}  {el.label}")
    return "\n".join(lines) + "\n"


def _playbook_text(book: Playbook) -> str:
    lines = []
    for player, moves in sorted(book.moves.items()):
        for seen, (t, x) in sorted(moves.items()):
            lines.append(f"{player} seeing {seen}: say {x} at time {t}")
    return "\n".join(lines) + "\n"


# subcommands


def cmd_analyze(args, g: GameGraph) -> tuple[int, str]:
    _require_undirected_tree(g, "analyze")
    mode = _mode(args)
    lab = cut_leaves_labeling(g, mode, _anchor(args, mode, g))
    if args.format == "dot":
        return EXIT_OK, lab.to_dot()
    if args.format == "text":
        return EXIT_OK, _labeling_text(lab)
    return EXIT_OK, lab.to_json() + "\n"


def cmd_predict(args, g: GameGraph) -> tuple[int, str]:
    mode = _mode(args)
    placement = _placement(args)
    if g.directed:
        pred = analyze_directed(g, placement, args.convention, mode)
    else:
        pred = predict(g, placement, mode)
    if args.format == "text":
        return EXIT_OK, str(pred) + "\n"
    return EXIT_OK, _dump(pred.as_dict())


def cmd_simulate(args, g: GameGraph) -> tuple[int, str]:
    mode = _mode(args)
    trace = simulate(g, _placement(args), mode, args.convention)
    if args.trace:
        return EXIT_OK, trace.to_jsonl()
    if args.format == "text":
        return EXIT_OK, f"{trace.outcome}\n"
    return EXIT_OK, _dump(trace.outcome.as_dict())


def cmd_reduce(args, g: GameGraph) -> tuple[int, str]:
    directed = g if g.directed else g.bidirected()
    dropped: list[str] = []
    target = directed
    if args.a is not None:
        cands = candidate_sets(directed, args.a, args.convention)
        target = cands.restricted
        dropped = sorted(cands.dropped)
    sg = split(target)
    verdict = is_zigzag_forest(target)
    if args.format == "text":
        out = format_edge_list(sg.graph)
        out += f"# zig-zag forest: {'yes' if verdict else 'no'}\n"
        if dropped:
            out += f"# dropped: {' '.join(dropped)}\n"
        return EXIT_OK, out
    if args.format == "dot":
        lines = ["digraph split {"]
        for u, v in sg.graph.sorted_edges():
            lines.append(f"  {json.dumps(u)} -> {json.dumps(v)};")
        lines.append("}")
        return EXIT_OK, "\n".join(lines) + "\n"
    data = {
        "edges": [list(e) for e in sg.graph.sorted_edges()],
        "origin": sg.origin_map(),
        "zigzag_forest": verdict,
        "dropped": dropped,
    }
    return EXIT_OK, _dump(data)


def cmd_strategy(args, g: GameGraph) -> tuple[int, str]:
    _require_undirected_tree(g, "strategy")
    mode = _mode(args)
    anchor = _anchor(args, mode, g)
    phi = None
    if args.phi is not None:
        try:
            text = Path(args.phi).read_text()
        except OSError as exc:
            raise ParseError(f"{args.phi}: {exc.strerror}") from exc
        phi = edge_bijection(g, parse_edge_order(text))
    lab = both_players_labeling(g, mode, anchor, phi)
    book = playbook_from_labeling(g, mode, lab, anchor)
    if args.format == "dot":
        return EXIT_OK, lab.to_dot("strategy")
    if args.format == "text":
        return EXIT_OK, _labeling_text(lab) + "\n" + _playbook_text(book)
    return EXIT_OK, _dump({"labeling": lab.as_records(), "playbook": book.as_dict()})


def cmd_validate(args, g: GameGraph) -> tuple[int, str]:
    _require_undirected_tree(g, "validate")
    mode = _mode(args)
    try:
        text = Path(args.labels).read_text()
    except OSError as exc:
        raise ParseError(f"{args.labels}: {exc.strerror}") from exc
    lab = Labeling.from_json(text)
    anchor = _anchor(args, mode, g)
    problems = validate_labeling(g, mode, lab, anchor)
    status = EXIT_PROBLEMS if problems else EXIT_OK
    if args.format == "text":
        body = "".join(f"{p}\n" for p in problems) or "0 violations\n"
        return status, body
    return status, _dump({"violations": problems})


def cmd_check(args, g: Optional[GameGraph]) -> tuple[int, str]:
    if g is None:
        report = check_trees(args.max_n)
        scope = f"all trees with <= {args.max_n} vertices"
    else:
        report = check_graph(g)
        scope = args.graph
    status = EXIT_OK if report.ok else EXIT_PROBLEMS
    if args.format == "json":
        data = report.as_dict()
        data["scope"] = scope
        return status, _dump(data)
    lines = [f"{scope}: {report.summary()}"]
    for m in report.mismatches[:20]:
        lines.append(f"  {m.source} {m.mode} {m.placement} on [{m.graph}]: "
                     f"oracle {m.expected}, got {m.got}")
    return status, "\n".join(lines) + "\n"


COMMANDS = {
    "analyze": cmd_analyze,
    "predict": cmd_predict,
    "simulate": cmd_simulate,
    "reduce": cmd_reduce,
    "strategy": cmd_strategy,
    "validate": cmd_validate,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="edgeguess",
                                     description="Analyse the edge-guessing game on a graph.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("json", "text"), default="json"):
        p.add_argument("--mode", choices=("simultaneous", "alternating"), default="simultaneous")
        p.add_argument("--starter", choices=("A", "B"), default=None,
                       help="who speaks at odd times in alternating mode (default A)")
        p.add_argument("--a", default=None, help="player A's vertex, or the anchor of A's class")
        p.add_argument("--b", default=None, help="player B's vertex")
        p.add_argument("--convention", choices=("tail", "head"), default="tail",
                       help="for digraphs: whether A sits at the tail or the head")
        p.add_argument("--format", choices=formats, default=default)

    for name, helptext, formats in (
            ("analyze", "cutting-off-leaves labeling of a tree", ("json", "dot", "text")),
            ("predict", "who guesses first, when, and whether the partner follows", ("json", "text")),
            ("simulate", "possible-worlds simulation of one placement", ("json", "text")),
            ("reduce", "split a digraph into pure sources and sinks", ("json", "dot", "text")),
            ("strategy", "labeling under which both players learn", ("json", "dot", "text"))):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("graph", help="edge-list file")
        common(p, formats)
        if name == "simulate":
            p.add_argument("--trace", action="store_true", help="emit every step as JSON lines")
        if name == "strategy":
            p.add_argument("--phi", default=None, help="file listing the edges in numbering order")

    p = sub.add_parser("validate", help="check a labeling JSON against the labeling rules")
    p.add_argument("graph")
    p.add_argument("labels", help="labeling JSON as written by analyze")
    common(p, ("json", "text"))

    p = sub.add_parser("check", help="cross-check shortcuts against the simulation")
    p.add_argument("graph", nargs="?", default=None,
                   help="check this graph instead of enumerating trees")
    p.add_argument("--max-n", type=int, default=7)
    p.add_argument("--format", choices=("json", "text"), default="text")
    return parser


def run(argv: Optional[list[str]] = None) -> tuple[int, str, str]:
    """Run a command and return (exit status, stdout text, stderr text)."""
    args = build_parser().parse_args(argv)
    try:
        g = read_edge_list(args.graph) if args.graph is not None else None
        status, out = COMMANDS[args.command](args, g)
        return status, out, ""
    except ParseError as exc:
        return EXIT_PARSE, "", f"parse error: {exc}\n"
    except PlacementError as exc:
        return EXIT_PLACEMENT, "", f"invalid placement: {exc}\n"
    except PreconditionError as exc:
        return EXIT_PRECONDITION, "", f"precondition violated: {exc}\n"


def main(argv: Optional[list[str]] = None) -> int:
    status, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return status


if __name__ == "__main__":
    sys.exit(main())
