"""Graph representation, structural predicates and rooted heights."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterable

from .errors import NotATreeError, ParseError, PreconditionError

Edge = tuple[str, str]
HeightTable = dict[Edge, int]


def _edge_key(u: str, v: str) -> Edge:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class GameGraph:
    """A finite simple graph, optionally with oriented edges.

    Undirected edges are stored as sorted pairs; directed edges as
    ``(tail, head)``.  A directed graph may hold both ``(u, v)`` and
    ``(v, u)``.
    """

    vertices: frozenset[str]
    edges: frozenset[Edge]
    directed: bool = False

    def __post_init__(self):
        for u, v in self.edges:
            if u == v:
                raise PreconditionError(f"self-loop at vertex {u!r}")
            if u not in self.vertices or v not in self.vertices:
                missing = u if u not in self.vertices else v
                raise PreconditionError(f"edge ({u!r}, {v!r}) uses undeclared vertex {missing!r}")
            if not self.directed and u > v:
                raise PreconditionError(f"undirected edge ({u!r}, {v!r}) is not stored sorted")

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str]], directed: bool = False,
                   vertices: Iterable[str] = ()) -> "GameGraph":
        seen: set[Edge] = set()
        verts = set(vertices)
        for u, v in edges:
            u, v = str(u), str(v)
            if u == v:
                raise PreconditionError(f"self-loop at vertex {u!r}")
            key = (u, v) if directed else _edge_key(u, v)
            if key in seen:
                raise PreconditionError(f"duplicate edge ({u!r}, {v!r})")
            seen.add(key)
            verts.update((u, v))
        return cls(frozenset(verts), frozenset(seen), directed)

    # adjacency views

    @cached_property
    def adjacency(self) -> dict[str, frozenset[str]]:
        """Neighbours in the underlying undirected graph."""
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return {v: frozenset(ns) for v, ns in adj.items()}

    @cached_property
    def successors(self) -> dict[str, frozenset[str]]:
        if not self.directed:
            return self.adjacency
        out: dict[str, set[str]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            out[u].add(v)
        return {v: frozenset(ns) for v, ns in out.items()}

    @cached_property
    def predecessors(self) -> dict[str, frozenset[str]]:
        if not self.directed:
            return self.adjacency
        inc: dict[str, set[str]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            inc[v].add(u)
        return {v: frozenset(ns) for v, ns in inc.items()}

    def neighbors(self, v: str) -> frozenset[str]:
        return self.adjacency[v]

    def degree(self, v: str) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: str, v: str) -> bool:
        if self.directed:
            return (u, v) in self.edges
        return _edge_key(u, v) in self.edges

    def sorted_vertices(self) -> list[str]:
        return sorted(self.vertices)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    # derived graphs

    def underlying(self) -> "GameGraph":
        if not self.directed:
            return self
        return GameGraph(self.vertices, frozenset(_edge_key(u, v) for u, v in self.edges), False)

    def bidirected(self) -> "GameGraph":
        """Directed form with one edge per orientation of every undirected edge."""
        if self.directed:
            return self
        arcs = set()
        for u, v in self.edges:
            arcs.add((u, v))
            arcs.add((v, u))
        return GameGraph(self.vertices, frozenset(arcs), True)

    def reversed(self) -> "GameGraph":
        if not self.directed:
            return self
        return GameGraph(self.vertices, frozenset((v, u) for u, v in self.edges), True)

    def subgraph(self, keep: Iterable[str]) -> "GameGraph":
        keep = frozenset(keep)
        return GameGraph(keep, frozenset(e for e in self.edges if e[0] in keep and e[1] in keep),
                         self.directed)

    @cached_property
    def _component_map(self) -> dict[str, frozenset[str]]:
        adj = self.adjacency
        found: dict[str, frozenset[str]] = {}
        for start in sorted(self.vertices):
            if start in found:
                continue
            seen = {start}
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            comp = frozenset(seen)
            for x in comp:
                found[x] = comp
        return found

    def component(self, v: str) -> frozenset[str]:
        """Vertices weakly connected to ``v``."""
        if v not in self.vertices:
            raise PreconditionError(f"unknown vertex {v!r}")
        return self._component_map[v]

    def components(self) -> list[frozenset[str]]:
        comps = {c for c in self._component_map.values()}
        return sorted(comps, key=min)

    def restrict_to_component(self, v: str) -> "GameGraph":
        comp = self.component(v)
        if len(comp) == len(self.vertices):
            return self
        return self.subgraph(comp)


# structural predicates


def _require_undirected(g: GameGraph, what: str) -> None:
    if g.directed:
        raise PreconditionError(f"{what} needs an undirected graph")


def is_connected(g: GameGraph) -> bool:
    if not g.vertices:
        return True
    return len(g.component(next(iter(g.vertices)))) == len(g.vertices)


def is_tree(g: GameGraph) -> bool:
    """True iff ``g`` is connected and acyclic."""
    _require_undirected(g, "is_tree")
    if not g.vertices:
        return False
    return len(g.edges) == len(g.vertices) - 1 and is_connected(g)


def is_forest(g: GameGraph) -> bool:
    """Acyclicity of the underlying undirected graph (union-find)."""
    parent: dict[str, str] = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    seen = set()
    for u, v in g.edges:
        key = _edge_key(u, v)
        if key in seen:
            # u->v and v->u collapse to a 2-cycle in the underlying multigraph
            return False
        seen.add(key)
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def require_tree(g: GameGraph) -> None:
    _require_undirected(g, "this operation")
    if is_tree(g):
        return
    if not g.vertices:
        raise NotATreeError("graph is not a tree: it has no vertices")
    root = min(g.vertices)
    if not is_connected(g):
        stray = min(g.vertices - g.component(root))
        raise NotATreeError(f"graph is not a tree: vertex {stray!r} is not connected to {root!r}")
    # connected with too many edges: report the first edge that closes a cycle
    for u, v in g.sorted_edges():
        if _closes_cycle(g, u, v):
            raise NotATreeError(f"graph is not a tree: edge ({u}, {v}) lies on a cycle")
    raise NotATreeError("graph is not a tree")


def _closes_cycle(g: GameGraph, u: str, v: str) -> bool:
    """Is v reachable from u without the edge (u, v)?"""
    seen = {u}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for y in g.adjacency[x]:
            if x == u and y == v:
                continue
            if y == v:
                return True
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return False


@dataclass(frozen=True)
class Bipartition:
    side_a: frozenset[str]
    side_b: frozenset[str]

    def side_of(self, v: str) -> str:
        if v in self.side_a:
            return "A"
        if v in self.side_b:
            return "B"
        raise KeyError(v)

    def swapped(self) -> "Bipartition":
        return Bipartition(self.side_b, self.side_a)


def bipartition(g: GameGraph, anchor: str) -> Bipartition:
    """Two-colour a tree so that ``anchor`` lands on side A."""
    require_tree(g)
    if anchor not in g.vertices:
        raise PreconditionError(f"unknown vertex {anchor!r}")
    return _bipartition(g, anchor)


@lru_cache(maxsize=4096)
def _bipartition(g: GameGraph, anchor: str) -> Bipartition:
    colour = {anchor: 0}
    queue = deque([anchor])
    while queue:
        x = queue.popleft()
        for y in g.adjacency[x]:
            if y not in colour:
                colour[y] = 1 - colour[x]
                queue.append(y)
    return Bipartition(frozenset(v for v, c in colour.items() if c == 0),
                       frozenset(v for v, c in colour.items() if c == 1))


def heights(g: GameGraph) -> HeightTable:
    """All rooted heights of a tree by two-pass rerooting.

    ``h[(u, v)]`` counts the vertices on the longest downward path from
    ``v`` when the tree hangs from ``u``; a leaf ``v`` has height 1.
    """
    require_tree(g)
    return dict(_heights(g))


@lru_cache(maxsize=4096)
def _heights(g: GameGraph) -> HeightTable:
    adj = g.adjacency
    root = min(g.vertices)
    parent = {root: None}
    order = [root]
    for x in order:
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)

    h: HeightTable = {}
    down: dict[str, int] = {}
    for x in reversed(order):
        best = 0
        for y in adj[x]:
            if y != parent[x]:
                best = max(best, down[y])
        down[x] = best + 1
        if parent[x] is not None:
            h[(parent[x], x)] = down[x]

    # up pass: h[(x, p)] is the height of p's side seen from its child x
    for x in order:
        top1 = top2 = 0
        for y in adj[x]:
            val = h[(x, y)] if y == parent[x] else down[y]
            if val > top1:
                top1, top2 = val, top1
            elif val > top2:
                top2 = val
        for y in adj[x]:
            if y == parent[x]:
                continue
            other = top2 if down[y] == top1 else top1
            h[(y, x)] = other + 1
    return h


# edge-list text format


def parse_edge_list(text: str, source: str = "<string>") -> GameGraph:
    """Parse ``u v`` / ``u > v`` lines into a graph.

    A line holding a single token declares an isolated vertex.  Mixing
    directed and undirected lines is rejected.
    """
    edges: list[Edge] = []
    vertices: list[str] = []
    directed = None
    seen: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        where = f"{source}:{lineno}"
        if len(tokens) == 1:
            vertices.append(tokens[0])
            continue
        if len(tokens) == 3 and tokens[1] == ">":
            is_arc = True
            u, v = tokens[0], tokens[2]
        elif len(tokens) == 2 and ">" not in tokens:
            is_arc = False
            u, v = tokens
        else:
            raise ParseError(f"{where}: cannot parse edge line {raw.strip()!r}")
        if directed is None:
            directed = is_arc
        elif directed != is_arc:
            raise ParseError(f"{where}: mixed directed and undirected edges at ({u}, {v})")
        if u == v:
            raise ParseError(f"{where}: self-loop at vertex {u!r}")
        key = (u, v) if is_arc else _edge_key(u, v)
        if key in seen:
            raise ParseError(f"{where}: duplicate edge ({u}, {v})")
        seen.add(key)
        edges.append((u, v))
    return GameGraph.from_edges(edges, directed=bool(directed), vertices=vertices)


def read_edge_list(path) -> GameGraph:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    return parse_edge_list(text, str(path))


def format_edge_list(g: GameGraph) -> str:
    sep = " > " if g.directed else " "
    lines = [f"{u}{sep}{v}" for u, v in g.sorted_edges()]
    isolated = sorted(v for v in g.vertices if not g.adjacency[v])
    lines.extend(isolated)
    return "\n".join(lines) + ("\n" if lines else "")
