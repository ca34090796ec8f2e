"""Exhaustive and random instance generators for cross-validation."""

from __future__ import annotations

import heapq
import itertools
from typing import Iterator

import numpy as np

from .graph import GameGraph


def prufer_decode(seq, n: int) -> list[tuple[int, int]]:
    """Edges of the labeled tree on 0..n-1 with the given Prüfer sequence."""
    if n < 2:
        return []
    if len(seq) != n - 2:
        raise ValueError(f"a Prüfer sequence for {n} vertices has length {n - 2}")
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((u, v))
    return edges


def labeled_trees(n: int) -> Iterator[GameGraph]:
    """All n**(n-2) labeled trees on vertices '0'..'n-1'."""
    if n < 2:
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield GameGraph.from_edges((str(u), str(v)) for u, v in prufer_decode(seq, n))


def trees_up_to(max_n: int, min_n: int = 2) -> Iterator[GameGraph]:
    for n in range(min_n, max_n + 1):
        yield from labeled_trees(n)


def path_graph(n: int, prefix: str = "v") -> GameGraph:
    """Path v1 - v2 - ... - vn."""
    return GameGraph.from_edges((f"{prefix}{i}", f"{prefix}{i + 1}") for i in range(1, n))


def cycle_graph(n: int, prefix: str = "c") -> GameGraph:
    return GameGraph.from_edges((f"{prefix}{i}", f"{prefix}{(i + 1) % n}") for i in range(n))


# directed graphs, one per isomorphism class
#
# A digraph on n vertices is an integer whose bits are the n*(n-1) possible
# arcs; the canonical code of a class is its smallest code over all vertex
# permutations.  Classes on n vertices come from classes on n-1 vertices by
# adding a vertex in every possible way.


def _arc_index(n: int) -> dict[tuple[int, int], int]:
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    return {p: k for k, p in enumerate(pairs)}


def _perm_tables(n: int, chunk: int):
    """Lookup tables mapping each code chunk to its permuted bits."""
    index = _arc_index(n)
    arcs = sorted(index, key=index.get)
    nbits = len(arcs)
    perms = list(itertools.permutations(range(n)))
    target = np.array([[index[(p[i], p[j])] for (i, j) in arcs] for p in perms], dtype=np.int64)
    weights = np.left_shift(np.int64(1), target)  # (perms, nbits)
    nchunks = (nbits + chunk - 1) // chunk
    values = np.arange(1 << chunk, dtype=np.int64)
    tables = np.zeros((len(perms), nchunks, 1 << chunk), dtype=np.int64)
    for c in range(nchunks):
        lo, hi = c * chunk, min(nbits, (c + 1) * chunk)
        bits = ((values[:, None] >> np.arange(hi - lo)) & 1)  # (2^chunk, width)
        tables[:, c, :] = weights[:, lo:hi] @ bits.T
    return tables


def canonical_codes(codes: np.ndarray, n: int, chunk: int = 10, batch: int = 1 << 20) -> np.ndarray:
    if n <= 1:
        return codes.copy()
    tables = _perm_tables(n, chunk)
    mask = (1 << chunk) - 1
    out = np.empty_like(codes)
    for start in range(0, len(codes), batch):
        x = codes[start:start + batch]
        parts = [(x >> (c * chunk)) & mask for c in range(tables.shape[1])]
        best = None
        for t in tables:
            val = t[0][parts[0]]
            for c in range(1, len(parts)):
                val |= t[c][parts[c]]
            best = val if best is None else np.minimum(best, val)
        out[start:start + batch] = best
    return out


def digraph_classes(n: int) -> np.ndarray:
    """Sorted canonical codes, one per isomorphism class of simple digraphs on n vertices."""
    if n <= 1:
        return np.zeros(1, dtype=np.int64)
    if n <= 4:
        codes = np.arange(1 << (n * (n - 1)), dtype=np.int64)
        return np.unique(canonical_codes(codes, n))
    small = digraph_classes(n - 1)
    old, new = _arc_index(n - 1), _arc_index(n)
    # re-index the n-1 vertex arcs inside the n vertex code
    lifted = np.zeros_like(small)
    for (i, j), k in old.items():
        lifted |= ((small >> k) & 1) << new[(i, j)]
    fresh = [new[(i, n - 1)] for i in range(n - 1)] + [new[(n - 1, j)] for j in range(n - 1)]
    ext = np.zeros(1 << len(fresh), dtype=np.int64)
    for bit, pos in enumerate(fresh):
        ext |= ((np.arange(1 << len(fresh)) >> bit) & 1) << pos
    candidates = (lifted[:, None] | ext[None, :]).ravel()
    return np.unique(canonical_codes(candidates, n))


def digraph_from_code(code: int, n: int) -> GameGraph:
    arcs = [(str(i), str(j)) for (i, j), k in _arc_index(n).items() if (int(code) >> k) & 1]
    return GameGraph.from_edges(arcs, directed=True, vertices=[str(i) for i in range(n)])


def random_digraph(n: int, rng: np.random.Generator) -> GameGraph:
    """Each vertex pair independently gets no arc, one arc either way, or both."""
    arcs = []
    for i in range(n):
        for j in range(i + 1, n):
            state = rng.integers(4)
            if state & 1:
                arcs.append((str(i), str(j)))
            if state & 2:
                arcs.append((str(j), str(i)))
    return GameGraph.from_edges(arcs, directed=True, vertices=[str(i) for i in range(n)])
