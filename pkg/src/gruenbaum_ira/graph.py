"""Gruenbaum graph, Hamiltonian-path search and dither-sequence derivation.

The dither sequence is obtained in two passes over the graph: a Hamiltonian
path fixes a labeling (vertices numbered in visit order), then a second
vertex-covering walk over the edges left unused by the first path is read
off in the new labels.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .errors import StructureError
from .interleaver import DitherSequence

# Adjacency of the 25-vertex Gruenbaum graph, labeled so that 0-1-2-...-24 is
# a Hamiltonian path and Gr25 is a walk over the 26 remaining edges.  The two
# edges (0, 5) and (7, 24) close the residual walk; they are the only closure
# giving a 4-regular, girth-5, 4-chromatic graph.
_HAM_PATH_EDGES = [(i, i + 1) for i in range(24)]
_RESIDUAL_WALK = [7, 20, 12, 4, 9, 21, 0, 18, 11, 6, 16, 3, 19, 23, 10, 15,
                  1, 24, 17, 13, 22, 2, 8, 14, 5]
_CLOSING_EDGES = [(0, 5), (7, 24)]


@dataclass(frozen=True)
class SimpleGraph:
    vertex_count: int
    edges: frozenset

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        """Build a graph, rejecting self-loops, duplicates and bad indices."""
        seen = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise StructureError(f"self-loop at vertex {u}")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise StructureError(f"edge ({u}, {v}) outside 0..{vertex_count - 1}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise StructureError(f"duplicate edge {key}")
            seen.add(key)
        return cls(vertex_count, frozenset(seen))

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for row in adj:
            row.sort()
        return adj

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def relabel(self, mapping: dict[int, int] | list[int]) -> "SimpleGraph":
        return SimpleGraph.from_edges(
            self.vertex_count, ((mapping[u], mapping[v]) for u, v in self.edges))


@dataclass(frozen=True)
class VertexPath:
    vertices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[int, int]]:
        return [(min(a, b), max(a, b)) for a, b in zip(self.vertices, self.vertices[1:])]

    def is_path_in(self, g: SimpleGraph) -> bool:
        return all(g.has_edge(a, b) for a, b in zip(self.vertices, self.vertices[1:]))

    def is_hamiltonian_in(self, g: SimpleGraph) -> bool:
        return (len(self.vertices) == g.vertex_count
                and len(set(self.vertices)) == g.vertex_count
                and self.is_path_in(g))


@dataclass(frozen=True)
class PropertyReport:
    vertex_count: int
    edge_count: int
    degree_histogram: dict
    regular_degree: Optional[int]
    girth: Optional[int]


def gruenbaum_graph() -> SimpleGraph:
    """Return the embedded Gruenbaum graph (25 vertices, 4-regular, girth 5).

    The constant is checked on every call; a corrupted table raises
    `StructureError` instead of silently feeding a wrong graph downstream.
    """
    edges = (_HAM_PATH_EDGES + list(zip(_RESIDUAL_WALK, _RESIDUAL_WALK[1:]))
             + _CLOSING_EDGES)
    g = SimpleGraph.from_edges(25, edges)
    rep = validate_graph(g)
    if (rep.vertex_count, rep.edge_count, rep.regular_degree, rep.girth) != (25, 50, 4, 5):
        raise StructureError(f"embedded Gruenbaum graph failed validation: {rep}")
    return g


def girth(g: SimpleGraph) -> Optional[int]:
    """Exact girth by breadth-first search from every vertex; None if acyclic."""
    adj = g.adjacency()
    best = None
    for root in range(g.vertex_count):
        dist = [-1] * g.vertex_count
        parent = [-1] * g.vertex_count
        dist[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    cyc = dist[u] + dist[w] + 1
                    if best is None or cyc < best:
                        best = cyc
    return best


def validate_graph(g: SimpleGraph) -> PropertyReport:
    for u, v in g.edges:
        if u == v:
            raise StructureError(f"self-loop at vertex {u}")
        if u > v:
            raise StructureError(f"edge ({u}, {v}) not stored in canonical order")
    degrees = Counter()
    for u, v in g.edges:
        degrees[u] += 1
        degrees[v] += 1
    hist = Counter(degrees[v] for v in range(g.vertex_count))
    regular = next(iter(hist)) if len(hist) == 1 else None
    return PropertyReport(
        vertex_count=g.vertex_count,
        edge_count=len(g.edges),
        degree_histogram=dict(sorted(hist.items())),
        regular_degree=regular,
        girth=girth(g),
    )


def _hamiltonian_from(adj: list[list[int]], start: int) -> Optional[list[int]]:
    n = len(adj)
    path = [start]
    visited = [False] * n
    visited[start] = True
    # stack of neighbor cursors, one per path position
    cursors = [0]
    while path:
        if len(path) == n:
            return path
        u = path[-1]
        i = cursors[-1]
        nbrs = adj[u]
        while i < len(nbrs) and visited[nbrs[i]]:
            i += 1
        if i < len(nbrs):
            cursors[-1] = i + 1
            w = nbrs[i]
            visited[w] = True
            path.append(w)
            cursors.append(0)
        else:
            visited[path.pop()] = False
            cursors.pop()
    return None


def find_hamiltonian_path(g: SimpleGraph, start: int) -> Optional[VertexPath]:
    """Backtracking search for a Hamiltonian path beginning at `start`.

    Neighbors are tried in ascending index order, so the result is
    deterministic. Returns None once the search tree is exhausted.
    """
    if not 0 <= start < g.vertex_count:
        raise StructureError(f"start vertex {start} not in graph")
    found = _hamiltonian_from(g.adjacency(), start)
    return None if found is None else VertexPath(tuple(found))


def iter_hamiltonian_paths(g: SimpleGraph, start: Optional[int] = None):
    """Yield every Hamiltonian path (as vertex tuples), optionally from one start."""
    adj = g.adjacency()
    n = g.vertex_count
    starts = range(n) if start is None else [start]

    def extend(path, visited):
        if len(path) == n:
            yield tuple(path)
            return
        for w in adj[path[-1]]:
            if not visited[w]:
                visited[w] = True
                path.append(w)
                yield from extend(path, visited)
                path.pop()
                visited[w] = False

    for s in starts:
        visited = [False] * n
        visited[s] = True
        yield from extend([s], visited)


def residual_graph(g: SimpleGraph, ham: VertexPath) -> SimpleGraph:
    """Edges of `g` not on `ham`, relabeled by position along `ham`."""
    if not ham.is_hamiltonian_in(g):
        raise StructureError("path is not Hamiltonian in the graph")
    label = {v: i for i, v in enumerate(ham.vertices)}
    used = set(ham.edges())
    return SimpleGraph.from_edges(
        g.vertex_count,
        ((label[u], label[v]) for u, v in g.edges if (u, v) not in used))


def derive_dither_sequence(g: SimpleGraph, ham: VertexPath,
                           start: Optional[int] = None) -> Optional[DitherSequence]:
    """Read a dither sequence off the edges left over by a Hamiltonian path.

    Vertices are renumbered by their position on `ham`; a second Hamiltonian
    path is then searched in the residual subgraph (starts tried in ascending
    order unless `start` is given) and its renumbered vertex list returned.
    """
    res = residual_graph(g, ham)
    adj = res.adjacency()
    starts = range(res.vertex_count) if start is None else [start]
    for s in starts:
        walk = _hamiltonian_from(adj, s)
        if walk is not None:
            return DitherSequence(tuple(walk))
    return None


def write_edge_list(g: SimpleGraph, path: str | Path) -> None:
    lines = [f"{u} {v}" for u, v in sorted(g.edges)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path: str | Path, vertex_count: Optional[int] = None) -> SimpleGraph:
    edges = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        u, v = line.split()
        edges.append((int(u), int(v)))
    if vertex_count is None:
        vertex_count = 1 + max(max(e) for e in edges) if edges else 0
    return SimpleGraph.from_edges(vertex_count, edges)
