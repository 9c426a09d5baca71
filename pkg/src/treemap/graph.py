"""Weighted multigraph representation, validation, file I/O and basic routines.

Graphs are undirected multigraphs: parallel edges are kept as distinct edges
with their own ids, self-loops are rejected, and every edge carries a strictly
positive length and a strictly positive capacity.  Edge ids are dense indices
0..m-1 in insertion order.  Graphs are immutable after construction.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np


class GraphFormatError(ValueError):
    """Raised when a graph/rotation/distribution file cannot be parsed."""


class GraphInvariantError(ValueError):
    """Raised when graph data violates a structural invariant."""


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    length: float
    capacity: float


class WeightedMultigraph:
    """Undirected multigraph with positive per-edge lengths and capacities."""

    def __init__(self, n_vertices: int, edges: list[tuple[int, int, float, float]]):
        if n_vertices < 1:
            raise GraphInvariantError("graph needs at least one vertex")
        self.n_vertices = int(n_vertices)
        built = []
        for eid, (u, v, length, capacity) in enumerate(edges):
            u, v = int(u), int(v)
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise GraphInvariantError(
                    f"edge {eid}: endpoint out of range [0, {n_vertices})")
            if u == v:
                raise GraphInvariantError(f"edge {eid}: self-loop at vertex {u}")
            if not (length > 0.0):
                raise GraphInvariantError(f"edge {eid}: length must be positive")
            if not (capacity > 0.0):
                raise GraphInvariantError(f"edge {eid}: capacity must be positive")
            built.append(Edge(u, v, float(length), float(capacity)))
        self.edges: tuple[Edge, ...] = tuple(built)
        self.lengths = np.array([e.length for e in built], dtype=float)
        self.capacities = np.array([e.capacity for e in built], dtype=float)
        self.lengths.setflags(write=False)
        self.capacities.setflags(write=False)
        self._adjacency: list[list[tuple[int, int]]] | None = None

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Per-vertex list of (neighbor, edge_id), in edge-id order."""
        if self._adjacency is None:
            adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n_vertices)]
            for eid, e in enumerate(self.edges):
                adj[e.u].append((e.v, eid))
                adj[e.v].append((e.u, eid))
            self._adjacency = adj
        return self._adjacency

    def other_end(self, edge_id: int, vertex: int) -> int:
        e = self.edges[edge_id]
        return e.v if vertex == e.u else e.u

    def __repr__(self) -> str:
        return f"WeightedMultigraph(n={self.n_vertices}, m={self.n_edges})"


@dataclass(frozen=True)
class SpanningTree:
    """A spanning tree of a host graph, identified by its set of edge ids."""

    graph: WeightedMultigraph = field(repr=False)
    tree_edges: frozenset[int]

    def __post_init__(self):
        g = self.graph
        if len(self.tree_edges) != g.n_vertices - 1:
            raise GraphInvariantError(
                f"spanning tree needs {g.n_vertices - 1} edges, got {len(self.tree_edges)}")
        parent = list(range(g.n_vertices))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for eid in self.tree_edges:
            e = g.edges[eid]
            ru, rv = find(e.u), find(e.v)
            if ru == rv:
                raise GraphInvariantError("tree edges contain a cycle")
            parent[ru] = rv
        # n-1 acyclic edges on n vertices are automatically spanning

    def __contains__(self, edge_id: int) -> bool:
        return edge_id in self.tree_edges

    def adjacency(self) -> list[list[tuple[int, int]]]:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.graph.n_vertices)]
        for eid in sorted(self.tree_edges):
            e = self.graph.edges[eid]
            adj[e.u].append((e.v, eid))
            adj[e.v].append((e.u, eid))
        return adj

    def rooted(self, root: int = 0) -> tuple[list[int], list[int], list[int], list[int]]:
        """Root the tree; returns (parent_vertex, parent_edge, depth, order).

        `order` lists vertices with every parent before its children.
        parent_vertex[root] == -1 and parent_edge[root] == -1.
        """
        g = self.graph
        parent = [-1] * g.n_vertices
        parent_edge = [-1] * g.n_vertices
        depth = [0] * g.n_vertices
        order = [root]
        seen = [False] * g.n_vertices
        seen[root] = True
        adj = self.adjacency()
        stack = [root]
        while stack:
            v = stack.pop()
            for w, eid in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    parent[w] = v
                    parent_edge[w] = eid
                    depth[w] = depth[v] + 1
                    order.append(w)
                    stack.append(w)
        return parent, parent_edge, depth, order


def is_connected(g: WeightedMultigraph) -> bool:
    """True iff every vertex pair is joined by a path."""
    if g.n_vertices == 1:
        return True
    adj = g.adjacency()
    seen = [False] * g.n_vertices
    seen[0] = True
    stack = [0]
    count = 1
    while stack:
        v = stack.pop()
        for w, _eid in adj[v]:
            if not seen[w]:
                seen[w] = True
                count += 1
                stack.append(w)
    return count == g.n_vertices


def shortest_path_tree(g: WeightedMultigraph, root: int,
                       weights: np.ndarray | None = None) -> SpanningTree:
    """Tree of shortest paths from root under the given positive edge weights.

    Ties are broken deterministically: each vertex keeps, among all incident
    edges minimizing (dist[other end] + weight), the one with smallest edge id.
    """
    if weights is None:
        weights = g.lengths
    weights = np.asarray(weights, dtype=float)
    if (weights <= 0).any():
        raise GraphInvariantError("shortest_path_tree requires positive weights")
    n = g.n_vertices
    adj = g.adjacency()
    dist = [float("inf")] * n
    dist[root] = 0.0
    heap = [(0.0, root)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist[v]:
            continue
        for w, eid in adj[v]:
            nd = d + weights[eid]
            if nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    if any(d == float("inf") for d in dist):
        raise GraphInvariantError("graph is disconnected")
    tree_edges = set()
    for v in range(n):
        if v == root:
            continue
        best = None
        for w, eid in adj[v]:
            key = (dist[w] + weights[eid], eid)
            if best is None or key < best:
                best = key
        # best edge attains dist[v] by Dijkstra optimality
        tree_edges.add(best[1])
    return SpanningTree(g, frozenset(tree_edges))


def minimum_spanning_tree(g: WeightedMultigraph,
                          weights: np.ndarray | None = None) -> SpanningTree:
    """Kruskal MST under the given weights; ties broken by smallest edge id."""
    if weights is None:
        weights = g.lengths
    n = g.n_vertices
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree_edges = set()
    for eid in sorted(range(g.n_edges), key=lambda i: (weights[i], i)):
        e = g.edges[eid]
        ru, rv = find(e.u), find(e.v)
        if ru != rv:
            parent[ru] = rv
            tree_edges.add(eid)
    if len(tree_edges) != n - 1:
        raise GraphInvariantError("graph is disconnected")
    return SpanningTree(g, frozenset(tree_edges))


def load_graph(path: str) -> WeightedMultigraph:
    """Parse a graph file.

    Format (UTF-8 text, line-oriented, '#' starts a comment line):
        graph <n_vertices>
        edge <u> <v> <length> <capacity>     # edge ids assigned in order
    """
    n_vertices = None
    edges: list[tuple[int, int, float, float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if parts[0] == "graph":
                if n_vertices is not None:
                    raise GraphFormatError(f"{path}:{lineno}: duplicate 'graph' line")
                if len(parts) != 2:
                    raise GraphFormatError(f"{path}:{lineno}: expected 'graph <n>'")
                try:
                    n_vertices = int(parts[1])
                except ValueError:
                    raise GraphFormatError(
                        f"{path}:{lineno}: vertex count is not an integer") from None
            elif parts[0] == "edge":
                if n_vertices is None:
                    raise GraphFormatError(f"{path}:{lineno}: 'edge' before 'graph'")
                if len(parts) != 5:
                    raise GraphFormatError(
                        f"{path}:{lineno}: expected 'edge <u> <v> <length> <capacity>'")
                try:
                    u, v = int(parts[1]), int(parts[2])
                    length, capacity = float(parts[3]), float(parts[4])
                except ValueError:
                    raise GraphFormatError(f"{path}:{lineno}: malformed number") from None
                edges.append((u, v, length, capacity))
            else:
                raise GraphFormatError(f"{path}:{lineno}: unknown directive {parts[0]!r}")
    if n_vertices is None:
        raise GraphFormatError(f"{path}: missing 'graph' line")
    return WeightedMultigraph(n_vertices, edges)


def save_graph(g: WeightedMultigraph, path: str) -> None:
    """Write a graph file that load_graph parses back to an identical graph."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"graph {g.n_vertices}\n")
        for e in g.edges:
            fh.write(f"edge {e.u} {e.v} {e.length!r} {e.capacity!r}\n")
