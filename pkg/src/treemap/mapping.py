"""Mappings of edges to tree paths, and the stretch / congestion metrics.

A mapping assigns to every edge of the host graph a nonempty multiset of
edges (the path the edge is rerouted onto), represented as a sparse
nonnegative-integer matrix: entry (i, j) counts how often edge j appears on
the path assigned to edge i.  Spanning trees induce canonical mappings where
every edge is sent to the unique tree path joining its endpoints.

Metrics:
    distance of edge i  = sum_j M[i,j] * length[j];    stretch = distance / length[i]
    load of edge j      = sum_i M[i,j] * capacity[i];  congestion = load / capacity[j]

A probabilistic mapping is a finite distribution over spanning trees; its
stretch (congestion) is the maximum over edges of the weight-averaged per-edge
stretch (congestion).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import GraphFormatError, GraphInvariantError, SpanningTree, WeightedMultigraph

WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class Mapping:
    """Sparse nonnegative-integer matrix; rows[i] maps edge id j -> multiplicity."""

    m: int
    rows: tuple[dict[int, int], ...]

    def __post_init__(self):
        if len(self.rows) != self.m:
            raise GraphInvariantError("mapping must have one row per edge")
        for i, row in enumerate(self.rows):
            if not row:
                raise GraphInvariantError(f"mapping row {i} is empty")
            for j, mult in row.items():
                if not (0 <= j < self.m) or mult < 0 or int(mult) != mult:
                    raise GraphInvariantError(
                        f"mapping entry ({i}, {j}) = {mult} is invalid")


@dataclass(frozen=True)
class ProbabilisticMapping:
    """Finite distribution over spanning trees of one host graph."""

    support: tuple[tuple[SpanningTree, float], ...]

    def __post_init__(self):
        if not self.support:
            raise GraphInvariantError("probabilistic mapping needs nonempty support")
        g = self.support[0][0].graph
        total = 0.0
        for tree, weight in self.support:
            if tree.graph is not g:
                raise GraphInvariantError("support trees belong to different graphs")
            if weight < 0:
                raise GraphInvariantError("negative support weight")
            total += weight
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise GraphInvariantError(f"support weights sum to {total!r}, not 1")

    @property
    def graph(self) -> WeightedMultigraph:
        return self.support[0][0].graph

    def merged(self) -> "ProbabilisticMapping":
        """Combine duplicate trees, summing their weights."""
        acc: dict[frozenset[int], float] = {}
        trees: dict[frozenset[int], SpanningTree] = {}
        for tree, weight in self.support:
            key = tree.tree_edges
            acc[key] = acc.get(key, 0.0) + weight
            trees.setdefault(key, tree)
        return ProbabilisticMapping(tuple((trees[k], w) for k, w in acc.items()))


def canonical_mapping(g: WeightedMultigraph, t: SpanningTree) -> Mapping:
    """Mapping sending each edge to the unique tree path joining its endpoints."""
    if t.graph is not g:
        raise GraphInvariantError("tree does not belong to this graph")
    parent, parent_edge, depth, _ = t.rooted(0)
    rows = []
    for e in g.edges:
        row: dict[int, int] = {}
        u, v = e.u, e.v
        while u != v:
            if depth[u] < depth[v]:
                u, v = v, u
            row[parent_edge[u]] = row.get(parent_edge[u], 0) + 1
            u = parent[u]
        rows.append(row)
    return Mapping(g.n_edges, tuple(rows))


def dist_of_edge(m: Mapping, lengths: np.ndarray, i: int) -> float:
    """Length of the path assigned to edge i."""
    return float(sum(mult * lengths[j] for j, mult in m.rows[i].items()))


def load_of_edge(m: Mapping, capacities: np.ndarray, j: int) -> float:
    """Total capacity routed over edge j, with multiplicities."""
    return float(sum(row.get(j, 0) * capacities[i] for i, row in enumerate(m.rows)))


def mapping_stretches(m: Mapping, lengths: np.ndarray) -> np.ndarray:
    return np.array([dist_of_edge(m, lengths, i) / lengths[i] for i in range(m.m)])


def mapping_congestions(m: Mapping, capacities: np.ndarray) -> np.ndarray:
    loads = np.zeros(m.m)
    for i, row in enumerate(m.rows):
        for j, mult in row.items():
            loads[j] += mult * capacities[i]
    return loads / capacities


def tree_stretches(g: WeightedMultigraph, t: SpanningTree,
                   lengths: np.ndarray | None = None) -> np.ndarray:
    """Per-edge stretches under the canonical mapping of t, without building it.

    Tree-edge distances are taken as the edge's own length (stretch exactly 1).
    """
    if lengths is None:
        lengths = g.lengths
    parent, parent_edge, depth, order = t.rooted(0)
    wdepth = np.zeros(g.n_vertices)
    for v in order:
        if parent[v] >= 0:
            wdepth[v] = wdepth[parent[v]] + lengths[parent_edge[v]]
    out = np.empty(g.n_edges)
    for eid, e in enumerate(g.edges):
        if eid in t.tree_edges:
            out[eid] = 1.0
            continue
        u, v = e.u, e.v
        a, b = u, v
        while a != b:
            if depth[a] < depth[b]:
                a, b = b, a
            a = parent[a]
        out[eid] = (wdepth[u] + wdepth[v] - 2.0 * wdepth[a]) / lengths[eid]
    return out


def tree_congestions(g: WeightedMultigraph, t: SpanningTree,
                     capacities: np.ndarray | None = None) -> np.ndarray:
    """Per-edge congestions under the canonical mapping of t.

    The load of a tree edge is the total capacity (own capacity included) of
    graph edges whose endpoints are separated by removing it; non-tree edges
    carry no load.
    """
    if capacities is None:
        capacities = g.capacities
    parent, parent_edge, depth, order = t.rooted(0)
    diff = np.zeros(g.n_vertices)
    for e, cap in zip(g.edges, capacities):
        u, v = e.u, e.v
        a, b = u, v
        while a != b:
            if depth[a] < depth[b]:
                a, b = b, a
            a = parent[a]
        diff[u] += cap
        diff[v] += cap
        diff[a] -= 2.0 * cap
    # accumulate subtree sums bottom-up; load of edge (parent[v], v) lands at v
    loads = diff.copy()
    for v in reversed(order):
        if parent[v] >= 0:
            loads[parent[v]] += loads[v]
    out = np.zeros(g.n_edges)
    for v in order:
        eid = parent_edge[v]
        if eid >= 0:
            out[eid] = loads[v] / capacities[eid]
    return out


def prob_stretch(pm: ProbabilisticMapping,
                 lengths: np.ndarray | None = None) -> tuple[np.ndarray, float]:
    """(per-edge average stretches, overall stretch = max over edges)."""
    g = pm.graph
    if lengths is None:
        lengths = g.lengths
    acc = np.zeros(g.n_edges)
    for tree, weight in pm.support:
        if weight:
            acc += weight * tree_stretches(g, tree, lengths)
    return acc, float(acc.max())


def prob_congestion(pm: ProbabilisticMapping,
                    capacities: np.ndarray | None = None) -> tuple[np.ndarray, float]:
    """(per-edge average congestions, overall congestion = max over edges)."""
    g = pm.graph
    if capacities is None:
        capacities = g.capacities
    acc = np.zeros(g.n_edges)
    for tree, weight in pm.support:
        if weight:
            acc += weight * tree_congestions(g, tree, capacities)
    return acc, float(acc.max())


def weighted_stretch_objective(m: Mapping, alpha: np.ndarray,
                               lengths: np.ndarray) -> float:
    """sum_i alpha[i] * distance(i) / length[i]; alpha must not be all zero."""
    alpha = np.asarray(alpha, dtype=float)
    if not (alpha > 0).any():
        raise GraphInvariantError("alpha must have a positive entry")
    total = 0.0
    for i in range(m.m):
        if alpha[i]:
            total += alpha[i] * dist_of_edge(m, lengths, i) / lengths[i]
    return total


def weighted_congestion_objective(m: Mapping, beta: np.ndarray,
                                  capacities: np.ndarray) -> float:
    """sum_j beta[j] * load(j) / capacity[j]; beta must not be all zero."""
    beta = np.asarray(beta, dtype=float)
    if not (beta > 0).any():
        raise GraphInvariantError("beta must have a positive entry")
    total = 0.0
    for j in range(m.m):
        if beta[j]:
            total += beta[j] * load_of_edge(m, capacities, j) / capacities[j]
    return total


def load_distribution(path: str, g: WeightedMultigraph) -> ProbabilisticMapping:
    """Parse a distribution file: lines 'tree <weight> <edge_id>...', then 'endmapping'."""
    support = []
    closed = False
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if closed:
                raise GraphFormatError(f"{path}:{lineno}: content after 'endmapping'")
            parts = line.split()
            if parts[0] == "endmapping":
                closed = True
                continue
            if parts[0] != "tree" or len(parts) < 2:
                raise GraphFormatError(
                    f"{path}:{lineno}: expected 'tree <weight> <edge_id>...'")
            try:
                weight = float(parts[1])
                ids = [int(tok) for tok in parts[2:]]
            except ValueError:
                raise GraphFormatError(f"{path}:{lineno}: malformed number") from None
            support.append((SpanningTree(g, frozenset(ids)), weight))
    if not closed:
        raise GraphFormatError(f"{path}: missing 'endmapping' line")
    return ProbabilisticMapping(tuple(support))


def format_distribution(pm: ProbabilisticMapping) -> str:
    """Distribution file content; weights use repr for exact round-trips."""
    lines = []
    for tree, weight in pm.support:
        ids = " ".join(str(i) for i in sorted(tree.tree_edges))
        lines.append(f"tree {weight!r} {ids}")
    lines.append("endmapping")
    return "\n".join(lines) + "\n"


def save_distribution(pm: ProbabilisticMapping, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_distribution(pm))
