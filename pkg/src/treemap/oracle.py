"""Spanning-tree enumeration, exact tree counting, and stretch response oracles.

The response oracles implement the MAP player's side of the stretch game:
given nonnegative edge coefficients alpha (the EDGE player's mixed strategy)
they return a spanning tree together with the normalized weighted-stretch
objective it achieves.  The exact oracle scans every spanning tree; the
heuristic oracle scans a small candidate set (shortest-path trees from a few
roots plus the minimum-length spanning tree) and reports the true objective
of the best candidate, never an estimate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import (
    GraphInvariantError,
    SpanningTree,
    WeightedMultigraph,
    is_connected,
    minimum_spanning_tree,
    shortest_path_tree,
)
from .mapping import tree_congestions, tree_stretches

# dense path-matrix cache is skipped above this many entries
_DENSE_ENTRY_LIMIT = 64_000_000


class EnumerationOverflowError(RuntimeError):
    """Raised when a graph has more spanning trees than the requested cap."""

    def __init__(self, cap: int):
        super().__init__(f"spanning tree count exceeds cap {cap}")
        self.cap = cap


@dataclass(frozen=True)
class OracleConfig:
    mode: str = "auto"                 # exact | heuristic | auto
    enumeration_cap: int = 1_000_000
    heuristic_roots: int | None = None  # default min(n, 32)
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("exact", "heuristic", "auto"):
            raise ValueError(f"unknown oracle mode {self.mode!r}")
        if self.enumeration_cap < 1:
            raise ValueError("enumeration_cap must be >= 1")
        if self.heuristic_roots is not None and self.heuristic_roots < 1:
            raise ValueError("heuristic_roots must be >= 1")


@dataclass(frozen=True)
class OracleResponse:
    tree: SpanningTree
    achieved: float
    method: str = ""


def enumerate_spanning_trees(g: WeightedMultigraph, cap: int) -> list[SpanningTree]:
    """All spanning trees by contraction/deletion recursion.

    Branches on the smallest-id undecided edge, include before exclude, which
    fixes a deterministic output order.  Raises EnumerationOverflowError as
    soon as more than `cap` trees have been produced.
    """
    if not is_connected(g):
        raise GraphInvariantError("graph is disconnected")
    n, m = g.n_vertices, g.n_edges
    edges = [(e.u, e.v) for e in g.edges]
    out: list[SpanningTree] = []

    def find(parent: list[int], x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def still_connectable(parent: list[int], idx: int, components: int) -> bool:
        probe = parent[:]
        merged = 0
        for k in range(idx, m):
            u, v = edges[k]
            ru, rv = find(probe, u), find(probe, v)
            if ru != rv:
                probe[ru] = rv
                merged += 1
                if merged == components - 1:
                    return True
        return components == 1

    def rec(parent: list[int], idx: int, chosen: list[int], components: int):
        if components == 1:
            if len(out) >= cap:
                raise EnumerationOverflowError(cap)
            out.append(SpanningTree(g, frozenset(chosen)))
            return
        if idx == m:
            return
        u, v = edges[idx]
        ru, rv = find(parent, u), find(parent, v)
        if ru == rv:
            rec(parent, idx + 1, chosen, components)
            return
        # include idx (contract the edge)
        inc = parent[:]
        inc[ru] = rv
        chosen.append(idx)
        rec(inc, idx + 1, chosen, components - 1)
        chosen.pop()
        # exclude idx (delete the edge), unless that disconnects
        if still_connectable(parent, idx + 1, components):
            rec(parent, idx + 1, chosen, components)

    if n == 1:
        return [SpanningTree(g, frozenset())]
    rec(list(range(n)), 0, [], n)
    return out


def count_spanning_trees(g: WeightedMultigraph) -> int:
    """Exact spanning-tree count via an integer Laplacian minor determinant.

    Uses fraction-free (Bareiss) elimination over Python integers, so the
    result is exact at any size; parallel edges enter with multiplicity.
    """
    n = g.n_vertices
    if n == 1:
        return 1
    if not is_connected(g):
        return 0
    lap = [[0] * n for _ in range(n)]
    for e in g.edges:
        lap[e.u][e.u] += 1
        lap[e.v][e.v] += 1
        lap[e.u][e.v] -= 1
        lap[e.v][e.u] -= 1
    mat = [row[1:] for row in lap[1:]]
    size = n - 1
    sign = 1
    prev = 1
    for k in range(size - 1):
        if mat[k][k] == 0:
            for r in range(k + 1, size):
                if mat[r][k] != 0:
                    mat[k], mat[r] = mat[r], mat[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]) // prev
            mat[i][k] = 0
        prev = mat[k][k]
    return sign * mat[size - 1][size - 1]


def _objective(alpha: np.ndarray, stretches: np.ndarray) -> float:
    return float(np.dot(alpha, stretches))


def _check_alpha(alpha: np.ndarray) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    if (alpha < 0).any() or not (alpha > 0).any():
        raise GraphInvariantError("alpha must be nonnegative with a positive entry")
    return alpha


def exact_stretch_oracle(g: WeightedMultigraph, alpha: np.ndarray,
                         lengths: np.ndarray | None = None,
                         cap: int = 1_000_000) -> OracleResponse:
    """Tree minimizing the weighted stretch objective, found by full enumeration.

    achieved = min_T sum_i alpha[i] * stretch_T(i) / sum_i alpha[i];
    ties broken by enumeration order.
    """
    alpha = _check_alpha(alpha)
    if lengths is None:
        lengths = g.lengths
    best = None
    best_obj = None
    for tree in enumerate_spanning_trees(g, cap):
        obj = _objective(alpha, tree_stretches(g, tree, lengths))
        if best_obj is None or obj < best_obj:
            best, best_obj = tree, obj
    return OracleResponse(best, best_obj / float(alpha.sum()), method="exact")


def _heuristic_candidates(g: WeightedMultigraph, lengths: np.ndarray,
                          config: OracleConfig) -> list[SpanningTree]:
    n = g.n_vertices
    k = config.heuristic_roots if config.heuristic_roots is not None else min(n, 32)
    if k >= n:
        roots = list(range(n))
    else:
        rng = np.random.default_rng(config.seed)
        roots = sorted(rng.choice(n, size=k, replace=False).tolist())
    candidates = [shortest_path_tree(g, r, lengths) for r in roots]
    candidates.append(minimum_spanning_tree(g, lengths))
    seen: set[frozenset[int]] = set()
    unique = []
    for t in candidates:
        if t.tree_edges not in seen:
            seen.add(t.tree_edges)
            unique.append(t)
    return unique


def heuristic_stretch_oracle(g: WeightedMultigraph, alpha: np.ndarray,
                             lengths: np.ndarray | None = None,
                             config: OracleConfig = OracleConfig()) -> OracleResponse:
    """Best candidate among shortest-path trees and the minimum-length tree.

    The achieved value is the candidate's true recomputed objective, so the
    response is a valid delta-response even though the candidate set is small.
    """
    alpha = _check_alpha(alpha)
    if lengths is None:
        lengths = g.lengths
    best = None
    best_obj = None
    for tree in _heuristic_candidates(g, lengths, config):
        obj = _objective(alpha, tree_stretches(g, tree, lengths))
        if best_obj is None or obj < best_obj:
            best, best_obj = tree, obj
    return OracleResponse(best, best_obj / float(alpha.sum()), method="heuristic")


def auto_oracle(g: WeightedMultigraph, alpha: np.ndarray,
                lengths: np.ndarray | None = None,
                config: OracleConfig = OracleConfig()) -> OracleResponse:
    """Exact oracle when the spanning-tree count fits under the cap, else heuristic."""
    if count_spanning_trees(g) <= config.enumeration_cap:
        return exact_stretch_oracle(g, alpha, lengths, config.enumeration_cap)
    return heuristic_stretch_oracle(g, alpha, lengths, config)


class TreeEnsemble:
    """All spanning trees of a graph with cached path structure.

    Supports fast evaluation of stretch objectives under arbitrary lengths and
    congestion payoffs under arbitrary capacities (dense path matrix when it
    fits in memory, per-tree fallback otherwise).
    """

    def __init__(self, g: WeightedMultigraph, cap: int):
        self.graph = g
        self.trees = enumerate_spanning_trees(g, cap)
        t, m = len(self.trees), g.n_edges
        self._paths: np.ndarray | None = None
        if t * m * m <= _DENSE_ENTRY_LIMIT:
            paths = np.zeros((t, m, m), dtype=np.uint8)
            for ti, tree in enumerate(self.trees):
                parent, parent_edge, depth, _ = tree.rooted(0)
                for eid, e in enumerate(g.edges):
                    a, b = e.u, e.v
                    while a != b:
                        if depth[a] < depth[b]:
                            a, b = b, a
                        paths[ti, eid, parent_edge[a]] += 1
                        a = parent[a]
            self._paths = paths

    def stretch_matrix(self, lengths: np.ndarray) -> np.ndarray:
        """Payoff matrix S[t, i] = stretch of edge i under tree t."""
        lengths = np.asarray(lengths, dtype=float)
        if self._paths is not None:
            dist = self._paths.astype(float) @ lengths
            return dist / lengths
        return np.array([tree_stretches(self.graph, t, lengths) for t in self.trees])

    def congestion_matrix(self, capacities: np.ndarray) -> np.ndarray:
        """Payoff matrix C[t, j] = congestion of edge j under tree t."""
        capacities = np.asarray(capacities, dtype=float)
        return np.array(
            [tree_congestions(self.graph, t, capacities) for t in self.trees])

    def best_stretch_response(self, alpha: np.ndarray,
                              lengths: np.ndarray) -> OracleResponse:
        objs = self.stretch_matrix(lengths) @ np.asarray(alpha, dtype=float)
        idx = int(np.argmin(objs))
        return OracleResponse(self.trees[idx], float(objs[idx]) / float(np.sum(alpha)),
                              method="exact")


class StretchResponder:
    """Reusable stretch oracle: call with (alpha, lengths) to get a response.

    Mode resolution happens once at construction (auto counts spanning trees);
    the exact path caches the enumerated ensemble across calls.
    """

    def __init__(self, g: WeightedMultigraph, config: OracleConfig = OracleConfig()):
        self.graph = g
        self.config = config
        mode = config.mode
        if mode == "auto":
            mode = ("exact"
                    if count_spanning_trees(g) <= config.enumeration_cap
                    else "heuristic")
        self.mode = mode
        self._ensemble = TreeEnsemble(g, config.enumeration_cap) if mode == "exact" else None

    def __call__(self, alpha: np.ndarray,
                 lengths: np.ndarray | None = None) -> OracleResponse:
        alpha = _check_alpha(alpha)
        if lengths is None:
            lengths = self.graph.lengths
        if self._ensemble is not None:
            return self._ensemble.best_stretch_response(alpha, lengths)
        return heuristic_stretch_oracle(self.graph, alpha, lengths, self.config)
