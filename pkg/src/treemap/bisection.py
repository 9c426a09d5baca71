"""Min-bisection approximation through spanning-tree loads and tree DP.

A bisection splits the vertices into two equal halves; its width is the total
capacity of the edges it cuts.  For a spanning tree T, the load of a tree
edge is the capacity crossing the two components of T minus that edge.  Any
bisection's true width is dominated by the sum of loads of the tree edges it
cuts, so an optimal tree bisection (computed exactly by dynamic programming
on subtree sizes) yields a certified approximation: solve for a
low-congestion distribution over spanning trees, bisect every support tree,
and keep the candidate of smallest true width.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .graph import GraphInvariantError, SpanningTree, WeightedMultigraph, is_connected
from .mapping import ProbabilisticMapping, prob_congestion
from .game import SolverParams, SolveOutcome, solve_distribution

_INF = float("inf")


@dataclass(frozen=True)
class Bisection:
    side_of: tuple[int, ...]
    width_in_g: float

    def __post_init__(self):
        n = len(self.side_of)
        ones = sum(self.side_of)
        if any(s not in (0, 1) for s in self.side_of):
            raise GraphInvariantError("labels must be 0 or 1")
        if n % 2 or ones != n // 2:
            raise GraphInvariantError(
                f"bisection must split {n} vertices into equal halves")


@dataclass(frozen=True)
class TreeLoads:
    tree: SpanningTree = field(repr=False)
    load_per_tree_edge: dict[int, float]


def induced_width(g: WeightedMultigraph, labels) -> float:
    """Total capacity of g-edges cut by a balanced 0/1 vertex labeling."""
    side = list(getattr(labels, "side_of", labels))
    if len(side) != g.n_vertices:
        raise GraphInvariantError("one label per vertex required")
    if sum(side) * 2 != g.n_vertices or any(s not in (0, 1) for s in side):
        raise GraphInvariantError("labels do not form a balanced bisection")
    return float(sum(e.capacity for e in g.edges if side[e.u] != side[e.v]))


def make_bisection(g: WeightedMultigraph, labels) -> Bisection:
    return Bisection(tuple(int(s) for s in labels), induced_width(g, labels))


def compute_tree_loads(g: WeightedMultigraph, t: SpanningTree) -> TreeLoads:
    """load(e) for each tree edge e: capacity crossing the split of t - e.

    Every g-edge contributes its capacity to every tree edge on the tree path
    between its endpoints (a tree edge's own path is itself).
    """
    if t.graph is not g:
        raise GraphInvariantError("tree does not belong to this graph")
    parent, parent_edge, depth, order = t.rooted(0)
    diff = np.zeros(g.n_vertices)
    for e in g.edges:
        a, b = e.u, e.v
        while a != b:
            if depth[a] < depth[b]:
                a, b = b, a
            a = parent[a]
        diff[e.u] += e.capacity
        diff[e.v] += e.capacity
        diff[a] -= 2.0 * e.capacity
    for v in reversed(order):
        if parent[v] >= 0:
            diff[parent[v]] += diff[v]
    loads = {parent_edge[v]: float(diff[v]) for v in order if parent_edge[v] >= 0}
    return TreeLoads(t, loads)


def tree_bisection_dp(t: SpanningTree, loads: TreeLoads,
                      n: int) -> tuple[frozenset[int], tuple[int, ...], float]:
    """Optimal bisection of the tree under per-tree-edge loads.

    Minimizes the total load of cut tree edges over all balanced labelings.
    State: dp[v][k] = cheapest labeling of subtree(v) putting exactly k of
    its vertices on v's own side; children merge knapsack-style (keeping the
    edge shares the side, cutting it flips the child subtree and pays the
    load).  The root's side is fixed, which is harmless by label symmetry.
    Returns (cut tree edges, labels with root on side 0, minimal load sum).
    """
    if n != t.graph.n_vertices:
        raise GraphInvariantError("vertex count does not match the tree's graph")
    if n % 2:
        raise GraphInvariantError("bisection needs an even number of vertices")
    parent, parent_edge, _depth, order = t.rooted(0)
    children: list[list[int]] = [[] for _ in range(n)]
    for v in order[1:]:
        children[parent[v]].append(v)

    size = [1] * n
    dp: list[list[float]] = [[] for _ in range(n)]
    # per vertex: one backpointer table per merged child, mapping the k after
    # the merge to (k before, child k, edge cut?)
    back: list[list[dict[int, tuple[int, int, bool]]]] = [[] for _ in range(n)]
    for v in reversed(order):
        table = [_INF, 0.0]  # k = 1: v alone on its own side
        for c in children[v]:
            load = loads.load_per_tree_edge[parent_edge[c]]
            merged = [_INF] * (size[v] + size[c] + 1)
            choice: dict[int, tuple[int, int, bool]] = {}
            for k in range(1, size[v] + 1):
                if table[k] == _INF:
                    continue
                for j in range(1, size[c] + 1):
                    if dp[c][j] == _INF:
                        continue
                    keep_cost = table[k] + dp[c][j]
                    if keep_cost < merged[k + j]:
                        merged[k + j] = keep_cost
                        choice[k + j] = (k, j, False)
                    cut_cost = table[k] + dp[c][j] + load
                    kk = k + size[c] - j
                    if cut_cost < merged[kk]:
                        merged[kk] = cut_cost
                        choice[kk] = (k, j, True)
            table = merged
            back[v].append(choice)
            size[v] += size[c]
        dp[v] = table

    target = n // 2
    best = dp[0][target]
    cut: set[int] = set()
    stack = [(0, target)]
    while stack:
        v, k = stack.pop()
        for idx in range(len(children[v]) - 1, -1, -1):
            c = children[v][idx]
            k_prev, j, was_cut = back[v][idx][k]
            if was_cut:
                cut.add(parent_edge[c])
            stack.append((c, j))
            k = k_prev
    # the cut set determines the labeling: flip sides across cut edges
    labels = [0] * n
    for v in order[1:]:
        flip = parent_edge[v] in cut
        labels[v] = 1 - labels[parent[v]] if flip else labels[parent[v]]
    return frozenset(cut), tuple(labels), float(best)


def brute_force_bisection(g: WeightedMultigraph) -> tuple[Bisection, float]:
    """Exact minimum bisection by enumerating balanced partitions (n <= 16)."""
    n = g.n_vertices
    if n % 2:
        raise GraphInvariantError("bisection needs an even number of vertices")
    if n > 16:
        raise GraphInvariantError("brute force is limited to n <= 16")
    best_labels = None
    best_width = None
    for rest in itertools.combinations(range(1, n), n // 2 - 1):
        side0 = {0, *rest}
        width = sum(e.capacity for e in g.edges if (e.u in side0) != (e.v in side0))
        if best_width is None or width < best_width:
            best_width = width
            best_labels = tuple(0 if v in side0 else 1 for v in range(n))
    bis = Bisection(best_labels, float(best_width))
    return bis, float(best_width)


@dataclass(frozen=True)
class PerTreeBisection:
    tree: SpanningTree = field(repr=False)
    cut_tree_edges: frozenset[int]
    bisection: Bisection
    tree_width: float


@dataclass(frozen=True)
class MinBisectionResult:
    best: Bisection
    per_tree: tuple[PerTreeBisection, ...]
    certificate: float
    distribution: ProbabilisticMapping
    solve: SolveOutcome


def min_bisection_approx(g: WeightedMultigraph,
                         params: SolverParams = SolverParams()) -> MinBisectionResult:
    """Three-step approximation: low-congestion distribution, per-tree DP, best width.

    The certificate is the achieved overall congestion delta of the
    distribution actually used; the returned width is at most delta times the
    optimal bisection width.
    """
    if g.n_vertices % 2:
        raise GraphInvariantError("bisection needs an even number of vertices")
    if not is_connected(g):
        raise GraphInvariantError("graph is disconnected")
    outcome = solve_distribution(g, "congestion", params)
    _, certificate = prob_congestion(outcome.distribution)
    per_tree = []
    best = None
    for tree, _w in outcome.distribution.support:
        loads = compute_tree_loads(g, tree)
        cut, labels, tree_width = tree_bisection_dp(tree, loads, g.n_vertices)
        bis = make_bisection(g, labels)
        per_tree.append(PerTreeBisection(tree, cut, bis, tree_width))
        if best is None or bis.width_in_g < best.width_in_g:
            best = bis
    return MinBisectionResult(best, tuple(per_tree), float(certificate),
                              outcome.distribution, outcome)
