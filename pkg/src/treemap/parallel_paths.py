"""The sqrt(n)-parallel-paths family: the showcase instance for this library.

Two terminals s and t are joined by sqrt(n) vertex-disjoint paths of sqrt(n)
edges each, plus the direct edge (s, t) -- n + 1 edges total.  On this family
a distribution tuned for stretch and one tuned for congestion both achieve a
constant bound (3), yet under unit weights no single distribution does well
on both at once: the joint optimum is at least sqrt(n)/2, and the uniform
distribution over all spanning trees keeps the direct edge with probability
exactly 1/2 while being poor for both metrics.

The stretch-tuned distribution keeps the shortest s-t path whole and deletes
one edge from every other path with probability proportional to its length;
its support is exponential, so its per-edge average stretches are evaluated
in closed form rather than materialized.  The congestion-tuned distribution
drops every path's minimum-capacity edge except one, kept with probability
proportional to its capacity: a support of sqrt(n) + 1 trees.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .graph import GraphInvariantError, SpanningTree, WeightedMultigraph
from .mapping import ProbabilisticMapping


@dataclass(frozen=True)
class ParallelPathsInstance:
    graph: WeightedMultigraph
    paths: tuple[tuple[int, ...], ...]  # per path, edge ids from s to t
    direct_edge: int

    @property
    def all_routes(self) -> tuple[tuple[int, ...], ...]:
        """The paths plus the direct edge viewed as a one-edge path."""
        return ((self.direct_edge,),) + self.paths


def parallel_paths_graph(n: int, lengths=None,
                         capacities=None) -> ParallelPathsInstance:
    """Build the family member with parameter n (sqrt(n) must be integral).

    Vertices: s = 0, t = 1, then sqrt(n) - 1 interior vertices per path.
    Edge 0 is the direct edge; path edges follow in s-to-t order.
    """
    k = math.isqrt(n)
    if k * k != n or k < 1:
        raise GraphInvariantError(f"n = {n} is not a perfect square")
    m = n + 1
    if lengths is None:
        lengths = np.ones(m)
    if capacities is None:
        capacities = np.ones(m)
    if len(lengths) != m or len(capacities) != m:
        raise GraphInvariantError(f"need {m} per-edge weights")
    edges = [(0, 1, float(lengths[0]), float(capacities[0]))]
    paths = []
    next_vertex = 2
    eid = 1
    for _p in range(k):
        path = []
        prev = 0
        for step in range(k):
            cur = 1 if step == k - 1 else next_vertex
            if step != k - 1:
                next_vertex += 1
            edges.append((prev, cur, float(lengths[eid]), float(capacities[eid])))
            path.append(eid)
            eid += 1
            prev = cur
        paths.append(tuple(path))
    g = WeightedMultigraph(next_vertex, edges)
    return ParallelPathsInstance(g, tuple(paths), 0)


def _shortest_route(inst: ParallelPathsInstance) -> tuple[int, ...]:
    lengths = inst.graph.lengths
    routes = inst.all_routes
    totals = [sum(lengths[e] for e in r) for r in routes]
    return routes[int(np.argmin(totals))]


def stretch_distribution_expectation(
        inst: ParallelPathsInstance) -> tuple[np.ndarray, float]:
    """Per-edge average stretches of the stretch-tuned distribution, in closed form.

    The shortest route P is kept whole (stretch 1 on its edges).  An edge of
    length l on another route of total length L survives with probability
    (L - l)/L (stretch 1) and is otherwise rerouted over the rest of its own
    route plus P, giving average  ((L - l) + (L - l + |P|)) / L  <= 3.
    """
    lengths = inst.graph.lengths
    keep = _shortest_route(inst)
    keep_set = set(keep)
    lp = sum(lengths[e] for e in keep)
    out = np.empty(inst.graph.n_edges)
    for route in inst.all_routes:
        total = sum(lengths[e] for e in route)
        for e in route:
            if e in keep_set:
                out[e] = 1.0
            else:
                rest = total - lengths[e]
                out[e] = (rest + (rest + lp)) / total
    return out, float(out.max())


def stretch_distribution_support(inst: ParallelPathsInstance,
                                 max_support: int = 100_000) -> ProbabilisticMapping:
    """Materialized stretch-tuned distribution (small n only).

    One spanning tree per choice of a deleted edge on every non-shortest
    route, weighted by the product of length-proportional deletion odds.
    """
    g = inst.graph
    lengths = g.lengths
    keep = _shortest_route(inst)
    others = [r for r in inst.all_routes if r != keep]
    count = 1
    for r in others:
        count *= len(r)
    if count > max_support:
        raise GraphInvariantError(
            f"stretch support has {count} trees, above {max_support}")
    all_edges = frozenset(range(g.n_edges))
    support = []
    for deletion in itertools.product(*others):
        weight = 1.0
        for e, route in zip(deletion, others):
            weight *= lengths[e] / sum(lengths[x] for x in route)
        support.append((SpanningTree(g, all_edges - frozenset(deletion)), weight))
    return ProbabilisticMapping(tuple(support))


def congestion_distribution(inst: ParallelPathsInstance) -> ProbabilisticMapping:
    """Congestion-tuned distribution: sqrt(n) + 1 trees.

    Every route's minimum-capacity edge (smallest id on ties) is dropped,
    except on one route kept whole, chosen with probability proportional to
    that minimum capacity.
    """
    g = inst.graph
    caps = g.capacities
    weak = [min(route, key=lambda e: (caps[e], e)) for route in inst.all_routes]
    weak_caps = np.array([caps[e] for e in weak])
    total = float(weak_caps.sum())
    all_edges = frozenset(range(g.n_edges))
    support = []
    for kept_idx, kept_edge in enumerate(weak):
        removed = frozenset(e for i, e in enumerate(weak) if i != kept_idx)
        tree = SpanningTree(g, all_edges - removed)
        support.append((tree, float(weak_caps[kept_idx]) / total))
    return ProbabilisticMapping(tuple(support))
