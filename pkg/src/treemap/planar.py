"""Combinatorial planar embeddings, dual graphs, and stretch/congestion duality.

An embedding is a rotation system: a cyclic order of incident edge-ends at
every vertex.  Edge-ends ("darts") are pairs (edge_id, end) where end 0 sits
at the edge's first endpoint and end 1 at its second; parallel edges thus
stay distinguishable.  Faces are traced with the convention: arriving at a
vertex along dart x, leave along the dart after x in that vertex's cyclic
order.  A rotation is accepted as planar when V - E + F = 2.

The dual graph has one vertex per face and one edge per primal edge joining
the two faces it separates; a primal spanning tree's complement is a dual
spanning tree.  Dual weights swap roles twice over: capacity(e*) = length(e)
and length(e*) = capacity(e), so the dual of the dual restores the weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import (
    GraphFormatError,
    GraphInvariantError,
    SpanningTree,
    WeightedMultigraph,
    is_connected,
)
from .mapping import (
    ProbabilisticMapping,
    prob_congestion,
    prob_stretch,
    tree_congestions,
    tree_stretches,
)

Dart = tuple[int, int]  # (edge_id, end); end 0 at edge.u, end 1 at edge.v

IDENTITY_TOL = 1e-12


class PlanarityError(ValueError):
    """Rotation system is malformed, non-planar, or the graph has a cut edge."""


@dataclass(frozen=True)
class RotationSystem:
    """Cyclic order of incident edge-ends per vertex."""

    rotations: tuple[tuple[Dart, ...], ...]

    def validate(self, g: WeightedMultigraph) -> None:
        if len(self.rotations) != g.n_vertices:
            raise PlanarityError("rotation must list every vertex")
        seen: set[Dart] = set()
        for v, cyc in enumerate(self.rotations):
            for dart in cyc:
                eid, end = dart
                if not (0 <= eid < g.n_edges) or end not in (0, 1):
                    raise PlanarityError(f"vertex {v}: invalid edge-end {dart}")
                if dart in seen:
                    raise PlanarityError(f"edge-end {dart} listed twice")
                e = g.edges[eid]
                home = e.u if end == 0 else e.v
                if home != v:
                    raise PlanarityError(
                        f"edge-end {dart} belongs at vertex {home}, not {v}")
                seen.add(dart)
        if len(seen) != 2 * g.n_edges:
            raise PlanarityError("rotation is missing edge-ends")


def trace_faces(g: WeightedMultigraph, rot: RotationSystem) -> list[list[Dart]]:
    """Orbits of the face permutation; each edge-end lies on exactly one walk.

    Walks are reported as cyclic sequences of arrival edge-ends, each orbit
    starting from its lexicographically smallest dart, orbits sorted by that
    dart (deterministic output).
    """
    rot.validate(g)
    nxt: dict[Dart, Dart] = {}
    for cyc in rot.rotations:
        k = len(cyc)
        for i, dart in enumerate(cyc):
            nxt[dart] = cyc[(i + 1) % k]
    faces: list[list[Dart]] = []
    visited: set[Dart] = set()
    for eid in range(g.n_edges):
        for end in (0, 1):
            start = (eid, end)
            if start in visited:
                continue
            walk = []
            dart = start
            while True:
                walk.append(dart)
                visited.add(dart)
                leave = nxt[dart]
                dart = (leave[0], 1 - leave[1])  # arrive at the other end
                if dart == start:
                    break
                if dart in visited:
                    raise PlanarityError("face walk re-entered a visited edge-end")
            faces.append(walk)
    return faces


def _find_bridges(g: WeightedMultigraph) -> list[int]:
    """Edge ids whose removal disconnects the graph (DFS lowlink)."""
    adj = g.adjacency()
    disc = [-1] * g.n_vertices
    low = [0] * g.n_vertices
    bridges: list[int] = []
    timer = 0
    for root in range(g.n_vertices):
        if disc[root] >= 0:
            continue
        stack = [(root, -1, iter(adj[root]))]
        disc[root] = low[root] = timer
        timer += 1
        while stack:
            v, pe, it = stack[-1]
            advanced = False
            for w, eid in it:
                if eid == pe:
                    continue
                if disc[w] < 0:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, eid, iter(adj[w])))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if not advanced:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] > disc[u]:
                        bridges.append(pe)
    return bridges


@dataclass(frozen=True)
class DualGraph:
    dual: WeightedMultigraph
    edge_bijection: tuple[int, ...]  # primal edge id -> dual edge id
    rotation: RotationSystem
    faces: tuple[tuple[Dart, ...], ...]
    face_of: dict[Dart, int] = field(repr=False)


def build_dual(g: WeightedMultigraph, rot: RotationSystem) -> DualGraph:
    """Dual multigraph of a 2-edge-connected planar embedded graph.

    Dual vertices are the faces; primal edge e becomes dual edge e* joining
    the faces on its two sides, with capacity(e*) = length(e) and
    length(e*) = capacity(e).  The dual inherits the embedding in which each
    face's rotation is its traced walk, so taking the dual twice restores the
    primal rotation exactly.
    """
    if not is_connected(g):
        raise PlanarityError("graph is disconnected")
    bridges = _find_bridges(g)
    if bridges:
        raise PlanarityError(
            f"cut edge {min(bridges)} would become a dual self-loop")
    faces = trace_faces(g, rot)
    euler = g.n_vertices - g.n_edges + len(faces)
    if euler != 2:
        raise PlanarityError(
            f"rotation is not planar: V - E + F = {euler}, expected 2")
    face_of: dict[Dart, int] = {}
    for fi, walk in enumerate(faces):
        for dart in walk:
            face_of[dart] = fi
    dual_edges = []
    for eid, e in enumerate(g.edges):
        fu = face_of[(eid, 0)]
        fv = face_of[(eid, 1)]
        if fu == fv:
            raise PlanarityError(f"edge {eid} borders one face (cut edge?)")
        dual_edges.append((fu, fv, e.capacity, e.length))
    dual = WeightedMultigraph(len(faces), dual_edges)
    rotations = tuple(tuple(walk) for walk in faces)
    return DualGraph(dual, tuple(range(g.n_edges)),
                     RotationSystem(rotations), rotations, face_of)


def dual_spanning_tree(g: WeightedMultigraph, dualg: DualGraph,
                       t: SpanningTree) -> SpanningTree:
    """Dual images of the primal non-tree edges; always a dual spanning tree."""
    if t.graph is not g:
        raise GraphInvariantError("tree does not belong to this graph")
    complement = frozenset(dualg.edge_bijection[eid]
                           for eid in range(g.n_edges)
                           if eid not in t.tree_edges)
    return SpanningTree(dualg.dual, complement)


@dataclass(frozen=True)
class EdgeDuality:
    edge_id: int
    in_tree: bool
    primal_stretch: float
    dual_congestion: float
    ok: bool


@dataclass(frozen=True)
class DualityReport:
    entries: tuple[EdgeDuality, ...]
    ok: bool


def check_duality(g: WeightedMultigraph, rot: RotationSystem,
                  t: SpanningTree) -> DualityReport:
    """Per-edge identity between primal stretch and dual congestion.

    With capacity(e*) = length(e): a non-tree edge's dual congestion equals
    its primal stretch plus one (the dual load is the fundamental cycle's
    total length); a tree edge has primal stretch 1 and dual congestion 0.
    """
    dualg = build_dual(g, rot)
    dual_tree = dual_spanning_tree(g, dualg, t)
    stretches = tree_stretches(g, t)
    congestions = tree_congestions(dualg.dual, dual_tree)
    entries = []
    all_ok = True
    for eid in range(g.n_edges):
        s = float(stretches[eid])
        c = float(congestions[dualg.edge_bijection[eid]])
        if eid in t.tree_edges:
            ok = s == 1.0 and c == 0.0
        else:
            ok = abs(c - (s + 1.0)) <= IDENTITY_TOL * max(1.0, abs(c))
        all_ok = all_ok and ok
        entries.append(EdgeDuality(eid, eid in t.tree_edges, s, c, ok))
    return DualityReport(tuple(entries), all_ok)


@dataclass(frozen=True)
class CorollaryReport:
    primal_stretch: float
    dual_congestion: float
    primal_congestion: float
    dual_stretch: float
    ok: bool


def check_corollary(g: WeightedMultigraph, rot: RotationSystem,
                    pm: ProbabilisticMapping) -> CorollaryReport:
    """Transport a distribution to the dual and check both +1 bounds.

    The transported distribution keeps each tree's weight on its dual tree.
    Checked: dual congestion <= primal stretch + 1, and (swapping roles)
    dual stretch <= primal congestion + 1.
    """
    if pm.graph is not g:
        raise GraphInvariantError("distribution does not belong to this graph")
    dualg = build_dual(g, rot)
    transported = ProbabilisticMapping(
        tuple((dual_spanning_tree(g, dualg, tree), w) for tree, w in pm.support))
    _, primal_stretch = prob_stretch(pm)
    _, dual_congestion = prob_congestion(transported)
    _, primal_congestion = prob_congestion(pm)
    _, dual_stretch = prob_stretch(transported)
    ok = (dual_congestion <= primal_stretch + 1.0 + 1e-9
          and dual_stretch <= primal_congestion + 1.0 + 1e-9)
    return CorollaryReport(float(primal_stretch), float(dual_congestion),
                           float(primal_congestion), float(dual_stretch), ok)


def load_rotation(path: str, g: WeightedMultigraph) -> RotationSystem:
    """Parse a rotation file: one line per vertex, 'rot <v> <edge_id>:<end> ...'."""
    rows: dict[int, tuple[Dart, ...]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if parts[0] != "rot" or len(parts) < 2:
                raise GraphFormatError(f"{path}:{lineno}: expected 'rot <v> ...'")
            try:
                v = int(parts[1])
                darts = []
                for tok in parts[2:]:
                    eid_s, end_s = tok.split(":")
                    darts.append((int(eid_s), int(end_s)))
            except ValueError:
                raise GraphFormatError(f"{path}:{lineno}: malformed edge-end") from None
            if v in rows:
                raise GraphFormatError(f"{path}:{lineno}: duplicate vertex {v}")
            rows[v] = tuple(darts)
    rotations = tuple(rows.get(v, ()) for v in range(g.n_vertices))
    rot = RotationSystem(rotations)
    rot.validate(g)
    return rot


def format_rotation(rot: RotationSystem) -> str:
    lines = []
    for v, cyc in enumerate(rot.rotations):
        toks = " ".join(f"{eid}:{end}" for eid, end in cyc)
        lines.append(f"rot {v} {toks}".rstrip())
    return "\n".join(lines) + "\n"


def save_rotation(rot: RotationSystem, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_rotation(rot))
