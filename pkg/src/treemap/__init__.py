"""Probabilistic mappings of graph edges into spanning trees.

Library surface: weighted multigraphs and spanning trees (graph), canonical
tree mappings with stretch/congestion metrics (mapping), the minimax game
view with LP and multiplicative-weights solvers (game), spanning-tree
enumeration and response oracles (oracle), min-bisection approximation
(bisection), planar duals and the stretch/congestion correspondence
(planar), and the parallel-paths showcase family (parallel_paths).
"""

from .graph import (
    Edge,
    GraphFormatError,
    GraphInvariantError,
    SpanningTree,
    WeightedMultigraph,
    is_connected,
    load_graph,
    minimum_spanning_tree,
    save_graph,
    shortest_path_tree,
)
from .mapping import (
    Mapping,
    ProbabilisticMapping,
    canonical_mapping,
    dist_of_edge,
    load_distribution,
    load_of_edge,
    prob_congestion,
    prob_stretch,
    save_distribution,
    tree_congestions,
    tree_stretches,
    weighted_congestion_objective,
    weighted_stretch_objective,
)
from .oracle import (
    EnumerationOverflowError,
    OracleConfig,
    OracleResponse,
    StretchResponder,
    auto_oracle,
    count_spanning_trees,
    enumerate_spanning_trees,
    exact_stretch_oracle,
    heuristic_stretch_oracle,
)
from .game import (
    EnumerationCapError,
    GameMatrix,
    LPCertificateError,
    MinimaxSolution,
    MwuResult,
    ResponseOracle,
    SolverParams,
    build_congestion_game,
    build_stretch_game,
    congestion_oracle_from_stretch,
    congestion_response_oracle,
    lp_joint_minimax,
    lp_minimax,
    mwu_solve,
    prune_support,
    solve_distribution,
    stretch_response_oracle,
    transform_cap_to_len,
    transform_len_to_cap,
)
from .bisection import (
    Bisection,
    TreeLoads,
    brute_force_bisection,
    compute_tree_loads,
    induced_width,
    make_bisection,
    min_bisection_approx,
    tree_bisection_dp,
)
from .planar import (
    DualGraph,
    PlanarityError,
    RotationSystem,
    build_dual,
    check_corollary,
    check_duality,
    dual_spanning_tree,
    load_rotation,
    save_rotation,
    trace_faces,
)
from .parallel_paths import (
    ParallelPathsInstance,
    congestion_distribution,
    parallel_paths_graph,
    stretch_distribution_expectation,
    stretch_distribution_support,
)

__version__ = "0.1.0"
