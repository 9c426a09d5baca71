"""Zero-sum-game view of probabilistic mappings and its solvers.

The row player picks a spanning tree, the column player picks an edge, and
the payoff is that edge's stretch (or congestion) under the tree's canonical
mapping.  An optimal mixed row strategy is exactly a probabilistic mapping of
minimal stretch (congestion).  Solvers:

  * lp_minimax        -- explicit LP over an enumerated tree set, solved by
                         dense simplex with a mandatory primal/dual
                         certificate (exact-rational retry on failure);
  * mwu_solve         -- multiplicative-weights iteration against a
                         delta-response oracle, with a provable regret bound;
  * transform_*       -- the weight substitution that turns capacity
                         instances into distance instances and back, which
                         also converts a stretch oracle into a congestion
                         oracle (congestion_oracle_from_stretch).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .graph import GraphInvariantError, SpanningTree, WeightedMultigraph
from .mapping import (
    ProbabilisticMapping,
    prob_congestion,
    prob_stretch,
    tree_congestions,
    tree_stretches,
)
from .oracle import (
    OracleConfig,
    OracleResponse,
    StretchResponder,
    count_spanning_trees,
    enumerate_spanning_trees,
)
from .simplex import SimplexError, simplex_max, simplex_max_exact

CERT_TOL = 1e-9
FLOOR_FACTOR = 1e-12


class LPCertificateError(RuntimeError):
    """The solver could not produce a certified optimal solution."""


class EnumerationCapError(RuntimeError):
    """Explicit LP was requested but the tree count exceeds the cap."""


@dataclass(frozen=True)
class GameMatrix:
    rows: tuple[SpanningTree, ...]
    cols: tuple[int, ...]
    payoff: np.ndarray

    def __post_init__(self):
        if self.payoff.shape != (len(self.rows), len(self.cols)):
            raise GraphInvariantError("payoff shape does not match labels")
        if (self.payoff < 0).any():
            raise GraphInvariantError("payoffs must be nonnegative")


@dataclass(frozen=True)
class MinimaxSolution:
    value: float
    row_strategy: np.ndarray
    col_certificate: np.ndarray


def build_stretch_game(g: WeightedMultigraph,
                       trees: list[SpanningTree]) -> GameMatrix:
    """Payoff A[t, j] = stretch of edge j under tree t, using g's lengths."""
    if not trees:
        raise GraphInvariantError("empty tree list")
    payoff = np.array([tree_stretches(g, t) for t in trees])
    return GameMatrix(tuple(trees), tuple(range(g.n_edges)), payoff)


def build_congestion_game(g: WeightedMultigraph,
                          trees: list[SpanningTree]) -> GameMatrix:
    """Payoff A[t, j] = congestion of edge j under tree t, using g's capacities."""
    if not trees:
        raise GraphInvariantError("empty tree list")
    payoff = np.array([tree_congestions(g, t) for t in trees])
    return GameMatrix(tuple(trees), tuple(range(g.n_edges)), payoff)


def _certificate_gap(a: np.ndarray, value: float, x: np.ndarray,
                     y: np.ndarray) -> float:
    """Worst violation of the optimality sandwich around `value`."""
    col_max = float((x @ a).max())
    row_min = float((a @ y).min())
    return max(col_max - value, value - row_min,
               abs(x.sum() - 1.0), abs(y.sum() - 1.0))


def lp_minimax(game: GameMatrix) -> MinimaxSolution:
    """Optimal mixed row strategy minimizing the maximum column payoff.

    The solution is accepted only with a primal/dual certificate: the
    returned strategy's worst column is at most value + 1e-9 and the dual
    column strategy forces at least value - 1e-9 against every row.  A
    float64 simplex runs first; if its certificate fails (badly scaled
    payoffs), the LP is re-solved in exact rational arithmetic.
    """
    a = game.payoff
    # shift so all payoffs are >= 1: optimal strategies are unchanged and
    # the game value becomes positive, enabling the 1/value LP normalization
    shift = max(0.0, 1.0 - float(a.min()))
    a_pos = a + shift
    rows, cols = a_pos.shape
    last_error: Exception | None = None
    for backend in (simplex_max, simplex_max_exact):
        try:
            u, w, total = backend(a_pos.T, np.ones(cols), np.ones(rows))
        except SimplexError as exc:
            last_error = exc
            continue
        if total <= 0 or u.sum() <= 0 or w.sum() <= 0:
            last_error = LPCertificateError("degenerate LP normalization")
            continue
        x = u / u.sum()
        y = w / w.sum()
        value = 1.0 / total - shift
        if _certificate_gap(a, value, x, y) <= CERT_TOL:
            return MinimaxSolution(value, x, y)
        last_error = LPCertificateError(
            f"certificate gap {_certificate_gap(a, value, x, y):.3e} exceeds {CERT_TOL}")
    raise LPCertificateError(f"lp_minimax failed: {last_error}")


def lp_joint_minimax(stretch_game: GameMatrix,
                     congestion_game: GameMatrix) -> MinimaxSolution:
    """Minimize the maximum over the union of stretch and congestion columns."""
    if len(stretch_game.rows) != len(congestion_game.rows) or any(
            s.tree_edges != c.tree_edges
            for s, c in zip(stretch_game.rows, congestion_game.rows)):
        raise GraphInvariantError("joint minimax needs identical row sets")
    joint = GameMatrix(
        stretch_game.rows,
        stretch_game.cols + congestion_game.cols,
        np.hstack([stretch_game.payoff, congestion_game.payoff]))
    return lp_minimax(joint)


def _check_transform_input(weights: np.ndarray, divisors: np.ndarray,
                           what: str) -> tuple[np.ndarray, np.ndarray]:
    weights = np.asarray(weights, dtype=float)
    divisors = np.asarray(divisors, dtype=float)
    if (divisors <= 0).any():
        raise GraphInvariantError(f"{what} must be strictly positive")
    if (weights < 0).any() or not (weights > 0).any():
        raise GraphInvariantError("weights must be nonnegative with a positive entry")
    return weights, divisors


def transform_cap_to_len(beta: np.ndarray,
                         capacities: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Capacity instance -> distance instance: alpha = beta, length = beta/capacity.

    Edges with beta == 0 get the floor length FLOOR_FACTOR * (smallest
    positive transformed length), keeping all lengths positive; they carry
    zero weight in alpha, so they perturb tree objectives by at most
    sum(capacities) * sum(floor lengths).
    """
    beta, capacities = _check_transform_input(beta, capacities, "capacities")
    pos = beta > 0
    lengths = np.where(pos, beta / capacities, 0.0)
    floor = FLOOR_FACTOR * lengths[pos].min()
    lengths[~pos] = floor
    return beta.copy(), lengths


def transform_len_to_cap(alpha: np.ndarray,
                         lengths: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Distance instance -> capacity instance: beta = alpha, capacity = alpha/length."""
    alpha, lengths = _check_transform_input(alpha, lengths, "lengths")
    pos = alpha > 0
    capacities = np.where(pos, alpha / lengths, 0.0)
    floor = FLOOR_FACTOR * capacities[pos].min()
    capacities[~pos] = floor
    return alpha.copy(), capacities


def congestion_oracle_from_stretch(
        oracle: Callable[[np.ndarray, np.ndarray], OracleResponse],
        capacities: np.ndarray) -> Callable[[np.ndarray], OracleResponse]:
    """Turn a stretch response oracle into a congestion response oracle.

    A query beta is rewritten through transform_cap_to_len and answered by
    the stretch oracle on the transformed instance; the same tree is returned
    with its true recomputed congestion objective.  For strictly positive
    beta the two objectives coincide identically; zero entries are blind
    spots of the transformed view (their capacity still loads other edges),
    which the recomputation makes honest.
    """
    capacities = np.asarray(capacities, dtype=float)

    def respond(beta: np.ndarray) -> OracleResponse:
        beta_arr = np.asarray(beta, dtype=float)
        alpha, lengths = transform_cap_to_len(beta_arr, capacities)
        inner = oracle(alpha, lengths)
        g = inner.tree.graph
        achieved = float(
            np.dot(beta_arr, tree_congestions(g, inner.tree, capacities))
            / beta_arr.sum())
        return OracleResponse(inner.tree, achieved, method=inner.method)

    return respond


@dataclass(frozen=True)
class ResponseOracle:
    """A delta-response oracle bundled with the metric its payoffs live in."""

    metric: str  # "stretch" | "congestion"
    respond: Callable[[np.ndarray], OracleResponse]
    payoffs: Callable[[SpanningTree], np.ndarray]


def stretch_response_oracle(g: WeightedMultigraph,
                            config: OracleConfig = OracleConfig()) -> ResponseOracle:
    responder = StretchResponder(g, config)
    return ResponseOracle(
        metric="stretch",
        respond=lambda alpha: responder(alpha, g.lengths),
        payoffs=lambda tree: tree_stretches(g, tree))


def congestion_response_oracle(g: WeightedMultigraph,
                               config: OracleConfig = OracleConfig()) -> ResponseOracle:
    responder = StretchResponder(g, config)
    return ResponseOracle(
        metric="congestion",
        respond=congestion_oracle_from_stretch(responder, g.capacities),
        payoffs=lambda tree: tree_congestions(g, tree))


@dataclass(frozen=True)
class MwuResult:
    distribution: ProbabilisticMapping
    deltas: np.ndarray
    regret_bound: float
    regret_bound_apriori: float
    payoff_bound: float
    payoff_bound_observed: float
    eta: float
    metric: str


def mwu_solve(g: WeightedMultigraph, oracle: ResponseOracle, rounds: int,
              eta: float | str = "auto", seed: int = 0) -> MwuResult:
    """Multiplicative-weights solve against a delta-response oracle.

    The edge player runs exponential weights over the m edges: round t plays
    p_t proportional to the weights, the oracle answers with tree T_t and
    achieved value delta_t = <p_t, payoffs(T_t)>, and each weight is
    multiplied by exp(eta * payoff / W) with W an a-priori payoff bound.  The
    output distribution is uniform over T_1..T_T (duplicates merged).

    The returned regret bound uses the observed per-round payoff ranges r_t:
        bound = (W ln m / eta + eta / (8 W) * sum_t r_t^2) / rounds,
    which is a theorem for this update rule; with eta = sqrt(8 ln m / rounds)
    and worst-case ranges it reduces to the a-priori form W sqrt(ln m / 2T).
    The guarantee  overall metric <= mean(delta_t) + bound  is asserted on
    the result before returning.

    `seed` only matters for oracles that sample candidate trees; all oracles
    shipped here take their seed from OracleConfig, so runs are deterministic
    given (config, rounds, eta).
    """
    if rounds < 1:
        raise GraphInvariantError("rounds must be >= 1")
    m = g.n_edges
    per_edge = g.lengths if oracle.metric == "stretch" else g.capacities
    payoff_bound = float(per_edge.sum() / per_edge.min())
    if eta == "auto":
        eta_val = math.sqrt(8.0 * math.log(m) / rounds) if m > 1 else 0.0
    else:
        eta_val = float(eta)
        if eta_val <= 0 and m > 1:
            raise GraphInvariantError("eta must be positive")
    weights = np.ones(m)
    deltas = np.empty(rounds)
    trees: list[SpanningTree] = []
    range_sq_sum = 0.0
    observed = 0.0
    for t in range(rounds):
        p = weights / weights.sum()
        resp = oracle.respond(p)
        payoffs = oracle.payoffs(resp.tree)
        delta = float(np.dot(p, payoffs))
        if abs(delta - resp.achieved) > 1e-9 * max(1.0, abs(delta)):
            raise LPCertificateError(
                f"oracle achieved value {resp.achieved!r} does not match "
                f"recomputed objective {delta!r}")
        deltas[t] = delta
        trees.append(resp.tree)
        observed = max(observed, float(payoffs.max()))
        range_sq_sum += float(payoffs.max() - payoffs.min()) ** 2
        if eta_val > 0:
            weights = weights * np.exp(eta_val * payoffs / payoff_bound)
            weights = weights / weights.max()  # overflow guard only
    if eta_val > 0:
        regret_bound = (payoff_bound * math.log(m) / eta_val
                        + eta_val * range_sq_sum / (8.0 * payoff_bound)) / rounds
    else:
        regret_bound = 0.0
    apriori = (payoff_bound * math.sqrt(math.log(m) / (2.0 * rounds))
               if m > 1 else 0.0)
    dist = ProbabilisticMapping(
        tuple((tree, 1.0 / rounds) for tree in trees)).merged()
    metric_fn = prob_stretch if oracle.metric == "stretch" else prob_congestion
    _, overall = metric_fn(dist)
    if overall > deltas.mean() + regret_bound + 1e-9:
        raise LPCertificateError(
            f"regret guarantee violated: {overall} > "
            f"{deltas.mean()} + {regret_bound}")
    return MwuResult(dist, deltas, regret_bound, apriori,
                     payoff_bound, observed, eta_val, oracle.metric)


def prune_support(pm: ProbabilisticMapping, mode: str,
                  g: WeightedMultigraph) -> ProbabilisticMapping:
    """Re-optimize weights over the support via a restricted LP.

    The basic optimal solution has at most m nonzero weights (one per game
    column), so the pruned support has size <= m + 1, and its overall metric
    never exceeds the input's.
    """
    if mode not in ("stretch", "congestion"):
        raise GraphInvariantError(f"unknown mode {mode!r}")
    merged = pm.merged()
    trees = [tree for tree, _w in merged.support]
    build = build_stretch_game if mode == "stretch" else build_congestion_game
    metric_fn = prob_stretch if mode == "stretch" else prob_congestion
    sol = lp_minimax(build(g, trees))
    keep = sol.row_strategy > 1e-12
    weights = sol.row_strategy[keep]
    weights = weights / weights.sum()
    pruned = ProbabilisticMapping(
        tuple((t, float(w)) for t, w in zip(
            (t for t, k in zip(trees, keep) if k), weights)))
    _, before = metric_fn(pm)
    _, after = metric_fn(pruned)
    if after > before + 1e-9:
        raise LPCertificateError(
            f"pruning increased the metric: {after} > {before}")
    if len(pruned.support) > g.n_edges + 1:
        raise LPCertificateError("pruned support exceeds m + 1 trees")
    return pruned


@dataclass(frozen=True)
class SolverParams:
    method: str = "auto"        # lp | mwu | auto
    rounds: int = 1000
    eta: float | str = "auto"
    seed: int = 0
    cap: int = 100_000
    prune: bool = False
    heuristic_roots: int | None = None


@dataclass(frozen=True)
class SolveOutcome:
    distribution: ProbabilisticMapping
    value: float
    method: str
    lp_solution: MinimaxSolution | None = None
    mwu_result: MwuResult | None = None


def solve_distribution(g: WeightedMultigraph, metric: str,
                       params: SolverParams = SolverParams()) -> SolveOutcome:
    """Find a low-stretch or low-congestion distribution over spanning trees.

    method "lp" solves the explicit minimax LP over all spanning trees (the
    count must fit under params.cap); "mwu" runs the multiplicative-weights
    loop against the appropriate response oracle; "auto" picks "lp" exactly
    when the tree count fits.
    """
    if metric not in ("stretch", "congestion"):
        raise GraphInvariantError(f"unknown metric {metric!r}")
    method = params.method
    if method not in ("lp", "mwu", "auto"):
        raise GraphInvariantError(f"unknown method {method!r}")
    if method == "auto":
        method = "lp" if count_spanning_trees(g) <= params.cap else "mwu"
    if method == "lp":
        if count_spanning_trees(g) > params.cap:
            raise EnumerationCapError(
                f"spanning tree count exceeds cap {params.cap}; use method mwu")
        trees = enumerate_spanning_trees(g, params.cap)
        build = build_stretch_game if metric == "stretch" else build_congestion_game
        sol = lp_minimax(build(g, trees))
        keep = sol.row_strategy > 1e-12
        weights = sol.row_strategy[keep]
        weights = weights / weights.sum()
        dist = ProbabilisticMapping(
            tuple((t, float(w)) for t, w in zip(
                (t for t, k in zip(trees, keep) if k), weights)))
        return SolveOutcome(dist, sol.value, "lp", lp_solution=sol)
    config = OracleConfig(mode="auto", enumeration_cap=params.cap,
                          heuristic_roots=params.heuristic_roots,
                          seed=params.seed)
    factory = (stretch_response_oracle if metric == "stretch"
               else congestion_response_oracle)
    result = mwu_solve(g, factory(g, config), params.rounds,
                       eta=params.eta, seed=params.seed)
    dist = result.distribution
    if params.prune:
        dist = prune_support(dist, metric, g)
    metric_fn = prob_stretch if metric == "stretch" else prob_congestion
    _, value = metric_fn(dist)
    return SolveOutcome(dist, value, "mwu", mwu_result=result)
