"""Command-line frontend: solve, bisect, dual, paper.

Results go to --out (or standard output); diagnostics go to standard error,
controlled by the TREEMAP_LOG environment variable (debug | info).  Numbers
are printed with 10 significant digits.  The exit code is 0 exactly when all
internal verification (LP certificates, Euler checks, duality identities,
bound checks) passed.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys

import numpy as np

from .bisection import min_bisection_approx
from .game import (
    EnumerationCapError,
    SolverParams,
    build_congestion_game,
    build_stretch_game,
    lp_joint_minimax,
    solve_distribution,
)
from .graph import load_graph
from .mapping import (
    ProbabilisticMapping,
    format_distribution,
    load_distribution,
    prob_congestion,
    prob_stretch,
)
from .oracle import count_spanning_trees, enumerate_spanning_trees
from .parallel_paths import (
    congestion_distribution,
    parallel_paths_graph,
    stretch_distribution_expectation,
)
from .planar import check_corollary, check_duality, load_rotation

log = logging.getLogger("treemap")


def fmt(x: float) -> str:
    return format(float(x), ".10g")


def _setup_logging() -> None:
    level = {"debug": logging.DEBUG, "info": logging.INFO}.get(
        os.environ.get("TREEMAP_LOG", "").lower(), logging.WARNING)
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(levelname)s %(name)s: %(message)s")


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _params(args: argparse.Namespace) -> SolverParams:
    eta = args.eta if args.eta == "auto" else float(args.eta)
    return SolverParams(method=getattr(args, "method", "auto"),
                        rounds=args.rounds, eta=eta, seed=args.seed,
                        cap=args.cap, prune=args.prune)


def cmd_solve(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    outcome = solve_distribution(g, args.metric, _params(args))
    lines = []
    if outcome.mwu_result is not None:
        res = outcome.mwu_result
        for t, delta in enumerate(res.deltas):
            lines.append(f"round {t} {fmt(delta)}")
        lines.append(f"value {fmt(outcome.value)}")
        lines.append(f"regret_bound {fmt(res.regret_bound)}")
        lines.append(f"regret_bound_apriori {fmt(res.regret_bound_apriori)}")
    else:
        lines.append(f"value {fmt(outcome.value)}")
    text = "\n".join(lines) + "\n" + format_distribution(outcome.distribution)
    _emit(text, args.out)
    log.info("solve %s %s: value %s", args.metric, outcome.method,
             fmt(outcome.value))
    return 0


def cmd_bisect(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    result = min_bisection_approx(g, _params(args))
    lines = [f"bisection {fmt(result.best.width_in_g)}"]
    for v, side in enumerate(result.best.side_of):
        lines.append(f"side {v} {side}")
    lines.append(f"certificate {fmt(result.certificate)}")
    _emit("\n".join(lines) + "\n", args.out)
    log.info("bisect: width %s, certificate %s",
             fmt(result.best.width_in_g), fmt(result.certificate))
    return 0


def cmd_dual(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    rot = load_rotation(args.rotation, g)
    if args.dist:
        pm = load_distribution(args.dist, g)
        trees = [tree for tree, _w in pm.support]
    else:
        trees = enumerate_spanning_trees(g, args.cap)
        pm = ProbabilisticMapping(
            tuple((t, 1.0 / len(trees)) for t in trees))
    lines = []
    all_ok = True
    for tree in trees:
        report = check_duality(g, rot, tree)
        all_ok = all_ok and report.ok
        lines.append("tree " + " ".join(str(i) for i in sorted(tree.tree_edges)))
        for entry in report.entries:
            lines.append(f"edge {entry.edge_id} {fmt(entry.primal_stretch)} "
                         f"{fmt(entry.dual_congestion)}")
    corollary = check_corollary(g, rot, pm)
    all_ok = all_ok and corollary.ok
    lines.append(f"corollary stretch {fmt(corollary.primal_stretch)} "
                 f"dual_congestion {fmt(corollary.dual_congestion)}")
    lines.append(f"corollary congestion {fmt(corollary.primal_congestion)} "
                 f"dual_stretch {fmt(corollary.dual_stretch)}")
    lines.append("pass" if all_ok else "fail")
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if all_ok else 1


def cmd_paper(args: argparse.Namespace) -> int:
    """Reproduce the parallel-paths showcase: bounds, joint LP, tree counting."""
    inst = parallel_paths_graph(args.n)
    g = inst.graph
    k = math.isqrt(args.n)
    lines = [f"instance n {args.n} vertices {g.n_vertices} edges {g.n_edges}"]
    checks = []

    _, stretch_overall = stretch_distribution_expectation(inst)
    checks.append(("stretch_bound", stretch_overall <= 3.0 + 1e-9))
    lines.append(f"stretch_construction {fmt(stretch_overall)}")

    cong_pm = congestion_distribution(inst)
    _, cong_overall = prob_congestion(cong_pm)
    checks.append(("congestion_bound", cong_overall <= 3.0 + 1e-9))
    lines.append(f"congestion_construction {fmt(cong_overall)}")

    total = count_spanning_trees(g)
    lines.append(f"tree_count {total}")
    if total <= args.cap:
        trees = enumerate_spanning_trees(g, args.cap)
        with_direct = sum(1 for t in trees if inst.direct_edge in t.tree_edges)
        freq = with_direct / total
        lines.append(f"st_edge_membership {with_direct} {total} {fmt(freq)}")
        checks.append(("membership_half", 2 * with_direct == total))
        if args.n == 16:
            joint = lp_joint_minimax(build_stretch_game(g, trees),
                                     build_congestion_game(g, trees))
            lines.append(f"joint_lp_value {fmt(joint.value)}")
            checks.append(("joint_lower_bound", joint.value >= k / 2.0 - 1e-9))
    else:
        lines.append(f"st_edge_membership skipped (count {total} above cap)")

    all_ok = all(ok for _name, ok in checks)
    for name, ok in checks:
        lines.append(f"{name} {'pass' if ok else 'fail'}")
    lines.append("pass" if all_ok else "fail")
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treemap",
        description="Probabilistic mappings of graph edges into spanning trees")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, graph_required: bool = True):
        if graph_required:
            p.add_argument("--graph", required=True, help="graph file path")
        p.add_argument("--rounds", type=int, default=1000,
                       help="multiplicative-weights rounds")
        p.add_argument("--eta", default="auto", help="learning rate or 'auto'")
        p.add_argument("--seed", type=int, default=0, help="oracle sampling seed")
        p.add_argument("--cap", type=int, default=100_000,
                       help="max spanning trees for exact enumeration")
        p.add_argument("--prune", action="store_true",
                       help="re-optimize the support by a restricted LP")
        p.add_argument("--out", default=None, help="output file (default stdout)")

    p_solve = sub.add_parser("solve", help="solve for an optimal distribution")
    p_solve.add_argument("--metric", choices=["stretch", "congestion"],
                         required=True)
    p_solve.add_argument("--method", choices=["lp", "mwu", "auto"], default="auto")
    common(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_bisect = sub.add_parser("bisect", help="approximate a minimum bisection")
    common(p_bisect)
    p_bisect.set_defaults(func=cmd_bisect)

    p_dual = sub.add_parser("dual", help="check planar stretch/congestion duality")
    p_dual.add_argument("--rotation", required=True, help="rotation file path")
    p_dual.add_argument("--dist", default=None,
                        help="distribution file (default: uniform over all trees)")
    common(p_dual)
    p_dual.set_defaults(func=cmd_dual)

    p_paper = sub.add_parser(
        "paper", help="reproduce the parallel-paths worked example")
    p_paper.add_argument("--n", type=int, default=16,
                         help="instance parameter (perfect square)")
    common(p_paper, graph_required=False)
    p_paper.set_defaults(func=cmd_paper)
    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EnumerationCapError as exc:
        print(f"treemap: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        if os.environ.get("TREEMAP_LOG", "").lower() == "debug":
            raise
        print(f"treemap: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
