"""
Command-line interface: generate, design, estimate, simulate, benchmark.

Exit codes: 0 success, 2 invalid input or parameters, 3 missing data,
4 degenerate design.
"""

import argparse
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .engine.assignment_rules import assign_constant, assign_cr, assign_threshold
from .engine.benchmark import benchmark_suite
from .engine.edge_list import load_edge_list_file, save_edge_list
from .engine.estimators import (
    bias_bound_direct,
    correlation,
    estimand_tag,
    population_variance,
    predicted_var_spillover,
    predicted_var_total,
    summarize_estimate,
)
from .engine.generators import generate
from .engine.independent_set import exposure, greedy_independent_set, interference_matrix, is_size_ratio
from .engine.optimizer import optimize_direct, optimize_variance
from .engine.replication import run_replications
from .structures.assignment import OptimizerOptions
from .structures.model import DesignName, DesignSpec, Estimand, GraphFamily, GraphSpec, OutcomeModel, UnitShift
from .structures.report import ESTIMATE_CSV_COLUMNS, REPORT_CSV_COLUMNS
from .utils.config import load_config, parse_config
from .utils.errors import DataError, DegenerateDesignError, IsDesignError, ParameterError, SchemaError
from .utils.logger import ExperimentEventType, get_logger, set_log_level
from .utils.output import header_lines, read_csv, write_csv, write_rows
from .utils.rng import child_seed, stream

DESIGN_COLUMNS = ["vertex_id", "role", "z", "rho"]
OUTCOME_COLUMNS = ["vertex_id", "y"]


def _common_options(seed_default: Optional[int] = 0) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    seed_help = "the config's seed" if seed_default is None else str(seed_default)
    common.add_argument(
        "--seed", type=int, default=seed_default, help=f"Master seed for every random stream (default: {seed_help})"
    )
    common.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        default="WARNING",
        help="Set logging level (default: WARNING)",
    )
    common.add_argument("--log-dir", type=str, help="Also write event, performance and summary logs here")
    return common


def _graph_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", choices=[f.value for f in GraphFamily], help="Random graph family")
    parser.add_argument("--n", type=int, help="Number of vertices")
    parser.add_argument("--p", type=float, help="Edge (er) or rewiring (sw) probability")
    parser.add_argument("--m", type=int, help="Edges per new vertex (ba)")
    parser.add_argument("--k", type=int, default=4, help="Ring degree (sw, default: 4)")


def _design_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--estimand", choices=[e.value for e in Estimand], required=True)
    parser.add_argument("--rho-target", type=float, help="Target exposure (direct estimand only)")
    parser.add_argument("--own-treatment", type=int, choices=[0, 1], default=1, help="z of the spillover effect")
    parser.add_argument("--restarts", type=int, default=20, help="Local-search restarts (default: 20)")
    parser.add_argument("--max-iters", type=int, help="Flip limit per restart (default: 10 * n_A)")
    parser.add_argument("--exact-threshold", type=int, default=16, help="Enumerate when n_A <= this (default: 16)")
    parser.add_argument("--min-degree-first", action="store_true", help="Greedy order by ascending degree")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isdesign",
        description="Independent-set experimental designs under network interference",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  isdesign generate --family er --n 100 --p 0.1 --seed 1 --out g.edges
  isdesign design --graph g.edges --estimand direct --rho-target 0.5 --out design.csv
  isdesign estimate --design design.csv --outcomes y.csv --lipschitz 10
  isdesign simulate --family er --n 100 --p 0.1 --design-name IS --estimand spillover --reps 200
  isdesign benchmark --config configs/spillover_grid.json --out results/
        """,
    )
    parser.add_argument("--version", action="version", version=f"isdesign {__version__}")
    common = _common_options()
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("generate", parents=[common], help="Generate a random graph edge list")
    _graph_options(gen)
    gen.add_argument("--out", type=str, required=True, help="Edge list output path")

    design = commands.add_parser("design", parents=[common], help="Partition a graph and optimize assignments")
    design.add_argument("--graph", type=str, required=True, help="Edge list input path")
    design.add_argument("--one-based", action="store_true", help="Vertex ids in the edge list start at 1")
    _design_options(design)
    design.add_argument("--sigma", type=float, help="Noise sd for the predicted-variance diagnostic")
    design.add_argument("--lipschitz", type=float, help="Lipschitz constant for the direct-effect bias bound")
    design.add_argument("--out", type=str, help="Design CSV path (default: stdout)")

    estimate = commands.add_parser("estimate", parents=[common], help="Estimate an effect from observed outcomes")
    estimate.add_argument("--design", type=str, required=True, help="Design CSV written by the design command")
    estimate.add_argument("--outcomes", type=str, required=True, help="CSV with columns vertex_id,y")
    estimate.add_argument("--sigma", type=float, help="Noise sd for the predicted variance")
    estimate.add_argument("--lipschitz", type=float, help="Lipschitz constant for the direct-effect bias bound")
    estimate.add_argument("--out", type=str, help="Estimate CSV path (default: stdout)")

    simulate = commands.add_parser("simulate", parents=[common], help="Monte-Carlo run of one design")
    _graph_options(simulate)
    simulate.add_argument("--graph", type=str, help="Fixed edge list instead of a generated graph per replication")
    simulate.add_argument("--one-based", action="store_true", help="Vertex ids in --graph start at 1")
    simulate.add_argument("--design-name", choices=[d.value for d in DesignName], default=DesignName.IS.value)
    _design_options(simulate)
    simulate.add_argument("--reps", type=int, default=200, help="Replications (default: 200)")
    simulate.add_argument("--graphs", type=int, help="Distinct graphs (default: one per replication)")
    simulate.add_argument("--alpha", type=float, default=1.0)
    simulate.add_argument("--beta", type=float, default=20.0)
    simulate.add_argument("--gamma", type=float, default=10.0)
    simulate.add_argument("--sigma", type=float, default=0.5, help="Noise sd (default: 0.5)")
    simulate.add_argument("--unit-shift", choices=[u.value for u in UnitShift], default=UnitShift.NONE.value)
    simulate.add_argument("--threads", type=int, default=1)
    simulate.add_argument("--out", type=str, help="Report CSV path (default: stdout)")

    bench = commands.add_parser(
        "benchmark", parents=[_common_options(seed_default=None)], help="Run every cell of a benchmark config"
    )
    bench.add_argument("--config", type=str, required=True, help="Benchmark config (JSON)")
    bench.add_argument("--out", type=str, required=True, help="Output directory")
    bench.add_argument("--reps", type=int, help="Override the config's replication count")
    bench.add_argument("--threads", type=int, help="Override the config's worker threads")
    return parser


def _graph_spec(args: argparse.Namespace) -> GraphSpec:
    if args.family is None or args.n is None:
        raise SchemaError("family", "--family and --n are required unless --graph is given")
    return GraphSpec(family=GraphFamily(args.family), n=args.n, p=args.p, m=args.m, k=args.k)


def _design_spec(args: argparse.Namespace, name: DesignName) -> DesignSpec:
    spec = DesignSpec(
        name=name,
        estimand=Estimand(args.estimand),
        optimizer=OptimizerOptions(
            restarts=args.restarts,
            max_iters=args.max_iters,
            seed=args.seed,
            exact_threshold=args.exact_threshold,
        ),
        rho_target=args.rho_target,
        own_treatment=args.own_treatment,
        min_degree_first=args.min_degree_first,
    )
    spec.validate()
    return spec


def cmd_generate(args: argparse.Namespace) -> int:
    spec = _graph_spec(args)
    g = generate(spec.family, spec.n, args.seed, p=spec.p, m=spec.m, k=spec.k)
    path = Path(args.out)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as sink:
        header: Dict[str, object] = {
            "isdesign": __version__,
            "command": "generate",
            "family": spec.family.value,
            "params": spec.params_text,
            "seed": args.seed,
        }
        save_edge_list(g, sink, header)
    get_logger().log_event(ExperimentEventType.FILE_WRITTEN, f"Wrote {path}")
    print(f"n={g.n} edges={g.edge_count} mean_degree={g.mean_degree():.4f}")
    return 0


def cmd_design(args: argparse.Namespace) -> int:
    """Partition, optimize Z_A, assign Z_I and write the design table."""
    spec = _design_spec(args, DesignName.IS)
    g = load_edge_list_file(args.graph, one_based=args.one_based)
    partition = greedy_independent_set(g, stream(args.seed, "partition", 0), spec.min_degree_first)
    gamma = interference_matrix(g, partition)
    opts = OptimizerOptions(
        restarts=spec.optimizer.restarts,
        max_iters=spec.optimizer.max_iters,
        seed=child_seed(args.seed, "optimizer", 0),
        exact_threshold=spec.optimizer.exact_threshold,
    )

    if spec.estimand is Estimand.DIRECT:
        result = optimize_direct(gamma, spec.rho_target, opts)
    else:
        result = optimize_variance(gamma, opts)
    rho = exposure(gamma, result.assignment)

    # withheld: odd unit out of a balanced direct design, or isolated units for the regression
    withheld = np.zeros(partition.n_independent, dtype=bool)
    if spec.estimand is Estimand.DIRECT:
        rng = stream(args.seed, "assignment", 0)
        if partition.n_independent % 2:
            withheld[rng.integers(partition.n_independent)] = True
        kept = np.flatnonzero(~withheld)
        z_kept = assign_cr(len(kept), rng).to_array()
    else:
        withheld = gamma.isolated.copy()
        kept = np.flatnonzero(~withheld)
        if spec.estimand is Estimand.SPILLOVER:
            z_kept = assign_constant(len(kept), spec.own_treatment).to_array()
        else:
            z_kept = assign_threshold(rho[kept]).to_array()
    z_independent = np.zeros(partition.n_independent, dtype=np.int64)
    z_independent[kept] = z_kept

    offset = 1 if args.one_based else 0
    rows: List[List[str]] = []
    for i, v in enumerate(partition.independent):
        role = "withheld" if withheld[i] else "independent"
        rows.append([str(v + offset), role, "" if withheld[i] else str(z_independent[i]), repr(float(rho[i]))])
    for j, v in enumerate(partition.auxiliary):
        rows.append([str(v + offset), "auxiliary", str(result.assignment.bits[j]), ""])
    rows.sort(key=lambda row: int(row[0]))

    ratio = is_size_ratio(g, partition)
    diagnostics: Dict[str, object] = {
        "diag.n_independent": partition.n_independent,
        "diag.n_auxiliary": partition.n_auxiliary,
        "diag.fraction": f"{ratio['fraction']:.6f}",
        "diag.size_bound": f"{ratio['bound']:.6f}" if "bound" in ratio else "n/a",
        "diag.objective": repr(float(result.objective)),
        "diag.exact": result.exact,
        "diag.restarts": result.restarts,
        "diag.flips": result.flips,
        "diag.var_rho": repr(population_variance(rho[kept])) if len(kept) else "0.0",
    }
    if spec.estimand is Estimand.DIRECT:
        diagnostics["diag.norm_delta"] = repr(float(np.abs(rho - spec.rho_target).sum()))
    if spec.estimand is Estimand.TOTAL:
        diagnostics["diag.corr_z_rho"] = correlation(z_kept, rho[kept])
    diagnostics.update(_closed_form_diagnostics(args, spec, z_kept, rho[kept]))

    header = header_lines(
        "design",
        graph=args.graph,
        one_based=args.one_based,
        estimand=spec.estimand.value,
        rho_target="" if spec.rho_target is None else spec.rho_target,
        own_treatment=spec.own_treatment,
        restarts=spec.optimizer.restarts,
        max_iters="" if spec.optimizer.max_iters is None else spec.optimizer.max_iters,
        exact_threshold=spec.optimizer.exact_threshold,
        min_degree_first=spec.min_degree_first,
        sigma="" if args.sigma is None else args.sigma,
        lipschitz="" if args.lipschitz is None else args.lipschitz,
        seed=args.seed,
        **diagnostics,
    )
    _emit(args.out, header, DESIGN_COLUMNS, rows)
    if args.out:
        for key, value in diagnostics.items():
            print(f"{key[len('diag.'):]}: {value}")
    return 0


def _closed_form_diagnostics(
    args: argparse.Namespace, spec: DesignSpec, z_kept: np.ndarray, rho_kept: np.ndarray
) -> Dict[str, object]:
    """Bias bound (direct, needs --lipschitz) or predicted variance (spillover / total, needs --sigma)."""
    diagnostics: Dict[str, object] = {}
    try:
        if spec.estimand is Estimand.DIRECT:
            if args.lipschitz is not None:
                bound = bias_bound_direct(args.lipschitz, rho_kept - spec.rho_target, len(rho_kept))
                diagnostics["diag.bias_bound"] = repr(float(bound))
        elif args.sigma is not None:
            if spec.estimand is Estimand.SPILLOVER:
                variance = predicted_var_spillover(args.sigma, rho_kept)
            else:
                variance = predicted_var_total(args.sigma, z_kept, rho_kept).variance
            diagnostics["diag.predicted_variance"] = repr(float(variance))
    except DegenerateDesignError as exc:
        get_logger().warning(f"Closed-form diagnostic undefined: {exc}")
        key = "diag.bias_bound" if spec.estimand is Estimand.DIRECT else "diag.predicted_variance"
        diagnostics[key] = "undefined"
    return diagnostics


def _read_design(path: str) -> Tuple[Dict[str, str], List[Dict[str, str]]]:
    header, rows = read_csv(path)
    for key in ("estimand", "rho_target", "own_treatment"):
        if key not in header:
            raise SchemaError(key, f"missing from the header of {path}")
    units = [row for row in rows if row["role"] == "independent"]
    return header, units


def _read_outcomes(path: str) -> Dict[int, float]:
    _, rows = read_csv(path)
    outcomes: Dict[int, float] = {}
    for row in rows:
        try:
            outcomes[int(row["vertex_id"])] = float(row["y"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"bad outcome row {row} in {path}") from exc
    return outcomes


def cmd_estimate(args: argparse.Namespace) -> int:
    header, units = _read_design(args.design)
    outcomes = _read_outcomes(args.outcomes)
    ids = [int(row["vertex_id"]) for row in units]
    missing = [v for v in ids if v not in outcomes]
    if missing:
        raise DataError("outcomes missing for independent-set units", missing)

    estimand = Estimand(header["estimand"])
    rho_target = float(header["rho_target"]) if header["rho_target"] else None
    own_treatment = int(header["own_treatment"])
    summary = summarize_estimate(
        estimand,
        [int(row["z"]) for row in units],
        [float(row["rho"]) for row in units],
        [outcomes[v] for v in ids],
        sigma=args.sigma,
        lipschitz=args.lipschitz,
        rho_target=rho_target,
        own_treatment=own_treatment,
    )
    lines = header_lines(
        "estimate",
        design=args.design,
        outcomes=args.outcomes,
        sigma="" if args.sigma is None else args.sigma,
        lipschitz="" if args.lipschitz is None else args.lipschitz,
        seed=args.seed,
    )
    _emit(args.out, lines, ESTIMATE_CSV_COLUMNS, [summary.csv_row()])
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    name = DesignName(args.design_name)
    spec = _design_spec(args, name)
    source = load_edge_list_file(args.graph, one_based=args.one_based) if args.graph else _graph_spec(args)
    model = OutcomeModel(
        alpha=args.alpha,
        beta=args.beta,
        gamma=args.gamma,
        sigma=args.sigma,
        unit_shift=UnitShift(args.unit_shift),
        seed=args.seed,
    )
    report = run_replications(source, spec, model, args.reps, args.seed, graphs=args.graphs, threads=args.threads)
    header = header_lines(
        "simulate",
        graph=args.graph if args.graph else f"{report.graph} {report.params}",
        design=name.value,
        estimand=estimand_tag(spec.estimand, spec.rho_target, spec.own_treatment),
        model=report.model,
        reps=args.reps,
        graphs="" if args.graphs is None else args.graphs,
        restarts=spec.optimizer.restarts,
        exact_threshold=spec.optimizer.exact_threshold,
        seed=args.seed,
    )
    _emit(args.out, header, REPORT_CSV_COLUMNS, [report.csv_row()])
    return 0


def cmd_benchmark(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    overrides = {
        key: value
        for key, value in (("reps", args.reps), ("threads", args.threads), ("seed", args.seed))
        if value is not None
    }
    if overrides:
        config = parse_config({**config.model_dump(mode="json"), **overrides})
    result = benchmark_suite(config, args.out)
    for path in result.files:
        print(path)
    for reason in result.skipped:
        print(f"skipped: {reason}", file=sys.stderr)
    return 0


def _emit(out: Optional[str], header: Sequence[str], columns: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    if out:
        write_csv(out, header, columns, rows)
    else:
        write_rows(sys.stdout, header, columns, rows)


COMMANDS = {
    "generate": cmd_generate,
    "design": cmd_design,
    "estimate": cmd_estimate,
    "simulate": cmd_simulate,
    "benchmark": cmd_benchmark,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    set_log_level(args.log_level, args.log_dir)
    logger = get_logger()
    logger.debug(f"Arguments: {vars(args)}")

    try:
        if args.seed is not None and args.seed < 0:
            raise ParameterError(f"--seed {args.seed} must be >= 0")
        return COMMANDS[args.command](args)
    except IsDesignError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        logger.error(f"I/O error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
