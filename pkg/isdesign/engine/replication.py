"""
Monte-Carlo replication engine.

A run is split into graphs and replications. Every graph index gets one design
context (graph, partition, interference matrix and, for IS, the optimized
auxiliary assignment); replication ``r`` uses graph ``r % graph_count`` and
draws its own assignment and outcome streams from ``(master_seed, r)``.
Results are collected by replication index, so the worker count never
changes the report.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar, Union

import numpy as np

from ..structures.graph import Graph
from ..structures.model import DesignName, DesignSpec, Estimand, GraphSpec, OutcomeModel, UnitShift
from ..structures.partition import InterferenceMatrix, Partition
from ..structures.report import SimulationReport
from ..utils.errors import IsDesignError, ParameterError
from ..utils.logger import ExperimentEventType, get_logger
from ..utils.rng import child_seed, stream
from .assignment_rules import (
    EXPOSURE_THRESHOLD,
    assign_constant,
    assign_cr,
    assign_threshold,
    baseline_ego_clusters,
    baseline_full_cr,
    baseline_graph_cluster,
)
from .estimators import (
    arm_mean_difference,
    diff_in_means,
    estimand_tag,
    ols_fit,
    population_variance,
    predicted_var_spillover,
    predicted_var_total,
    spillover_estimate,
    total_estimate,
)
from .generators import generate
from .independent_set import exposure, full_exposure, greedy_independent_set, interference_matrix
from .optimizer import optimize_direct, optimize_variance
from .outcomes import sample_outcomes, true_effects

GraphSource = Union[Graph, GraphSpec]
T = TypeVar("T")

UNIFORM_SHIFT_VARIANCE = 1.0 / 12.0


@dataclass
class DesignContext:
    """Everything a replication needs that is fixed per graph."""

    graph_index: int
    graph: Graph
    partition: Partition
    gamma: InterferenceMatrix
    z_auxiliary: Optional[np.ndarray] = None
    rho_independent: Optional[np.ndarray] = None
    objective: Optional[float] = None


@dataclass
class ReplicationOutcome:
    estimate: float
    norm_delta: float
    var_rho: float
    predicted_variance: Optional[float] = None


def graph_count(source: GraphSource, reps: int, graphs: Optional[int]) -> int:
    """Fixed graph -> 1; generator with graphs=None -> a fresh graph per replication."""
    if isinstance(source, Graph):
        return 1
    if graphs is None:
        return reps
    if graphs < 1:
        raise ParameterError(f"graphs={graphs} must be >= 1")
    return min(graphs, reps)


def build_graph(source: GraphSource, master_seed: int, graph_index: int) -> Graph:
    if isinstance(source, Graph):
        return source
    return generate(
        source.family,
        source.n,
        child_seed(master_seed, "graph", graph_index),
        p=source.p,
        m=source.m,
        k=source.k,
    )


def build_context(source: GraphSource, design: DesignSpec, master_seed: int, graph_index: int) -> DesignContext:
    """
    Graph, partition and interference matrix for one graph index.

    The partition only depends on (master_seed, graph_index), so every design
    run against the same seed sees the same independent set.
    """
    graph = build_graph(source, master_seed, graph_index)
    partition = greedy_independent_set(
        graph, stream(master_seed, "partition", graph_index), design.min_degree_first
    )
    gamma = interference_matrix(graph, partition)
    context = DesignContext(graph_index, graph, partition, gamma)

    if design.name is DesignName.IS:
        opts = replace(design.optimizer, seed=child_seed(master_seed, "optimizer", graph_index))
        if design.estimand is Estimand.DIRECT:
            result = optimize_direct(gamma, design.rho_target, opts)
        else:
            result = optimize_variance(gamma, opts)
        context.z_auxiliary = result.assignment.to_array()
        context.rho_independent = exposure(gamma, result.assignment)
        context.objective = result.objective

    get_logger().log_event(
        ExperimentEventType.DESIGN_BUILT,
        f"{design.label}/{design.estimand.value} on graph {graph_index}",
        n_independent=partition.n_independent,
        objective=context.objective,
    )
    return context


def _noise_sd(model: OutcomeModel) -> float:
    """Standard deviation of everything the regression cannot explain."""
    variance = model.sigma**2
    if model.unit_shift is UnitShift.UNIFORM:
        variance += UNIFORM_SHIFT_VARIANCE
    return float(np.sqrt(variance))


def _independent_set_replication(
    context: DesignContext, design: DesignSpec, model: OutcomeModel, master_seed: int, rep: int
) -> ReplicationOutcome:
    rho = context.rho_independent
    outcome_rng = stream(master_seed, "outcome", rep)

    if design.estimand is Estimand.DIRECT:
        assignment_rng = stream(master_seed, "assignment", rep)
        units = np.arange(len(rho))
        if len(units) % 2:
            units = np.delete(units, assignment_rng.integers(len(units)))
        z = assign_cr(len(units), assignment_rng).to_array()
        y = sample_outcomes(model, z, rho[units], outcome_rng)
        return ReplicationOutcome(
            estimate=diff_in_means(y, z),
            norm_delta=float(np.abs(rho - design.rho_target).sum()),
            var_rho=population_variance(rho),
        )

    used = rho[~context.gamma.isolated]
    if design.estimand is Estimand.SPILLOVER:
        z = assign_constant(len(used), design.own_treatment).to_array()
        y = sample_outcomes(model, z, used, outcome_rng)
        estimate = spillover_estimate(ols_fit(z, used, y))
        predicted = predicted_var_spillover(_noise_sd(model), used)
    else:
        z = assign_threshold(used).to_array()
        y = sample_outcomes(model, z, used, outcome_rng)
        estimate = total_estimate(ols_fit(z, used, y))
        predicted = predicted_var_total(_noise_sd(model), z, used).variance
    return ReplicationOutcome(estimate, 0.0, population_variance(used), predicted)


def _ego_cluster_replication(
    context: DesignContext, design: DesignSpec, model: OutcomeModel, master_seed: int, rep: int
) -> ReplicationOutcome:
    """
    Egos are the measured units. Every alter of an ego shares its cluster coin, so
    an ego's exposure is 0 or 1 and the effect is a difference of ego means by
    exposure. For the spillover effect the egos are held at ``own_treatment``.
    """
    graph = context.graph
    held = design.own_treatment if design.estimand is Estimand.SPILLOVER else None
    egos, assignment = baseline_ego_clusters(graph, stream(master_seed, "assignment", rep), ego_treatment=held)
    z_all = assignment.to_array()
    rho_all = full_exposure(graph, z_all)

    units = np.asarray(egos, dtype=np.int64)
    units = units[graph.degrees()[units] > 0]
    z, rho = z_all[units], rho_all[units]
    y = sample_outcomes(model, z, rho, stream(master_seed, "outcome", rep))
    exposed = (rho > EXPOSURE_THRESHOLD).astype(np.int64)
    return ReplicationOutcome(arm_mean_difference(y, exposed), 0.0, population_variance(rho))


def _baseline_replication(
    context: DesignContext, design: DesignSpec, model: OutcomeModel, master_seed: int, rep: int
) -> ReplicationOutcome:
    graph = context.graph
    assignment_rng = stream(master_seed, "assignment", rep)
    if design.name in (DesignName.CR, DesignName.FULL):
        z_all = baseline_full_cr(graph, assignment_rng).to_array()
    else:
        z_all = baseline_graph_cluster(graph, assignment_rng).to_array()
    rho_all = full_exposure(graph, z_all)

    if design.name is DesignName.CR:
        units = np.asarray(context.partition.independent, dtype=np.int64)
    else:
        units = np.arange(graph.n)
    if design.estimand is not Estimand.DIRECT:
        units = units[graph.degrees()[units] > 0]

    z, rho = z_all[units], rho_all[units]
    y = sample_outcomes(model, z, rho, stream(master_seed, "outcome", rep))
    if design.estimand is Estimand.DIRECT:
        return ReplicationOutcome(
            estimate=arm_mean_difference(y, z),
            norm_delta=float(np.abs(rho - design.rho_target).sum()),
            var_rho=population_variance(rho),
        )
    fit = ols_fit(z, rho, y)
    estimate = spillover_estimate(fit) if design.estimand is Estimand.SPILLOVER else total_estimate(fit)
    return ReplicationOutcome(estimate, 0.0, population_variance(rho))


def run_replication(
    context: DesignContext, design: DesignSpec, model: OutcomeModel, master_seed: int, rep: int
) -> ReplicationOutcome:
    """One replication on a prepared design context."""
    if design.name is DesignName.IS:
        return _independent_set_replication(context, design, model, master_seed, rep)
    if design.name is DesignName.EGO_CLUSTERS:
        return _ego_cluster_replication(context, design, model, master_seed, rep)
    return _baseline_replication(context, design, model, master_seed, rep)


def _parallel_map(func: Callable[[int], T], items: Sequence[int], threads: int) -> List[T]:
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def _batches(count: int, size: int) -> Iterable[range]:
    for start in range(0, count, size):
        yield range(start, min(start + size, count))


def run_replications(
    source: GraphSource,
    design: DesignSpec,
    model: OutcomeModel,
    reps: int,
    master_seed: int,
    graphs: Optional[int] = None,
    threads: int = 1,
) -> SimulationReport:
    """
    Run ``reps`` replications of one design and aggregate them.

    Args:
        source: A fixed graph, or a generator spec (a new graph per graph index)
        design: Design and estimand
        model: Outcome model; its coefficients define the true effects
        reps: Number of replications (>= 2)
        master_seed: Root of every random stream in the run
        graphs: Number of distinct graphs for a generator spec; None -> one per replication
        threads: Worker threads

    Returns:
        SimulationReport; degenerate replications are counted in ``failures``
    """
    design.validate()
    model.validate()
    if reps < 2:
        raise ParameterError(f"reps={reps} must be >= 2")
    if threads < 1:
        raise ParameterError(f"threads={threads} must be >= 1")

    logger = get_logger()
    count = graph_count(source, reps, graphs)
    outcomes: List[Optional[ReplicationOutcome]] = [None] * reps

    def replicate(context: DesignContext, rep: int) -> Optional[ReplicationOutcome]:
        started = time.perf_counter()
        try:
            return run_replication(context, design, model, master_seed, rep)
        except IsDesignError as exc:
            logger.log_event(
                ExperimentEventType.REPLICATION_FAILED,
                f"{design.label}/{design.estimand.value} replication {rep}: {exc}",
            )
            return None
        finally:
            logger.log_performance("replication_time", time.perf_counter() - started)

    # Contexts are built batch by batch so fresh-graph runs never hold every graph at once.
    for batch in _batches(count, max(8, 4 * threads)):
        contexts = _parallel_map(lambda gi: build_context(source, design, master_seed, gi), list(batch), threads)
        by_index = {context.graph_index: context for context in contexts}
        rep_indices = [r for gi in batch for r in range(gi, reps, count)]
        results = _parallel_map(lambda r: replicate(by_index[r % count], r), rep_indices, threads)
        for rep, result in zip(rep_indices, results):
            outcomes[rep] = result

    return _aggregate(source, design, model, reps, master_seed, outcomes)


def _aggregate(
    source: GraphSource,
    design: DesignSpec,
    model: OutcomeModel,
    reps: int,
    master_seed: int,
    outcomes: Sequence[Optional[ReplicationOutcome]],
) -> SimulationReport:
    effects = true_effects(model)
    truth = {
        Estimand.DIRECT: effects.direct,
        Estimand.SPILLOVER: effects.spillover,
        Estimand.TOTAL: effects.total,
    }[design.estimand]

    if isinstance(source, Graph):
        graph_label, params = "graph", f"n={source.n} edges={source.edge_count}"
    else:
        graph_label, params = source.label, source.params_text

    report = SimulationReport(
        graph=graph_label,
        params=params,
        design=design.label,
        estimand=estimand_tag(design.estimand, design.rho_target, design.own_treatment),
        true_effect=truth,
        reps=reps,
        master_seed=master_seed,
        model={
            "alpha": model.alpha,
            "beta": model.beta,
            "gamma": model.gamma,
            "sigma": model.sigma,
            "unit_shift": model.unit_shift.value,
        },
    )

    succeeded = [outcome for outcome in outcomes if outcome is not None]
    report.failures = reps - len(succeeded)
    if not succeeded:
        get_logger().warning(f"{design.label}/{design.estimand.value}: every replication failed")
        return report

    estimates = np.array([outcome.estimate for outcome in succeeded])
    report.estimates = estimates.tolist()
    report.mean_estimate = float(estimates.mean())
    report.bias = abs(report.mean_estimate - truth)
    report.mae = float(np.abs(estimates - truth).mean())
    report.variance = float(estimates.var(ddof=1)) if len(estimates) > 1 else float("nan")
    report.mean_norm_delta = float(np.mean([outcome.norm_delta for outcome in succeeded]))
    report.mean_var_rho = float(np.mean([outcome.var_rho for outcome in succeeded]))
    predicted = [outcome.predicted_variance for outcome in succeeded if outcome.predicted_variance is not None]
    report.mean_predicted_variance = float(np.mean(predicted)) if predicted else None
    return report
