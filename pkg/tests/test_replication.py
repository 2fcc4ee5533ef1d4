"""Tests for outcome generation and the Monte-Carlo replication engine."""

import numpy as np
import pytest

from isdesign.engine.estimators import bias_bound_direct
from isdesign.engine.outcomes import sample_outcomes, true_effects
from isdesign.engine.replication import build_context, graph_count, run_replications
from isdesign.structures import (
    DesignName,
    DesignSpec,
    Estimand,
    Graph,
    GraphFamily,
    GraphSpec,
    OptimizerOptions,
    OutcomeModel,
    UnitShift,
)
from isdesign.utils.errors import DimensionError, ParameterError, SchemaError

FAST = OptimizerOptions(restarts=5)
ER40 = GraphSpec(GraphFamily.ERDOS_RENYI, 40, p=0.15)


def design(name, estimand, rho_target=None, **kwargs):
    if estimand is Estimand.DIRECT and rho_target is None:
        rho_target = 0.5
    return DesignSpec(name, estimand, optimizer=FAST, rho_target=rho_target, **kwargs)


def test_true_effects():
    assert tuple(true_effects(OutcomeModel())) == (20.0, 10.0, 30.0)
    assert true_effects(OutcomeModel(beta=-2.0, gamma=0.5)).total == pytest.approx(-1.5)


def test_sample_outcomes_noiseless():
    model = OutcomeModel(alpha=1, beta=20, gamma=10, sigma=0.0)
    y = sample_outcomes(model, [1, 0, 1], [0.0, 0.5, 1.0], rep_seed=3)
    assert y.tolist() == [21.0, 6.0, 31.0]


def test_sample_outcomes_uniform_shift_and_noise():
    model = OutcomeModel(alpha=0, beta=0, gamma=0, sigma=0.0, unit_shift=UnitShift.UNIFORM)
    y = sample_outcomes(model, np.zeros(5000), np.zeros(5000), rep_seed=1)
    assert y.min() >= 0.0 and y.max() <= 1.0
    assert y.mean() == pytest.approx(0.5, abs=0.02)

    noisy = sample_outcomes(OutcomeModel(alpha=0, beta=0, gamma=0, sigma=2.0), np.zeros(5000), np.zeros(5000), 2)
    assert noisy.std() == pytest.approx(2.0, rel=0.05)


def test_sample_outcomes_is_deterministic_and_checks_lengths():
    model = OutcomeModel()
    assert np.array_equal(sample_outcomes(model, [1, 0], [0.2, 0.4], 9), sample_outcomes(model, [1, 0], [0.2, 0.4], 9))
    with pytest.raises(DimensionError):
        sample_outcomes(model, [1, 0], [0.2])


def test_graph_count():
    assert graph_count(Graph.from_edges(3, [(0, 1)]), 50, 10) == 1
    assert graph_count(ER40, 50, None) == 50
    assert graph_count(ER40, 50, 10) == 10
    assert graph_count(ER40, 5, 10) == 5
    with pytest.raises(ParameterError):
        graph_count(ER40, 5, 0)


def test_context_partition_is_shared_between_designs():
    first = build_context(ER40, design(DesignName.IS, Estimand.SPILLOVER), 4, 2)
    second = build_context(ER40, design(DesignName.CR, Estimand.SPILLOVER), 4, 2)
    assert first.graph == second.graph
    assert first.partition == second.partition
    assert second.z_auxiliary is None
    assert first.rho_independent is not None


def test_run_rejects_bad_arguments(er100):
    with pytest.raises(SchemaError):
        run_replications(er100, DesignSpec(DesignName.EGO_CLUSTERS, Estimand.DIRECT, rho_target=0.5), OutcomeModel(), 4, 0)
    with pytest.raises(ParameterError):
        run_replications(er100, design(DesignName.CR, Estimand.SPILLOVER), OutcomeModel(), 1, 0)
    with pytest.raises(ParameterError):
        run_replications(er100, design(DesignName.CR, Estimand.SPILLOVER), OutcomeModel(), 4, 0, threads=0)


@pytest.mark.parametrize(
    "name, estimand",
    [
        (DesignName.IS, Estimand.DIRECT),
        (DesignName.IS, Estimand.TOTAL),
        (DesignName.CR, Estimand.SPILLOVER),
        (DesignName.EGO_CLUSTERS, Estimand.TOTAL),
    ],
)
def test_thread_count_does_not_change_results(name, estimand):
    spec = design(name, estimand)
    single = run_replications(ER40, spec, OutcomeModel(), 12, 21, graphs=3, threads=1)
    pooled = run_replications(ER40, spec, OutcomeModel(), 12, 21, graphs=3, threads=4)
    assert single.estimates == pooled.estimates
    assert single.failures == pooled.failures


def test_same_seed_same_report(er100):
    spec = design(DesignName.FULL, Estimand.DIRECT)
    first = run_replications(er100, spec, OutcomeModel(), 6, 5)
    second = run_replications(er100, spec, OutcomeModel(), 6, 5)
    assert first.to_dict() == second.to_dict()


def test_noiseless_independent_set_recovers_effects(er100):
    model = OutcomeModel(sigma=0.0)
    spillover = run_replications(er100, design(DesignName.IS, Estimand.SPILLOVER), model, 100, 0)
    assert spillover.failures == 0
    assert spillover.estimates == pytest.approx([10.0] * 100, abs=1e-9)
    assert spillover.bias == pytest.approx(0.0, abs=1e-9)
    assert spillover.variance < 1e-18
    assert spillover.mean_predicted_variance == 0.0

    total = run_replications(er100, design(DesignName.IS, Estimand.TOTAL), model, 100, 0)
    assert total.failures == 0
    assert total.estimates == pytest.approx([30.0] * 100, abs=1e-9)
    assert total.variance < 1e-18


def test_report_fields(er100):
    report = run_replications(er100, design(DesignName.IS, Estimand.DIRECT), OutcomeModel(), 20, 3)
    assert report.graph == "graph"
    assert report.params == f"n=100 edges={er100.edge_count}"
    assert report.design == "IS"
    assert report.estimand == "direct(0.5)"
    assert report.true_effect == 20.0
    assert report.succeeded == 20
    assert len(report.estimates) == 20
    assert report.bias <= report.mae + 1e-12
    assert report.variance == pytest.approx(np.var(report.estimates, ddof=1))
    assert report.mean_norm_delta >= 0.0
    assert report.model["gamma"] == 10.0


def test_generated_graph_labels():
    report = run_replications(ER40, design(DesignName.CR, Estimand.TOTAL), OutcomeModel(), 4, 1, graphs=2)
    assert report.graph == "ER"
    assert report.params == "n=40 p=0.15"
    assert report.estimand == "total"


def test_empty_graph_fails_every_spillover_replication():
    empty = Graph.from_edges(10, [])
    report = run_replications(empty, design(DesignName.IS, Estimand.SPILLOVER), OutcomeModel(), 5, 0)
    assert report.failures == 5
    assert report.estimates == []
    assert np.isnan(report.bias)


@pytest.mark.parametrize("estimand, truth", [(Estimand.SPILLOVER, 10.0), (Estimand.TOTAL, 30.0)])
def test_noiseless_ego_clusters_recover_effects(er100, estimand, truth):
    report = run_replications(er100, design(DesignName.EGO_CLUSTERS, estimand), OutcomeModel(sigma=0.0), 20, 4)
    assert report.succeeded > 0
    assert report.estimates == pytest.approx([truth] * report.succeeded, abs=1e-9)


@pytest.mark.parametrize("name", [DesignName.CR, DesignName.FULL, DesignName.GRAPH_CLUSTER, DesignName.EGO_CLUSTERS])
def test_baselines_produce_estimates(er100, name):
    report = run_replications(er100, design(name, Estimand.SPILLOVER), OutcomeModel(), 10, 2)
    assert report.succeeded > 0
    assert np.all(np.isfinite(report.estimates))
    assert report.mean_predicted_variance is None


@pytest.mark.slow
@pytest.mark.parametrize("estimand, truth", [(Estimand.SPILLOVER, 10.0), (Estimand.TOTAL, 30.0)])
def test_predicted_variance_matches_monte_carlo(er100, estimand, truth):
    model = OutcomeModel(sigma=0.5)
    report = run_replications(er100, design(DesignName.IS, estimand), model, 10000, 17, threads=4)
    assert report.failures == 0
    assert report.variance == pytest.approx(report.mean_predicted_variance, rel=0.05)
    assert abs(report.mean_estimate - truth) < 4 * np.sqrt(report.variance / report.succeeded)


@pytest.mark.slow
def test_direct_bias_within_bound(er100):
    model = OutcomeModel(sigma=0.5)
    report = run_replications(er100, design(DesignName.IS, Estimand.DIRECT), model, 5000, 23, threads=4)
    context = build_context(er100, design(DesignName.IS, Estimand.DIRECT), 23, 0)
    n_used = len(context.rho_independent) - len(context.rho_independent) % 2
    bound = bias_bound_direct(model.lipschitz, context.rho_independent - 0.5, n_used)
    standard_error = np.sqrt(report.variance / report.succeeded)
    assert report.bias <= bound + 4 * standard_error


@pytest.mark.slow
def test_independent_set_beats_full_randomization_on_direct_effect():
    graph = GraphSpec(GraphFamily.ERDOS_RENYI, 100, p=0.1)
    model = OutcomeModel()
    independent = run_replications(graph, design(DesignName.IS, Estimand.DIRECT), model, 500, 31, graphs=20, threads=4)
    full = run_replications(graph, design(DesignName.FULL, Estimand.DIRECT), model, 500, 31, graphs=20, threads=4)
    assert independent.mae < full.mae
