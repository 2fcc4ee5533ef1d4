"""Tests for the auxiliary-set optimizers (exposure matching and variance maximization)."""

import numpy as np
import pytest

from isdesign.engine.generators import gen_erdos_renyi
from isdesign.engine.independent_set import exposure, greedy_independent_set, interference_matrix
from isdesign.engine.optimizer import direct_objective, optimize_direct, optimize_variance, variance_objective
from isdesign.structures import OptimizerOptions, Partition

LOCAL_SEARCH = OptimizerOptions(restarts=20, exact_threshold=0)
ORACLE_SEARCH = OptimizerOptions(restarts=40, exact_threshold=0)


def small_instances(limit=100, max_aux=14):
    """Interference matrices of random ER(18, 0.3) graphs with at most ``max_aux`` auxiliary units."""
    instances = []
    for seed in range(400):
        g = gen_erdos_renyi(18, 0.3, seed=seed)
        gamma = interference_matrix(g, greedy_independent_set(g, seed))
        if 0 < gamma.cols <= max_aux:
            instances.append(gamma)
        if len(instances) == limit:
            break
    return instances


@pytest.fixture(scope="module")
def instances():
    found = small_instances()
    assert len(found) >= 50
    return found


@pytest.fixture
def er_gamma(er100):
    return interference_matrix(er100, greedy_independent_set(er100, 1))


def test_direct_trivial_targets(example_graph, example_partition):
    gamma = interference_matrix(example_graph, example_partition)
    for opts in (OptimizerOptions(), LOCAL_SEARCH):
        zero = optimize_direct(gamma, 0.0, opts)
        assert zero.objective == 0.0
        assert zero.assignment.treated_count() == 0
        one = optimize_direct(gamma, 1.0, opts)
        assert one.objective == 0.0
        assert one.assignment.treated_count() == gamma.cols


def test_variance_perfect_matching(matching):
    gamma = interference_matrix(matching, Partition((0, 1, 2, 3), (4, 5, 6, 7)))
    for opts in (OptimizerOptions(), LOCAL_SEARCH):
        result = optimize_variance(gamma, opts)
        assert result.objective == pytest.approx(1.0)
        assert result.assignment.treated_count() == 2
        assert sorted(exposure(gamma, result.assignment).tolist()) == [0.0, 0.0, 1.0, 1.0]


def test_variance_objective_of_constant_assignment_is_zero(er_gamma):
    assert variance_objective(er_gamma, np.zeros(er_gamma.cols, dtype=int)) == 0.0


def test_reported_objective_matches_recomputation(er_gamma):
    direct = optimize_direct(er_gamma, 0.5, LOCAL_SEARCH)
    assert direct.objective == direct_objective(er_gamma, direct.assignment, 0.5)
    variance = optimize_variance(er_gamma, LOCAL_SEARCH)
    assert variance.objective == variance_objective(er_gamma, variance.assignment)


def test_direct_never_worse_than_constant_candidates(er_gamma):
    for target in (0.2, 0.5, 0.8):
        result = optimize_direct(er_gamma, target, LOCAL_SEARCH)
        zeros = direct_objective(er_gamma, np.zeros(er_gamma.cols, dtype=int), target)
        ones = direct_objective(er_gamma, np.ones(er_gamma.cols, dtype=int), target)
        assert result.objective <= min(zeros, ones) + 1e-12


def test_variance_below_ceiling(er_gamma):
    result = optimize_variance(er_gamma, LOCAL_SEARCH)
    assert result.objective <= er_gamma.rows / 4 + 1e-9
    assert result.objective > 0


def test_local_search_traces_are_monotone(er_gamma):
    direct = optimize_direct(er_gamma, 0.5, LOCAL_SEARCH)
    variance = optimize_variance(er_gamma, LOCAL_SEARCH)
    assert len(direct.traces) == LOCAL_SEARCH.restarts
    for trace in direct.traces:
        assert all(b <= a + 1e-12 for a, b in zip(trace, trace[1:]))
    for trace in variance.traces:
        assert all(b >= a - 1e-12 for a, b in zip(trace, trace[1:]))


def test_optimizer_is_deterministic(er_gamma):
    first = optimize_direct(er_gamma, 0.5, OptimizerOptions(seed=7, exact_threshold=0))
    second = optimize_direct(er_gamma, 0.5, OptimizerOptions(seed=7, exact_threshold=0))
    assert first.assignment == second.assignment


def test_enumeration_is_exact(instances):
    for gamma in [g for g in instances if g.cols <= 10][:10]:
        result = optimize_direct(gamma, 0.5)
        assert result.exact
        codes = np.arange(1 << gamma.cols)
        bits = (codes[:, None] >> np.arange(gamma.cols)) & 1
        brute = min(direct_objective(gamma, z, 0.5) for z in bits)
        assert result.objective == pytest.approx(brute, abs=1e-12)


def test_direct_local_search_agrees_with_enumeration(instances):
    matches = 0
    for gamma in instances:
        optimum = optimize_direct(gamma, 0.5).objective
        found = optimize_direct(gamma, 0.5, ORACLE_SEARCH).objective
        assert found >= optimum - 1e-9
        matches += found <= optimum + 1e-9
    assert matches >= 0.9 * len(instances)


def test_variance_local_search_agrees_with_enumeration(instances):
    matches = 0
    for gamma in instances:
        optimum = optimize_variance(gamma).objective
        found = optimize_variance(gamma, ORACLE_SEARCH).objective
        assert found <= optimum + 1e-9
        matches += found >= optimum - 1e-9
    assert matches >= 0.9 * len(instances)

