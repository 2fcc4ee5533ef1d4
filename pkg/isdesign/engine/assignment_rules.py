"""
Treatment assignment rules.

Independent-set rules (complete randomization, constant, exposure threshold)
and the baseline designs the benchmarks compare against: complete
randomization of the full graph, graph-cluster randomization and
ego-cluster randomization.
"""

from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..structures.assignment import Assignment, Scope
from ..structures.graph import Graph
from ..utils.errors import ParameterError
from ..utils.rng import as_generator

SeedLike = Union[int, np.random.Generator, None]
EXPOSURE_THRESHOLD = 0.5


def _complete_randomization(count: int, rng: np.random.Generator) -> np.ndarray:
    bits = np.zeros(count, dtype=np.int64)
    bits[rng.permutation(count)[: count // 2]] = 1
    return bits


def assign_cr(count: int, seed: SeedLike = 0, scope: Scope = Scope.INDEPENDENT) -> Assignment:
    """Completely randomized design: exactly floor(count/2) treated, uniformly at random."""
    if count < 2:
        raise ParameterError(f"complete randomization needs at least 2 units, got {count}")
    return Assignment.from_array(scope, _complete_randomization(count, as_generator(seed)))


def assign_constant(count: int, z: int, scope: Scope = Scope.INDEPENDENT) -> Assignment:
    """Every unit gets the same treatment z."""
    if z not in (0, 1):
        raise ParameterError(f"z={z} must be 0 or 1")
    return Assignment.from_array(scope, np.full(count, z, dtype=np.int64))


def assign_threshold(rho: Sequence[float]) -> Assignment:
    """Z_i = 1 exactly when rho_i > 0.5 (strict)."""
    values = np.asarray(rho, dtype=float)
    if np.any((values < 0) | (values > 1)):
        raise ParameterError("exposures must lie in [0, 1]")
    return Assignment.from_array(Scope.INDEPENDENT, (values > EXPOSURE_THRESHOLD).astype(np.int64))


def baseline_full_cr(g: Graph, seed: SeedLike = 0) -> Assignment:
    """Half of all n units treated uniformly at random."""
    return assign_cr(g.n, seed, scope=Scope.ALL)


def graph_clusters(g: Graph, seed: SeedLike = 0) -> List[Tuple[int, ...]]:
    """
    Greedy ball growing: pick a uniform random uncovered vertex, claim it with its
    uncovered neighbors as one cluster, repeat until every vertex is covered.
    """
    rng = as_generator(seed)
    covered = np.zeros(g.n, dtype=bool)
    clusters: List[Tuple[int, ...]] = []
    for v in rng.permutation(g.n):
        v = int(v)
        if covered[v]:
            continue
        members = [v] + [u for u in g.neighbors(v) if not covered[u]]
        covered[members] = True
        clusters.append(tuple(sorted(members)))
    return clusters


def baseline_graph_cluster(g: Graph, seed: SeedLike = 0) -> Assignment:
    """Graph-cluster randomization: one fair coin per cluster."""
    rng = as_generator(seed)
    bits = np.zeros(g.n, dtype=np.int64)
    for cluster in graph_clusters(g, rng):
        bits[list(cluster)] = rng.integers(0, 2)
    return Assignment.from_array(Scope.ALL, bits)


def ego_clusters(g: Graph, seed: SeedLike = 0) -> List[Tuple[int, ...]]:
    """Disjoint closed neighborhoods, egos visited in uniform random order; ego listed first."""
    rng = as_generator(seed)
    claimed = np.zeros(g.n, dtype=bool)
    clusters: List[Tuple[int, ...]] = []
    for v in rng.permutation(g.n):
        v = int(v)
        members = [v, *g.neighbors(v)]
        if claimed[members].any():
            continue
        claimed[members] = True
        clusters.append(tuple(members))
    return clusters


def baseline_ego_clusters(
    g: Graph, seed: SeedLike = 0, ego_treatment: Optional[int] = None
) -> Tuple[List[int], Assignment]:
    """
    Ego-cluster randomization.

    Every ego-cluster (ego plus all alters) is treated or controlled as a block
    by a fair coin; vertices outside every cluster get independent fair coins.
    With ``ego_treatment`` set, egos are held at that value and only the alters
    follow the cluster coin, so each ego's exposure is exactly 0 or 1.

    Returns:
        (egos in selection order, assignment over all of V)
    """
    rng = as_generator(seed)
    clusters = ego_clusters(g, rng)
    bits = np.full(g.n, -1, dtype=np.int64)
    for cluster in clusters:
        bits[list(cluster)] = rng.integers(0, 2)
    unclaimed = np.flatnonzero(bits < 0)
    bits[unclaimed] = rng.integers(0, 2, size=len(unclaimed))
    egos = [cluster[0] for cluster in clusters]
    if ego_treatment is not None:
        if ego_treatment not in (0, 1):
            raise ParameterError(f"ego_treatment={ego_treatment} must be 0 or 1")
        bits[egos] = ego_treatment
    return egos, Assignment.from_array(Scope.ALL, bits)
