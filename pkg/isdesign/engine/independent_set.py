"""
Independent-set partition, interference matrix and exposures.

The partition follows the greedy procedure: repeatedly pick a uniformly random
remaining vertex, put it in V_I and delete it together with its neighbors.
Scanning a uniform random permutation and keeping every vertex not yet deleted
picks vertices with exactly that distribution in O(n + |E|).
"""

import heapq
import math
from typing import Dict, List, Sequence, Union

import numpy as np
from scipy import sparse

from ..structures.assignment import Assignment
from ..structures.graph import Graph
from ..structures.partition import InterferenceMatrix, Partition
from ..utils.errors import DimensionError, ParameterError
from ..utils.logger import ExperimentEventType, get_logger
from ..utils.rng import as_generator

SeedLike = Union[int, np.random.Generator, None]


def greedy_independent_set(g: Graph, seed: SeedLike = 0, min_degree_first: bool = False) -> Partition:
    """
    Split the vertices into a maximal independent set and its complement.

    Args:
        g: Interference graph
        seed: RNG seed (or generator) driving the uniform choice
        min_degree_first: Pick the remaining vertex of smallest residual degree
                          instead of a uniform one (ties broken at random)

    Returns:
        Partition with V_I in selection order and V_A in increasing id order
    """
    rng = as_generator(seed)
    if min_degree_first:
        chosen = _min_degree_order(g, rng)
    else:
        removed = np.zeros(g.n, dtype=bool)
        chosen = []
        for v in rng.permutation(g.n):
            v = int(v)
            if removed[v]:
                continue
            chosen.append(v)
            removed[v] = True
            removed[list(g.neighbors(v))] = True

    in_set = np.zeros(g.n, dtype=bool)
    in_set[chosen] = True
    auxiliary = tuple(int(v) for v in np.flatnonzero(~in_set))
    partition = Partition(tuple(chosen), auxiliary)

    get_logger().log_event(
        ExperimentEventType.PARTITION_BUILT,
        f"independent set n_I={partition.n_independent} of n={g.n}",
        min_degree_first=min_degree_first,
    )
    return partition


def _min_degree_order(g: Graph, rng: np.random.Generator) -> List[int]:
    residual = g.degrees().copy()
    priority = rng.permutation(g.n)
    removed = np.zeros(g.n, dtype=bool)
    heap = [(int(residual[v]), int(priority[v]), v) for v in range(g.n)]
    heapq.heapify(heap)
    chosen: List[int] = []

    while heap:
        deg, _, v = heapq.heappop(heap)
        if removed[v] or deg != residual[v]:
            continue  # nieaktualny wpis
        chosen.append(v)
        deleted = [v] + [u for u in g.neighbors(v) if not removed[u]]
        removed[deleted] = True
        for u in deleted:
            for w in g.neighbors(u):
                if not removed[w]:
                    residual[w] -= 1
                    heapq.heappush(heap, (int(residual[w]), int(priority[w]), w))
    return chosen


def is_independent(g: Graph, vertices: Sequence[int]) -> bool:
    members = set(vertices)
    return all(not (members & set(g.neighbors(v))) for v in members)


def is_maximal(g: Graph, part: Partition) -> bool:
    members = set(part.independent)
    return all(members & set(g.neighbors(v)) for v in part.auxiliary)


def validate_partition(g: Graph, part: Partition) -> bool:
    """Sprawdza rozłączność, pokrycie i niezależność podziału."""
    independent, auxiliary = set(part.independent), set(part.auxiliary)
    if independent & auxiliary:
        raise ParameterError("independent and auxiliary sets overlap")
    if independent | auxiliary != set(range(g.n)):
        raise ParameterError("partition does not cover every vertex exactly once")
    if not is_independent(g, part.independent):
        raise ParameterError("independent set contains an edge")
    return True


def interference_matrix(g: Graph, part: Partition) -> InterferenceMatrix:
    """Gamma_ij = 1/d_i for (i, j) in E, rows ordered as part.independent."""
    col_index: Dict[int, int] = {v: c for c, v in enumerate(part.auxiliary)}
    indptr = [0]
    indices: List[int] = []
    for i in part.independent:
        for j in g.neighbors(i):
            if j not in col_index:
                raise ParameterError(f"vertices {i} and {j} are adjacent but both independent")
            indices.append(col_index[j])
        indptr.append(len(indices))

    counts = sparse.csr_matrix(
        (np.ones(len(indices), dtype=np.int64), np.asarray(indices, dtype=np.int64), np.asarray(indptr)),
        shape=(part.n_independent, part.n_auxiliary),
    )
    degrees = np.asarray([g.degree(i) for i in part.independent], dtype=np.int64)
    return InterferenceMatrix(counts, degrees, part.independent, part.auxiliary)


def _bits(z: Union[Assignment, Sequence[int], np.ndarray]) -> np.ndarray:
    if isinstance(z, Assignment):
        return z.to_array()
    return np.asarray(z, dtype=np.int64).ravel()


def exposure(gamma: InterferenceMatrix, z_a: Union[Assignment, Sequence[int], np.ndarray]) -> np.ndarray:
    """rho_I = Gamma Z_A; units without neighbors get exposure 0."""
    bits = _bits(z_a)
    if len(bits) != gamma.cols:
        raise DimensionError(f"Z_A has {len(bits)} entries, Gamma has {gamma.cols} columns")
    treated = gamma.counts @ bits
    return np.divide(
        treated.astype(float),
        gamma.degrees,
        out=np.zeros(gamma.rows, dtype=float),
        where=gamma.degrees > 0,
    )


def full_exposure(g: Graph, z: Union[Assignment, Sequence[int], np.ndarray]) -> np.ndarray:
    """Exposure of every vertex under an assignment of all of V."""
    bits = _bits(z)
    if len(bits) != g.n:
        raise DimensionError(f"Z has {len(bits)} entries, graph has {g.n} vertices")
    degrees = g.degrees()
    treated = g.adjacency_matrix() @ bits
    return np.divide(
        treated.astype(float),
        degrees,
        out=np.zeros(g.n, dtype=float),
        where=degrees > 0,
    )


def independent_set_size_bound(n: int, s: float) -> float:
    """Guaranteed greedy independent-set size (log s / s) n for expected average degree s."""
    if s <= 1:
        raise ParameterError(f"s={s} must exceed 1")
    if n < 1:
        raise ParameterError(f"n={n} must be >= 1")
    return math.log(s) / s * n


def ego_cluster_bound(n: int, s: float) -> float:
    """Upper bound n/(s+1) on the number of disjoint ego-clusters."""
    if s < 0:
        raise ParameterError(f"s={s} must be >= 0")
    return n / (s + 1.0)


def is_size_ratio(g: Graph, part: Partition) -> Dict[str, float]:
    """n_I, n_I / n and, when the mean degree allows it, the size bound."""
    s = g.mean_degree()
    report: Dict[str, float] = {
        "n_independent": float(part.n_independent),
        "fraction": part.n_independent / g.n if g.n else 0.0,
        "mean_degree": s,
    }
    if s > 1:
        report["bound"] = independent_set_size_bound(g.n, s)
        # the bound is only claimed for s = Omega(log n)
        report["bound_applies"] = float(s >= math.log(g.n))
    return report
