"""
Random graph generators used by the benchmarks.

Thin, validated wrappers over networkx; every generator is deterministic in
its integer seed and returns an immutable ``Graph``.
"""

from typing import Optional

import networkx as nx

from ..structures.graph import Graph
from ..structures.model import GraphFamily
from ..utils.errors import ParameterError
from ..utils.logger import ExperimentEventType, get_logger

DEFAULT_SMALL_WORLD_K = 4


def _check_probability(p: float, name: str = "p") -> None:
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"{name}={p} must lie in [0, 1]")


def gen_erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p): every unordered pair is an edge independently with probability p."""
    if n < 1:
        raise ParameterError(f"n={n} must be >= 1")
    _check_probability(p)
    # fast_gnp falls back to gnp_random_graph for p in {0, 1}
    return Graph.from_networkx(nx.fast_gnp_random_graph(n, p, seed=seed))


def gen_barabasi_albert(n: int, m: int, seed: int) -> Graph:
    """
    Preferential attachment G(n, m).

    Starts from the complete graph on m+1 vertices; every later vertex attaches
    m edges to distinct targets drawn proportionally to current degree.
    """
    if m < 1:
        raise ParameterError(f"m={m} must be >= 1")
    if m >= n:
        raise ParameterError(f"m={m} must be smaller than n={n}")
    seed_graph = nx.complete_graph(m + 1)
    return Graph.from_networkx(nx.barabasi_albert_graph(n, m, seed=seed, initial_graph=seed_graph))


def gen_small_world(n: int, k: int, p: float, seed: int) -> Graph:
    """Watts-Strogatz: ring lattice of even degree k, each edge rewired with probability p."""
    if k < 2 or k % 2:
        raise ParameterError(f"k={k} must be an even number >= 2")
    if k >= n:
        raise ParameterError(f"k={k} must be smaller than n={n}")
    _check_probability(p)
    return Graph.from_networkx(nx.watts_strogatz_graph(n, k, p, seed=seed))


def generate(
    family: GraphFamily,
    n: int,
    seed: int,
    p: Optional[float] = None,
    m: Optional[int] = None,
    k: int = DEFAULT_SMALL_WORLD_K,
) -> Graph:
    """Dispatch on the graph family (used by configs and the CLI)."""
    if family is GraphFamily.ERDOS_RENYI:
        if p is None:
            raise ParameterError("Erdos-Renyi graphs need p")
        graph = gen_erdos_renyi(n, p, seed)
    elif family is GraphFamily.BARABASI_ALBERT:
        if m is None:
            raise ParameterError("Barabasi-Albert graphs need m")
        graph = gen_barabasi_albert(n, m, seed)
    elif family is GraphFamily.SMALL_WORLD:
        if p is None:
            raise ParameterError("small-world graphs need p")
        graph = gen_small_world(n, k, p, seed)
    else:
        raise ParameterError(f"unknown graph family {family}")

    get_logger().log_event(
        ExperimentEventType.GRAPH_GENERATED,
        f"{family.value} graph n={graph.n} edges={graph.edge_count}",
        seed=seed,
    )
    return graph
