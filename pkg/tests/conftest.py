"""Shared fixtures: the 12-unit example graph and small generated graphs."""

import pytest

from isdesign.engine.edge_list import load_example_graph
from isdesign.engine.generators import gen_erdos_renyi
from isdesign.structures import Graph, Partition

# 0-based ids of the independent set {1,3,4,7,9,10} from the example graph's worked partition
EXAMPLE_INDEPENDENT = (0, 2, 3, 6, 8, 9)
EXAMPLE_AUXILIARY = (1, 4, 5, 7, 10, 11)


@pytest.fixture
def example_graph() -> Graph:
    return load_example_graph()


@pytest.fixture
def example_partition() -> Partition:
    return Partition(EXAMPLE_INDEPENDENT, EXAMPLE_AUXILIARY)


@pytest.fixture
def path3() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def star() -> Graph:
    """Center 0 with leaves 1..6."""
    return Graph.from_edges(7, [(0, leaf) for leaf in range(1, 7)])


@pytest.fixture
def matching() -> Graph:
    """Four disjoint edges (i, i + 4)."""
    return Graph.from_edges(8, [(i, i + 4) for i in range(4)])


@pytest.fixture
def complete5() -> Graph:
    return Graph.from_edges(5, [(u, v) for u in range(5) for v in range(u + 1, 5)])


@pytest.fixture(scope="session")
def er100() -> Graph:
    return gen_erdos_renyi(100, 0.1, seed=11)
