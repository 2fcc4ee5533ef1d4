"""Klasa grafu interferencji"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Tuple

import networkx as nx
import numpy as np
from scipy import sparse

from ..utils.errors import ParameterError


@dataclass(frozen=True)
class Graph:
    """Prosty graf nieskierowany; wierzchołki to 0..n-1."""

    _n: int
    _adjacency: Tuple[Tuple[int, ...], ...]
    _edge_count: int = field(init=False)

    def __post_init__(self):
        if len(self._adjacency) != self._n:
            raise ParameterError(
                f"adjacency has {len(self._adjacency)} rows for n={self._n}"
            )
        degree_sum = 0
        for i, neighbors in enumerate(self._adjacency):
            if i in neighbors:
                raise ParameterError(f"self-loop at vertex {i}")
            if len(set(neighbors)) != len(neighbors):
                raise ParameterError(f"duplicate edge at vertex {i}")
            if list(neighbors) != sorted(neighbors):
                raise ParameterError(f"neighbors of {i} are not sorted")
            for j in neighbors:
                if not 0 <= j < self._n:
                    raise ParameterError(f"neighbor {j} of {i} is out of range")
                if i not in self._adjacency[j]:
                    raise ParameterError(f"edge ({i},{j}) is not symmetric")
            degree_sum += len(neighbors)
        object.__setattr__(self, "_edge_count", degree_sum // 2)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        """Build from an edge iterable; duplicates are merged, self-loops rejected."""
        neighbor_sets: List[set] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ParameterError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u},{v}) outside 0..{n - 1}")
            neighbor_sets[u].add(v)
            neighbor_sets[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in neighbor_sets))

    @classmethod
    def from_networkx(cls, nx_graph: nx.Graph) -> "Graph":
        """Konwersja z networkx; wierzchołki numerowane po posortowaniu."""
        nodes = sorted(nx_graph.nodes())
        if nodes != list(range(len(nodes))):
            nx_graph = nx.convert_node_labels_to_integers(nx_graph, ordering="sorted")
        return cls.from_edges(nx_graph.number_of_nodes(), nx_graph.edges())

    @property
    def n(self) -> int:
        return self._n

    @property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        return self._adjacency

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def neighbors(self, v: int) -> Tuple[int, ...]:
        """Sorted neighbors of ``v``."""
        return self._adjacency[v]

    def degree(self, v: int) -> int:
        return len(self._adjacency[v])

    def degrees(self) -> np.ndarray:
        """Degree of every vertex as an int64 vector."""
        return np.fromiter((len(a) for a in self._adjacency), dtype=np.int64, count=self._n)

    def mean_degree(self) -> float:
        """Average degree 2m/n (0 for the empty vertex set)."""
        return 2.0 * self._edge_count / self._n if self._n else 0.0

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Each undirected edge once, as (u, v) with u < v, in sorted order."""
        for u, neighbors in enumerate(self._adjacency):
            for v in neighbors:
                if u < v:
                    yield u, v

    def has_edge(self, u: int, v: int) -> bool:
        """Binary search in the sorted neighbor list of ``u``."""
        neighbors = self._adjacency[u]
        k = int(np.searchsorted(neighbors, v))
        return k < len(neighbors) and neighbors[k] == v

    def adjacency_matrix(self) -> sparse.csr_matrix:
        """0/1 adjacency as an integer CSR matrix."""
        indptr = np.zeros(self._n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum(self.degrees())
        indices = np.fromiter(
            (v for neighbors in self._adjacency for v in neighbors),
            dtype=np.int64,
            count=int(indptr[-1]),
        )
        data = np.ones(len(indices), dtype=np.int64)
        return sparse.csr_matrix((data, indices, indptr), shape=(self._n, self._n))

    def to_networkx(self) -> nx.Graph:
        """Konwersja do networkx.Graph."""
        nx_graph = nx.Graph()
        nx_graph.add_nodes_from(range(self._n))
        nx_graph.add_edges_from(self.edges())
        return nx_graph

    def summary(self) -> Dict[str, float]:
        """n, edge count and mean degree."""
        return {"n": self._n, "edge_count": self._edge_count, "mean_degree": self.mean_degree()}
