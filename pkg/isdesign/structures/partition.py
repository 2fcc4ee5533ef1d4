"""Podział grafu i macierz interferencji"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np
from scipy import sparse


@dataclass(frozen=True)
class Partition:
    """Zbiór niezależny V_I i zbiór pomocniczy V_A."""

    _independent: Tuple[int, ...]
    _auxiliary: Tuple[int, ...]

    @property
    def independent(self) -> Tuple[int, ...]:
        return self._independent

    @property
    def auxiliary(self) -> Tuple[int, ...]:
        return self._auxiliary

    @property
    def n_independent(self) -> int:
        return len(self._independent)

    @property
    def n_auxiliary(self) -> int:
        return len(self._auxiliary)


@dataclass(frozen=True, eq=False)
class InterferenceMatrix:
    """
    Gamma: n_I x n_A, entry (i, j) = 1/d_i for every edge between i in V_I and j in V_A.

    The 0/1 block is stored as integers together with the full-graph degrees,
    so exposures are computed as (treated neighbor count) / d_i with a single
    division per row.
    """

    _counts: sparse.csr_matrix
    _degrees: np.ndarray
    _row_ids: Tuple[int, ...]
    _col_ids: Tuple[int, ...]
    _row_index: Dict[int, int] = field(init=False, repr=False)
    _col_index: Dict[int, int] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_row_index", {v: r for r, v in enumerate(self._row_ids)})
        object.__setattr__(self, "_col_index", {v: c for c, v in enumerate(self._col_ids)})

    @property
    def rows(self) -> int:
        return len(self._row_ids)

    @property
    def cols(self) -> int:
        return len(self._col_ids)

    @property
    def counts(self) -> sparse.csr_matrix:
        """Integer neighbor counts |N(i) and {j}|, rows V_I, columns V_A."""
        return self._counts

    @property
    def degrees(self) -> np.ndarray:
        """Full-graph degree of every row unit."""
        return self._degrees

    @property
    def row_ids(self) -> Tuple[int, ...]:
        return self._row_ids

    @property
    def col_ids(self) -> Tuple[int, ...]:
        return self._col_ids

    @property
    def row_index(self) -> Dict[int, int]:
        return self._row_index

    @property
    def col_index(self) -> Dict[int, int]:
        return self._col_index

    @property
    def isolated(self) -> np.ndarray:
        """Rows whose unit has no neighbors at all (exposure fixed at 0)."""
        return self._degrees == 0

    @property
    def matrix(self) -> sparse.csr_matrix:
        """Gamma as floats."""
        safe = np.where(self._degrees > 0, self._degrees, 1)
        return sparse.csr_matrix(sparse.diags(1.0 / safe) @ self._counts)

    def entry(self, vertex_i: int, vertex_j: int) -> float:
        """Gamma_ij looked up by vertex ids."""
        r = self._row_index[vertex_i]
        c = self._col_index[vertex_j]
        count = self._counts[r, c]
        return float(count) / float(self._degrees[r]) if count else 0.0

    def row_sums(self) -> np.ndarray:
        """Row sums of Gamma: 1 for every row with a neighbor, 0 for isolated rows."""
        sums = np.asarray(self._counts.sum(axis=1)).ravel()
        return np.divide(
            sums,
            self._degrees,
            out=np.zeros(self.rows, dtype=float),
            where=self._degrees > 0,
        )
