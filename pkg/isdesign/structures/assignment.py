"""Przydział leczenia i opcje optymalizatora"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..utils.errors import DimensionError, ParameterError

MAX_EXACT_THRESHOLD = 24


class Scope(Enum):
    """Którą listę wierzchołków indeksuje przydział."""

    INDEPENDENT = "independent"
    AUXILIARY = "auxiliary"
    ALL = "all"


@dataclass(frozen=True)
class Assignment:
    """Binarny wektor przydziału Z dla danego zakresu."""

    _scope: Scope
    _bits: Tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self._bits):
            raise ParameterError("assignment entries must be 0 or 1")

    @classmethod
    def from_array(cls, scope: Scope, bits: Sequence[int], expected_length: Optional[int] = None) -> "Assignment":
        """Build from any 0/1 array; checks the length when ``expected_length`` is given."""
        values = tuple(int(b) for b in np.asarray(bits).ravel())
        if expected_length is not None and len(values) != expected_length:
            raise DimensionError(
                f"{scope.value} assignment has {len(values)} entries, expected {expected_length}"
            )
        return cls(scope, values)

    @property
    def scope(self) -> Scope:
        return self._scope

    @property
    def bits(self) -> Tuple[int, ...]:
        return self._bits

    def __len__(self) -> int:
        return len(self._bits)

    def to_array(self) -> np.ndarray:
        """Bits as an int64 numpy vector."""
        return np.asarray(self._bits, dtype=np.int64)

    def treated_count(self) -> int:
        """Liczba jednostek z Z = 1."""
        return sum(self._bits)


@dataclass
class OptimizerOptions:
    """Ustawienia lokalnego przeszukiwania przydziału na zbiorze pomocniczym."""

    restarts: int = 20
    max_iters: Optional[int] = None  # None -> 10 * n_A
    seed: int = 0
    exact_threshold: int = 16

    def validate(self) -> bool:
        """Raise ParameterError for impossible settings."""
        if self.restarts < 1:
            raise ParameterError("restarts must be >= 1")
        if self.exact_threshold > MAX_EXACT_THRESHOLD:
            raise ParameterError(f"exact_threshold must be <= {MAX_EXACT_THRESHOLD}")
        if self.max_iters is not None and self.max_iters < 0:
            raise ParameterError("max_iters must be >= 0")
        return True

    def iteration_limit(self, n_auxiliary: int) -> int:
        """Flip limit per restart: ``max_iters`` or 10 * n_A."""
        return self.max_iters if self.max_iters is not None else 10 * n_auxiliary


@dataclass
class OptimizationResult:
    """Wynik optymalizacji przydziału na zbiorze pomocniczym."""

    assignment: Assignment
    objective: float
    exact: bool
    restarts: int = 0
    flips: int = 0
    traces: List[List[float]] = field(default_factory=list)
