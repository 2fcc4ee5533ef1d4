"""Model wyników potencjalnych i specyfikacja projektu eksperymentu"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from ..utils.errors import ParameterError, SchemaError
from .assignment import OptimizerOptions


class UnitShift(Enum):
    """Heterogeniczność jednostek dodawana do wyniku."""

    NONE = "none"
    UNIFORM = "uniform"


class Estimand(Enum):
    DIRECT = "direct"
    SPILLOVER = "spillover"
    TOTAL = "total"


class DesignName(Enum):
    """Projekty porównywane w benchmarku."""

    IS = "IS"
    CR = "CR"
    FULL = "Full"
    GRAPH_CLUSTER = "GraphCluster"
    EGO_CLUSTERS = "EgoClusters"


class GraphFamily(Enum):
    ERDOS_RENYI = "er"
    BARABASI_ALBERT = "ba"
    SMALL_WORLD = "sw"


@dataclass
class OutcomeModel:
    """Y_i(Z_i, rho_i) = alpha + U_i + beta Z_i + gamma rho_i + eps_i, eps_i ~ N(0, sigma^2)."""

    alpha: float = 1.0
    beta: float = 20.0
    gamma: float = 10.0
    sigma: float = 0.5
    unit_shift: UnitShift = UnitShift.NONE
    seed: int = 0

    def validate(self) -> bool:
        """Raise ParameterError for a negative noise level."""
        if self.sigma < 0:
            raise ParameterError("sigma must be >= 0")
        return True

    @property
    def lipschitz(self) -> float:
        """Lipschitz constant of the outcome in the exposure (linear model: |gamma|)."""
        return abs(self.gamma)


@dataclass
class DesignSpec:
    """Projekt + estymanda; opcje optymalizatora dotyczą tylko IS."""

    name: DesignName
    estimand: Estimand
    optimizer: OptimizerOptions = field(default_factory=OptimizerOptions)
    rho_target: Optional[float] = None
    own_treatment: int = 1
    min_degree_first: bool = False

    def validate(self) -> bool:
        """Raise SchemaError for a design / estimand combination that cannot run."""
        if self.estimand is Estimand.DIRECT:
            if self.rho_target is None:
                raise SchemaError("design.rho_target", "required for the direct estimand")
            if not 0.0 <= self.rho_target <= 1.0:
                raise SchemaError("design.rho_target", "must lie in [0, 1]")
        elif self.rho_target is not None:
            raise SchemaError("design.rho_target", f"only valid with the direct estimand, not {self.estimand.value}")
        if self.own_treatment not in (0, 1):
            raise SchemaError("design.own_treatment", "must be 0 or 1")
        if self.name is DesignName.EGO_CLUSTERS and self.estimand is Estimand.DIRECT:
            raise SchemaError("design.name", "EgoClusters has no direct-effect estimator")
        if self.name is DesignName.IS:
            self.optimizer.validate()
        return True

    @property
    def label(self) -> str:
        """Name used in result tables."""
        return self.name.value


@dataclass
class GraphSpec:
    """Parametry generatora grafu losowego."""

    family: GraphFamily
    n: int
    p: Optional[float] = None
    m: Optional[int] = None
    k: int = 4

    @property
    def label(self) -> str:
        """Short family label (ER, BA, SW)."""
        return {
            GraphFamily.ERDOS_RENYI: "ER",
            GraphFamily.BARABASI_ALBERT: "BA",
            GraphFamily.SMALL_WORLD: "SW",
        }[self.family]

    @property
    def params_text(self) -> str:
        """Generator parameters as they appear in result tables."""
        if self.family is GraphFamily.BARABASI_ALBERT:
            return f"n={self.n} m={self.m}"
        if self.family is GraphFamily.SMALL_WORLD:
            return f"n={self.n} k={self.k} p={self.p:g}"
        return f"n={self.n} p={self.p:g}"
