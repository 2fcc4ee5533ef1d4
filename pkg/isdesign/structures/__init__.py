"""Moduł structures - typy danych projektu eksperymentu"""

from .graph import Graph
from .partition import Partition, InterferenceMatrix
from .assignment import (
    Scope,
    Assignment,
    OptimizerOptions,
    OptimizationResult,
)
from .model import (
    UnitShift,
    Estimand,
    DesignName,
    GraphFamily,
    OutcomeModel,
    DesignSpec,
    GraphSpec,
)
from .report import OlsFit, EstimateSummary, SimulationReport

__all__ = [
    'Graph',
    'Partition',
    'InterferenceMatrix',
    'Scope',
    'Assignment',
    'OptimizerOptions',
    'OptimizationResult',
    'UnitShift',
    'Estimand',
    'DesignName',
    'GraphFamily',
    'OutcomeModel',
    'DesignSpec',
    'GraphSpec',
    'OlsFit',
    'EstimateSummary',
    'SimulationReport',
]
