"""Struktury wyników: dopasowanie OLS, podsumowanie estymacji, raport symulacji"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from dataclasses_json import dataclass_json

ESTIMATE_CSV_COLUMNS = [
    "estimand",
    "point",
    "predicted_variance",
    "bias_bound",
    "norm_delta",
    "var_rho",
]

REPORT_CSV_COLUMNS = [
    "graph",
    "params",
    "design",
    "estimand",
    "bias",
    "variance",
    "reps",
    "failures",
    "mean_norm_delta",
    "mean_var_rho",
    "mae",
]


def _fmt(value: Optional[float]) -> str:
    return "" if value is None else repr(float(value))


@dataclass_json
@dataclass
class OlsFit:
    """(alpha, beta, gamma) z regresji na zbiorze niezależnym; beta brak gdy Z stałe."""

    alpha_hat: float
    beta_hat: Optional[float]
    gamma_hat: float
    residual_variance: float
    n_used: int


@dataclass_json
@dataclass
class EstimateSummary:
    """Point estimate plus the closed-form diagnostics that go with it."""

    estimand: str
    point: float
    predicted_variance: Optional[float] = None
    bias_bound: Optional[float] = None
    norm_delta: float = 0.0
    var_rho: float = 0.0
    corr_z_rho: Optional[float] = None

    def csv_row(self) -> List[str]:
        return [
            self.estimand,
            _fmt(self.point),
            _fmt(self.predicted_variance),
            _fmt(self.bias_bound),
            _fmt(self.norm_delta),
            _fmt(self.var_rho),
        ]


@dataclass_json
@dataclass
class SimulationReport:
    """Bias / variance of one design over replications (one cell of a results table)."""

    graph: str
    params: str
    design: str
    estimand: str
    true_effect: float
    reps: int
    failures: int = 0
    bias: float = float("nan")
    mae: float = float("nan")
    variance: float = float("nan")
    mean_estimate: float = float("nan")
    mean_norm_delta: float = float("nan")
    mean_var_rho: float = float("nan")
    mean_predicted_variance: Optional[float] = None
    master_seed: int = 0
    sweep_value: Optional[float] = None
    model: Dict[str, Any] = field(default_factory=dict)
    estimates: List[float] = field(default_factory=list)

    @property
    def succeeded(self) -> int:
        """Replications that produced an estimate."""
        return self.reps - self.failures

    def csv_row(self) -> List[str]:
        return [
            self.graph,
            self.params,
            self.design,
            self.estimand,
            f"{self.bias:.6f}",
            f"{self.variance:.6f}",
            str(self.reps),
            str(self.failures),
            f"{self.mean_norm_delta:.6f}",
            f"{self.mean_var_rho:.6f}",
            f"{self.mae:.6f}",
        ]
