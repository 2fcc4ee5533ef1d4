"""Experiment configuration: JSON file schema and conversion to domain options"""

import json
from pathlib import Path
from typing import List, Literal, Optional, Union

import pydantic
from pydantic import BaseModel, ConfigDict, Field

from ..structures.assignment import MAX_EXACT_THRESHOLD, OptimizerOptions
from ..structures.model import (
    DesignName,
    DesignSpec,
    Estimand,
    GraphFamily,
    GraphSpec,
    OutcomeModel,
    UnitShift,
)
from .errors import ParseError, SchemaError


class GraphEntry(BaseModel):
    """Jedna rodzina grafów w tabeli wyników."""

    model_config = ConfigDict(extra="forbid")

    family: GraphFamily
    n: int = Field(ge=2)
    p: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    m: Optional[int] = Field(default=None, ge=1)
    k: int = Field(default=4, ge=2)

    @pydantic.model_validator(mode="after")
    def check_family_parameters(self) -> "GraphEntry":
        if self.family in (GraphFamily.ERDOS_RENYI, GraphFamily.SMALL_WORLD) and self.p is None:
            raise ValueError(f"p is required for family {self.family.value}")
        if self.family is GraphFamily.BARABASI_ALBERT:
            if self.m is None:
                raise ValueError("m is required for family ba")
            if self.m >= self.n:
                raise ValueError(f"m={self.m} must be < n={self.n}")
        if self.family is GraphFamily.SMALL_WORLD and (self.k % 2 or self.k >= self.n):
            raise ValueError(f"k={self.k} must be even and < n={self.n}")
        return self

    def to_spec(self) -> GraphSpec:
        return GraphSpec(family=self.family, n=self.n, p=self.p, m=self.m, k=self.k)


class ModelEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    alpha: float = 1.0
    beta: float = 20.0
    gamma: float = 10.0
    sigma: float = Field(default=0.5, ge=0.0)
    unit_shift: UnitShift = UnitShift.NONE


class OptimizerEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    restarts: int = Field(default=20, ge=1)
    max_iters: Optional[int] = Field(default=None, ge=0)
    exact_threshold: int = Field(default=16, ge=0, le=MAX_EXACT_THRESHOLD)


class SweepEntry(BaseModel):
    """Parametr modelu zmieniany między kolejnymi przebiegami."""

    model_config = ConfigDict(extra="forbid")

    parameter: Literal["alpha", "beta", "gamma", "sigma"]
    values: List[float] = Field(min_length=1)


class ExperimentConfig(BaseModel):
    """Główna konfiguracja benchmarku."""

    model_config = ConfigDict(extra="forbid")

    name: str = Field(default="experiment", pattern=r"^[A-Za-z0-9_.-]+$")
    estimands: List[Estimand] = Field(min_length=1)
    graphs: List[GraphEntry] = Field(min_length=1)
    designs: List[DesignName] = Field(min_length=1)
    model: ModelEntry = Field(default_factory=ModelEntry)
    rho_target: float = Field(default=0.5, ge=0.0, le=1.0)
    own_treatment: Literal[0, 1] = 1
    min_degree_first: bool = False
    optimizer: OptimizerEntry = Field(default_factory=OptimizerEntry)
    reps: int = Field(default=2000, ge=2)
    graphs_per_config: Optional[int] = Field(default=None, ge=1)
    seed: int = Field(default=0, ge=0)
    threads: int = Field(default=1, ge=1)
    sweep: Optional[SweepEntry] = None

    @pydantic.model_validator(mode="after")
    def check_sweep(self) -> "ExperimentConfig":
        if self.sweep is not None and self.sweep.parameter == "sigma" and min(self.sweep.values) < 0:
            raise ValueError("sigma sweep values must be >= 0")
        return self

    def graph_specs(self) -> List[GraphSpec]:
        return [entry.to_spec() for entry in self.graphs]

    def outcome_model(self, **overrides: float) -> OutcomeModel:
        """OutcomeModel from the ``model`` section, with optional swept values."""
        values = self.model.model_dump()
        values.update(overrides)
        return OutcomeModel(seed=self.seed, **values)

    def optimizer_options(self) -> OptimizerOptions:
        return OptimizerOptions(
            restarts=self.optimizer.restarts,
            max_iters=self.optimizer.max_iters,
            seed=self.seed,
            exact_threshold=self.optimizer.exact_threshold,
        )

    def design_spec(self, name: DesignName, estimand: Estimand) -> DesignSpec:
        return DesignSpec(
            name=name,
            estimand=estimand,
            optimizer=self.optimizer_options(),
            rho_target=self.rho_target if estimand is Estimand.DIRECT else None,
            own_treatment=self.own_treatment,
            min_degree_first=self.min_degree_first,
        )


def _schema_error(exc: pydantic.ValidationError) -> SchemaError:
    error = exc.errors()[0]
    key = ".".join(str(part) for part in error["loc"]) or "<root>"
    return SchemaError(key, error["msg"])


def parse_config(data: Union[dict, str]) -> ExperimentConfig:
    """Validate a config mapping or JSON text; failures name the dotted key."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.lineno, exc.msg) from exc
    if not isinstance(data, dict):
        raise SchemaError("<root>", "config must be a JSON object")
    try:
        return ExperimentConfig.model_validate(data)
    except pydantic.ValidationError as exc:
        raise _schema_error(exc) from exc


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))
