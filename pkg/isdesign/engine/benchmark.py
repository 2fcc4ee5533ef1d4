"""
Benchmark suite: every (sweep value, estimand, graph family, design) cell of a
config, one replication run per cell, written out as result tables.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

from ..structures.model import Estimand
from ..structures.report import REPORT_CSV_COLUMNS, SimulationReport
from ..utils.config import ExperimentConfig
from ..utils.errors import SchemaError
from ..utils.logger import ExperimentEventType, get_logger
from ..utils.output import header_lines, write_csv
from .replication import run_replications


@dataclass
class BenchmarkResult:
    reports: List[SimulationReport] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)
    files: List[Path] = field(default_factory=list)

    def by_estimand(self, estimand: Estimand) -> List[SimulationReport]:
        prefix = estimand.value
        return [report for report in self.reports if report.estimand.startswith(prefix)]


def benchmark_suite(config: ExperimentConfig, out_dir: Optional[Union[str, Path]] = None) -> BenchmarkResult:
    """
    Run the full cross product of a config.

    Invalid combinations (EgoClusters for the direct estimand) are skipped with a
    logged reason. With ``out_dir`` set, one table per estimand is written
    (``<name>_<estimand>.csv``), all reports go to ``<name>_reports.json`` and a
    sweep adds ``<name>_bias.csv`` / ``<name>_variance.csv``.
    """
    logger = get_logger()
    logger.start_run(name=config.name, reps=config.reps, seed=config.seed)
    result = BenchmarkResult()

    sweep = config.sweep
    sweep_values: List[Optional[float]] = list(sweep.values) if sweep is not None else [None]
    for value in sweep_values:
        overrides = {sweep.parameter: value} if sweep is not None and value is not None else {}
        model = config.outcome_model(**overrides)
        for estimand in config.estimands:
            for graph in config.graph_specs():
                for name in config.designs:
                    design = config.design_spec(name, estimand)
                    try:
                        design.validate()
                    except SchemaError as exc:
                        reason = f"{name.value}/{estimand.value} on {graph.label}: {exc}"
                        if reason not in result.skipped:
                            result.skipped.append(reason)
                            logger.log_event(ExperimentEventType.DESIGN_SKIPPED, f"Skipped {reason}")
                        continue

                    logger.info(f"Running {name.value}/{estimand.value} on {graph.label} {graph.params_text}")
                    report = run_replications(
                        graph,
                        design,
                        model,
                        config.reps,
                        config.seed,
                        graphs=config.graphs_per_config,
                        threads=config.threads,
                    )
                    if sweep is not None and value is not None:
                        report.params = f"{report.params} {sweep.parameter}={value:g}"
                        report.sweep_value = value
                    result.reports.append(report)

    if out_dir is not None:
        result.files = write_benchmark_files(config, result, Path(out_dir))
    logger.end_run(cells=len(result.reports), skipped=len(result.skipped))
    return result


def write_benchmark_files(config: ExperimentConfig, result: BenchmarkResult, out_dir: Path) -> List[Path]:
    # output bytes must not depend on the worker count
    header = header_lines("benchmark", seed=config.seed, config=config.model_dump_json(exclude={"threads"}))
    files = []
    for estimand in config.estimands:
        rows = [report.csv_row() for report in result.by_estimand(estimand)]
        files.append(write_csv(out_dir / f"{config.name}_{estimand.value}.csv", header, REPORT_CSV_COLUMNS, rows))

    if config.sweep is not None:
        files.extend(_write_sweep_series(config.sweep.parameter, config.sweep.values, config, result, out_dir, header))

    reports_path = out_dir / f"{config.name}_reports.json"
    reports_path.write_text(
        json.dumps([report.to_dict() for report in result.reports], indent=2, allow_nan=True),
        encoding="utf-8",
    )
    get_logger().log_event(ExperimentEventType.FILE_WRITTEN, f"Wrote {reports_path}")
    files.append(reports_path)
    return files


def _series_label(report: SimulationReport, single_cell: bool) -> str:
    if single_cell:
        return report.design
    graph_params = report.params.rsplit(" ", 1)[0]
    return f"{report.graph}({graph_params})/{report.estimand}/{report.design}"


def _write_sweep_series(
    parameter: str,
    values: List[float],
    config: ExperimentConfig,
    result: BenchmarkResult,
    out_dir: Path,
    header: List[str],
) -> List[Path]:
    """Rows: swept value; columns: one per design (per estimand and graph when there are several)."""
    single_cell = len(config.estimands) == 1 and len(config.graphs) == 1
    labels: List[str] = []
    bias: Dict[float, Dict[str, float]] = {}
    variance: Dict[float, Dict[str, float]] = {}
    for report in result.reports:
        value = report.sweep_value
        label = _series_label(report, single_cell)
        if label not in labels:
            labels.append(label)
        bias.setdefault(value, {})[label] = report.bias
        variance.setdefault(value, {})[label] = report.variance

    files = []
    for suffix, table in (("bias", bias), ("variance", variance)):
        rows = [
            [f"{value:g}"] + [_cell(table.get(value, {}), label) for label in labels]
            for value in values
        ]
        files.append(write_csv(out_dir / f"{config.name}_{suffix}.csv", header, [parameter] + labels, rows))
    return files


def _cell(row: Dict[str, float], label: str) -> str:
    return f"{row[label]:.6f}" if label in row else ""
