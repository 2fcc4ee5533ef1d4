"""Logging system for design runs and Monte-Carlo benchmarks."""

import logging
import sys
import threading
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

import colorlog


class ExperimentEventType(Enum):
    """Event types tracked in the event log."""

    RUN_START = "RUN_START"
    RUN_END = "RUN_END"
    GRAPH_GENERATED = "GRAPH_GENERATED"
    PARTITION_BUILT = "PARTITION_BUILT"
    OPTIMIZER_FINISHED = "OPTIMIZER_FINISHED"
    DESIGN_BUILT = "DESIGN_BUILT"
    REPLICATION_FAILED = "REPLICATION_FAILED"
    DESIGN_SKIPPED = "DESIGN_SKIPPED"
    FILE_WRITTEN = "FILE_WRITTEN"


class ExperimentLogger:
    """Main logging class: console, optional log files, run statistics."""

    def __init__(self, log_dir: Optional[str] = None, log_level: str = "WARNING"):
        """
        Initialize the experiment logger.

        Args:
            log_dir: Directory for log files; ``None`` logs to the console only
            log_level: Minimum log level to record
        """
        self.log_dir = Path(log_dir) if log_dir else None
        if self.log_dir is not None:
            self.log_dir.mkdir(parents=True, exist_ok=True)

        self.log_level = getattr(logging, log_level.upper())
        self.session_id = datetime.now().strftime("%Y%m%d_%H%M%S")

        self.performance_metrics: Dict[str, Any] = {
            "replication_times": [],
            "run_start_time": None,
            "run_end_time": None,
        }

        self.run_stats = {
            "graphs_generated": 0,
            "partitions_built": 0,
            "optimizer_runs": 0,
            "optimizer_flips": 0,
            "replications_failed": 0,
            "designs_skipped": 0,
            "files_written": 0,
        }

        self._stats_lock = threading.Lock()
        self._setup_loggers()

    def _setup_loggers(self):
        """Main, event and performance loggers; files only when a log directory is set."""
        self.main_logger = self._create_logger(
            "isdesign_main",
            f"run_{self.session_id}.log",
            "%(asctime)s | %(levelname)-8s | %(message)s",
            console=True,
        )
        self.event_logger = self._create_logger(
            "isdesign_events",
            f"events_{self.session_id}.log",
            "%(asctime)s | %(event_type)-18s | %(message)s",
        )
        self.performance_logger = self._create_logger(
            "isdesign_performance",
            f"performance_{self.session_id}.log",
            "%(asctime)s | %(metric_type)-16s | %(message)s",
        )

    def _create_logger(
        self, name: str, filename: str, fmt: str, console: bool = False
    ) -> logging.Logger:
        logger = logging.getLogger(name)
        logger.setLevel(self.log_level)
        logger.propagate = False
        logger.handlers.clear()

        if self.log_dir is not None:
            file_handler = logging.FileHandler(self.log_dir / filename, encoding="utf-8")
            file_handler.setFormatter(logging.Formatter(fmt, datefmt="%H:%M:%S"))
            logger.addHandler(file_handler)

        if console:
            console_handler = colorlog.StreamHandler(sys.stderr)
            console_handler.setFormatter(
                colorlog.ColoredFormatter(
                    "%(log_color)s" + fmt,
                    datefmt="%H:%M:%S",
                    log_colors={
                        "DEBUG": "cyan",
                        "INFO": "green",
                        "WARNING": "yellow",
                        "ERROR": "red",
                        "CRITICAL": "bold_red",
                    },
                )
            )
            logger.addHandler(console_handler)

        return logger

    def debug(self, message: str):
        """Log debug message."""
        self.main_logger.debug(message)

    def info(self, message: str):
        """Log info message."""
        self.main_logger.info(message)

    def warning(self, message: str):
        """Log warning message."""
        self.main_logger.warning(message)

    def error(self, message: str):
        """Log error message."""
        self.main_logger.error(message)

    def log_event(self, event_type: ExperimentEventType, message: str, **details):
        """Log a run event and update the statistics."""
        suffix = f" {details}" if details else ""
        self.event_logger.info(message + suffix, extra={"event_type": event_type.value})
        self._update_stats(event_type, details)

    def log_performance(self, metric_type: str, value: float):
        """Log a timing or other performance metric."""
        self.performance_logger.info(
            f"{metric_type}: {value:.6f}", extra={"metric_type": metric_type}
        )
        if metric_type == "replication_time":
            with self._stats_lock:
                self.performance_metrics["replication_times"].append(float(value))

    def log_optimizer(self, objective_name: str, objective: float, restarts: int, flips: int, exact: bool):
        """Log the outcome of one optimizer call."""
        method = "enumeration" if exact else "local search"
        self.log_event(
            ExperimentEventType.OPTIMIZER_FINISHED,
            f"{objective_name} via {method}: objective={objective:.6g}",
            restarts=restarts,
            flips=flips,
        )
        self.debug(f"{objective_name}: objective={objective:.6g} restarts={restarts} flips={flips}")

    def start_run(self, **run_info):
        """Mark the start of a run."""
        self.performance_metrics["run_start_time"] = datetime.now()
        self.log_event(ExperimentEventType.RUN_START, f"Run started, session {self.session_id}")
        self.info(f"Run configuration: {run_info}")

    def end_run(self, **run_results):
        """Mark the end of a run and write the summary."""
        self.performance_metrics["run_end_time"] = datetime.now()
        self.log_event(ExperimentEventType.RUN_END, "Run finished")
        self._write_summary(run_results)

    def _update_stats(self, event_type: ExperimentEventType, details: Dict[str, Any]):
        """Update run statistics; called from replication worker threads."""
        with self._stats_lock:
            self._count_event(event_type, details)

    def _count_event(self, event_type: ExperimentEventType, details: Dict[str, Any]):
        if event_type == ExperimentEventType.GRAPH_GENERATED:
            self.run_stats["graphs_generated"] += 1
        elif event_type == ExperimentEventType.PARTITION_BUILT:
            self.run_stats["partitions_built"] += 1
        elif event_type == ExperimentEventType.OPTIMIZER_FINISHED:
            self.run_stats["optimizer_runs"] += 1
            self.run_stats["optimizer_flips"] += int(details.get("flips", 0))
        elif event_type == ExperimentEventType.REPLICATION_FAILED:
            self.run_stats["replications_failed"] += 1
        elif event_type == ExperimentEventType.DESIGN_SKIPPED:
            self.run_stats["designs_skipped"] += 1
        elif event_type == ExperimentEventType.FILE_WRITTEN:
            self.run_stats["files_written"] += 1

    def _write_summary(self, run_results: Dict[str, Any]) -> str:
        start = self.performance_metrics["run_start_time"]
        end = self.performance_metrics["run_end_time"]
        total_time = (end - start).total_seconds() if start and end else 0.0
        times: List[float] = self.performance_metrics["replication_times"]
        avg_time = sum(times) / len(times) if times else 0.0

        summary = f"""
=== RUN SUMMARY ===
Session ID: {self.session_id}
Total Run Time: {total_time:.2f} seconds
Replications Timed: {len(times)}
Average Replication Time: {avg_time:.4f} seconds

=== STATISTICS ===
Graphs Generated: {self.run_stats["graphs_generated"]}
Partitions Built: {self.run_stats["partitions_built"]}
Optimizer Runs: {self.run_stats["optimizer_runs"]}
Optimizer Flips: {self.run_stats["optimizer_flips"]}
Failed Replications: {self.run_stats["replications_failed"]}
Skipped Designs: {self.run_stats["designs_skipped"]}
Files Written: {self.run_stats["files_written"]}

=== RESULTS ===
{run_results}
"""
        self.info(summary)
        if self.log_dir is not None:
            summary_file = self.log_dir / f"summary_{self.session_id}.txt"
            summary_file.write_text(summary, encoding="utf-8")
        return summary


# Global logger instance
experiment_logger = ExperimentLogger()


def set_log_level(level: str, log_dir: Optional[str] = None):
    """Replace the global logger (level and, optionally, a log directory)."""
    global experiment_logger
    experiment_logger = ExperimentLogger(log_dir=log_dir, log_level=level)


def get_logger() -> ExperimentLogger:
    """Get the global logger instance."""
    return experiment_logger
