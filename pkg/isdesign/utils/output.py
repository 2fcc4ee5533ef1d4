"""Result files: commented headers and CSV tables"""

import csv
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, TextIO, Tuple, Union

from .. import __version__
from .logger import ExperimentEventType, get_logger


def header_lines(command: str, **params: Any) -> List[str]:
    """``# key: value`` lines naming the tool version, command and every parameter."""
    lines = [f"# isdesign {__version__}", f"# command: {command}"]
    lines.extend(f"# {key}: {value}" for key, value in params.items())
    return lines


def write_rows(sink: TextIO, header: Sequence[str], columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    for line in header:
        sink.write(line + "\n")
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)


def write_csv(
    path: Union[str, Path],
    header: Sequence[str],
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as sink:
        write_rows(sink, header, columns, rows)
    get_logger().log_event(ExperimentEventType.FILE_WRITTEN, f"Wrote {path}")
    return path


def read_csv(path: Union[str, Path]) -> Tuple[Dict[str, str], List[Dict[str, str]]]:
    """
    Read a CSV file that may start with ``# key: value`` comment lines.

    Returns:
        (header values, rows as dicts keyed by column name)
    """
    header: Dict[str, str] = {}
    body: List[str] = []
    with Path(path).open(encoding="utf-8") as source:
        for line in source:
            if line.startswith("#"):
                key, _, value = line[1:].partition(":")
                header[key.strip()] = value.strip()
            elif line.strip():
                body.append(line)
    return header, list(csv.DictReader(body))
