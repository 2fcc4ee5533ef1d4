"""
Moduł do wczytywania i zapisu grafów w formacie listy krawędzi.

Format: one edge per line as ``u v`` (integer ids), ``#`` starts a comment.
A ``# n=<count>`` comment declares the vertex count so isolated vertices
survive a round trip.
"""

import os
import re
from typing import Dict, Iterable, List, Optional, TextIO, Tuple

from ..structures.graph import Graph
from ..utils.errors import ParseError

_DECLARED_N = re.compile(r"^#\s*n\s*=\s*(\d+)\s*$")

DATA_DIRECTORY = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "data"))
EXAMPLE_GRAPH_FILENAME = "example12.edges"


def load_edge_list(source: Iterable[str], one_based: bool = False, n: Optional[int] = None) -> Graph:
    """
    Wczytuje graf z listy krawędzi.

    Args:
        source: Text stream (or any iterable of lines)
        one_based: Ids in the file start at 1 (they are shifted to 0-based)
        n: Vertex count; overrides a ``# n=`` declaration in the file

    Raises:
        ParseError: Self-loop, non-integer token or id outside the declared range,
                    reported with its line number.
    """
    offset = 1 if one_based else 0
    declared_n = n
    edges: List[Tuple[int, int, int]] = []

    for line_number, raw_line in enumerate(source, start=1):
        line = raw_line.strip()
        if not line:
            continue
        if line.startswith("#"):
            match = _DECLARED_N.match(line)
            if match and n is None:
                declared_n = int(match.group(1))
            continue

        tokens = line.split("#", 1)[0].split()
        if len(tokens) != 2:
            raise ParseError(line_number, f"expected 'u v', got {line!r}")
        try:
            u, v = int(tokens[0]) - offset, int(tokens[1]) - offset
        except ValueError:
            raise ParseError(line_number, f"non-integer vertex id in {line!r}") from None
        if u < 0 or v < 0:
            raise ParseError(line_number, f"negative vertex id in {line!r}")
        if u == v:
            raise ParseError(line_number, f"self-loop on vertex {tokens[0]}")
        edges.append((line_number, u, v))

    if declared_n is None:
        declared_n = 1 + max((max(u, v) for _, u, v in edges), default=-1)

    for line_number, u, v in edges:
        if u >= declared_n or v >= declared_n:
            raise ParseError(line_number, f"vertex id {max(u, v) + offset} exceeds declared n={declared_n}")

    return Graph.from_edges(declared_n, ((u, v) for _, u, v in edges))


def save_edge_list(g: Graph, sink: TextIO, header: Optional[Dict[str, object]] = None) -> None:
    """Zapisuje graf; każda krawędź raz, w kolejności rosnącej."""
    for key, value in (header or {}).items():
        sink.write(f"# {key}: {value}\n")
    sink.write(f"# n={g.n}\n")
    sink.write(f"# edges={g.edge_count}\n")
    for u, v in g.edges():
        sink.write(f"{u} {v}\n")


def load_edge_list_file(path: str, one_based: bool = False) -> Graph:
    if not os.path.exists(path):
        raise FileNotFoundError(f"Plik grafu nie został znaleziony: {path}")
    with open(path, "r", encoding="utf-8") as handle:
        return load_edge_list(handle, one_based=one_based)


def load_example_graph() -> Graph:
    """The 12-unit, 18-edge example graph (file ids are 1-based)."""
    return load_edge_list_file(os.path.join(DATA_DIRECTORY, EXAMPLE_GRAPH_FILENAME), one_based=True)
