"""Tests for the graph type, random generators and edge-list files."""

import io

import networkx as nx
import numpy as np
import pytest

from isdesign.engine.edge_list import load_edge_list, save_edge_list
from isdesign.engine.generators import gen_barabasi_albert, gen_erdos_renyi, gen_small_world, generate
from isdesign.structures import Graph, GraphFamily
from isdesign.utils.errors import ParameterError, ParseError


def assert_simple(g: Graph):
    for v in range(g.n):
        neighbors = g.neighbors(v)
        assert v not in neighbors
        assert len(set(neighbors)) == len(neighbors)
        for u in neighbors:
            assert v in g.neighbors(u)
    assert g.edge_count == int(g.degrees().sum()) // 2


def test_graph_rejects_asymmetric_adjacency():
    with pytest.raises(ParameterError):
        Graph(2, ((1,), ()))


def test_graph_rejects_self_loop():
    with pytest.raises(ParameterError):
        Graph.from_edges(3, [(1, 1)])


def test_graph_queries(example_graph):
    assert example_graph.n == 12
    assert example_graph.edge_count == 18
    assert example_graph.degree(0) == 3
    assert example_graph.has_edge(0, 1) and not example_graph.has_edge(0, 2)
    assert example_graph.mean_degree() == pytest.approx(3.0)
    assert_simple(example_graph)


def test_erdos_renyi_extremes():
    assert gen_erdos_renyi(5, 0.0, seed=3).edge_count == 0
    assert gen_erdos_renyi(5, 1.0, seed=3).edge_count == 10


def test_erdos_renyi_rejects_bad_probability():
    with pytest.raises(ParameterError):
        gen_erdos_renyi(5, 1.5, seed=0)


def test_erdos_renyi_is_deterministic():
    assert gen_erdos_renyi(60, 0.1, seed=5) == gen_erdos_renyi(60, 0.1, seed=5)


def test_erdos_renyi_mean_edge_count():
    counts = np.array([gen_erdos_renyi(200, 0.1, seed=s).edge_count for s in range(300)])
    expected = 19900 * 0.1
    standard_error = np.sqrt(19900 * 0.1 * 0.9 / len(counts))
    assert abs(counts.mean() - expected) < 3 * standard_error


def test_barabasi_albert_small_and_tree():
    g = gen_barabasi_albert(2, 1, seed=0)
    assert list(g.edges()) == [(0, 1)]

    tree = gen_barabasi_albert(100, 1, seed=4)
    assert tree.edge_count == 99
    assert nx.is_tree(tree.to_networkx())
    assert_simple(tree)


def test_barabasi_albert_rejects_m_at_least_n():
    with pytest.raises(ParameterError):
        gen_barabasi_albert(3, 3, seed=0)


def test_barabasi_albert_heavier_tail_than_erdos_renyi():
    ba = [int(gen_barabasi_albert(75, 1, seed=s).degrees().max()) for s in range(100)]
    er = [int(gen_erdos_renyi(75, 2 / 75, seed=s).degrees().max()) for s in range(100)]
    assert np.mean(ba) > np.mean(er)


def test_small_world_lattice_and_rewiring():
    cycle = gen_small_world(8, 2, 0.0, seed=0)
    assert all(cycle.degree(v) == 2 for v in range(8))
    assert gen_small_world(50, 4, 0.0, seed=0).edge_count == 100

    rewired = gen_small_world(100, 4, 0.05, seed=9)
    assert rewired.edge_count == 200
    assert rewired.mean_degree() == pytest.approx(4.0)
    assert_simple(rewired)


@pytest.mark.parametrize("k, n", [(3, 10), (10, 10), (0, 10)])
def test_small_world_rejects_bad_degree(k, n):
    with pytest.raises(ParameterError):
        gen_small_world(n, k, 0.1, seed=0)


def test_generate_dispatch_requires_family_parameters():
    assert generate(GraphFamily.BARABASI_ALBERT, 10, seed=1, m=1).edge_count == 9
    with pytest.raises(ParameterError):
        generate(GraphFamily.ERDOS_RENYI, 10, seed=1)


def test_load_edge_list_path():
    g = load_edge_list(io.StringIO("0 1\n1 2\n"))
    assert g.n == 3
    assert list(g.edges()) == [(0, 1), (1, 2)]


def test_edge_list_round_trip_keeps_isolated_vertices():
    g = gen_erdos_renyi(50, 0.1, seed=2)
    sink = io.StringIO()
    save_edge_list(g, sink, {"seed": 2})
    sink.seek(0)
    assert load_edge_list(sink) == g


@pytest.mark.parametrize(
    "text, line_number",
    [
        ("0 1\n2 2\n", 2),
        ("0 1\n1 x\n", 2),
        ("# n=3\n0 1\n1 3\n", 3),
        ("0 1 2\n", 1),
    ],
)
def test_load_edge_list_reports_line_number(text, line_number):
    with pytest.raises(ParseError) as excinfo:
        load_edge_list(io.StringIO(text))
    assert excinfo.value.line_number == line_number
