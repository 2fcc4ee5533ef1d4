"""Tests for the command-line interface."""

import json
import os

import numpy as np
import pytest

from isdesign.cli import build_parser, main
from isdesign.engine.edge_list import DATA_DIRECTORY, EXAMPLE_GRAPH_FILENAME, load_edge_list_file
from isdesign.engine.estimators import predicted_var_total
from isdesign.engine.independent_set import full_exposure
from isdesign.utils.output import read_csv

EXAMPLE_GRAPH_PATH = os.path.join(DATA_DIRECTORY, EXAMPLE_GRAPH_FILENAME)


def run_design(tmp_path, *flags, name="design.csv"):
    out = tmp_path / name
    code = main(["design", "--graph", EXAMPLE_GRAPH_PATH, "--one-based", "--out", str(out), *flags])
    assert code == 0
    return read_csv(out)


def test_generate_is_deterministic(tmp_path, capsys):
    args = ["generate", "--family", "er", "--n", "30", "--p", "0.2", "--seed", "3"]
    assert main(args + ["--out", str(tmp_path / "a.edges")]) == 0
    assert main(args + ["--out", str(tmp_path / "b.edges")]) == 0
    assert (tmp_path / "a.edges").read_text() == (tmp_path / "b.edges").read_text()
    assert load_edge_list_file(str(tmp_path / "a.edges")).n == 30
    assert capsys.readouterr().out.startswith("n=30 edges=")


def test_generate_empty_graph(tmp_path, capsys):
    assert main(["generate", "--family", "er", "--n", "10", "--p", "0", "--out", str(tmp_path / "g.edges")]) == 0
    assert "edges=0 " in capsys.readouterr().out
    assert load_edge_list_file(str(tmp_path / "g.edges")).n == 10


def test_generate_requires_family_parameters(tmp_path):
    assert main(["generate", "--family", "ba", "--n", "10", "--out", str(tmp_path / "g.edges")]) == 2


def test_design_direct_at_zero_target(tmp_path):
    header, rows = run_design(tmp_path, "--estimand", "direct", "--rho-target", "0")
    assert header["command"] == "design"
    assert header["diag.objective"] == "0.0"
    assert header["diag.norm_delta"] == "0.0"
    assert sorted(int(row["vertex_id"]) for row in rows) == list(range(1, 13))
    assert all(row["z"] == "0" for row in rows if row["role"] == "auxiliary")
    assert all(float(row["rho"]) == 0.0 for row in rows if row["role"] != "auxiliary")


def test_design_total_covers_every_vertex(tmp_path):
    header, rows = run_design(tmp_path, "--estimand", "total")
    assert len(rows) == 12
    assert {row["role"] for row in rows} <= {"independent", "auxiliary", "withheld"}
    assert int(header["diag.n_independent"]) + int(header["diag.n_auxiliary"]) == 12
    assert "diag.corr_z_rho" in header


def test_design_is_reproducible(tmp_path):
    _, first = run_design(tmp_path, "--estimand", "spillover", "--seed", "5", name="a.csv")
    _, second = run_design(tmp_path, "--estimand", "spillover", "--seed", "5", name="b.csv")
    assert first == second


def test_design_rejects_rho_target_without_direct(tmp_path):
    code = main(["design", "--graph", EXAMPLE_GRAPH_PATH, "--one-based", "--estimand", "total", "--rho-target", "0.5"])
    assert code == 2


def write_outcomes(path, rows, skip=0):
    lines = ["vertex_id,y"]
    for row in rows[skip:]:
        rho = float(row["rho"]) if row["rho"] else 0.0
        z = int(row["z"]) if row["z"] else 0
        lines.append(f"{row['vertex_id']},{1 + 20 * z + 10 * rho!r}")
    path.write_text("\n".join(lines) + "\n")


def test_estimate_noiseless_spillover(tmp_path):
    _, rows = run_design(tmp_path, "--estimand", "spillover")
    write_outcomes(tmp_path / "y.csv", rows)
    out = tmp_path / "estimate.csv"
    code = main(
        ["estimate", "--design", str(tmp_path / "design.csv"), "--outcomes", str(tmp_path / "y.csv"), "--sigma", "0.5", "--out", str(out)]
    )
    assert code == 0
    _, estimate = read_csv(out)
    assert estimate[0]["estimand"] == "spillover(1,1,0)"
    assert float(estimate[0]["point"]) == pytest.approx(10.0, abs=1e-8)
    assert float(estimate[0]["predicted_variance"]) > 0


def test_estimate_missing_outcomes_exits_with_data_error(tmp_path, capsys):
    _, rows = run_design(tmp_path, "--estimand", "spillover")
    independent = [row for row in rows if row["role"] == "independent"]
    write_outcomes(tmp_path / "y.csv", independent, skip=1)
    code = main(["estimate", "--design", str(tmp_path / "design.csv"), "--outcomes", str(tmp_path / "y.csv")])
    assert code == 3
    assert independent[0]["vertex_id"] in capsys.readouterr().err


def test_simulate_writes_one_report_row(tmp_path):
    out = tmp_path / "report.csv"
    code = main(
        [
            "simulate", "--family", "er", "--n", "30", "--p", "0.2",
            "--design-name", "CR", "--estimand", "spillover",
            "--reps", "4", "--graphs", "2", "--seed", "9", "--out", str(out),
        ]
    )
    assert code == 0
    header, rows = read_csv(out)
    assert header["design"] == "CR"
    assert len(rows) == 1
    assert rows[0]["graph"] == "ER" and rows[0]["reps"] == "4"


def test_simulate_on_fixed_graph(tmp_path):
    out = tmp_path / "report.csv"
    code = main(
        [
            "simulate", "--graph", EXAMPLE_GRAPH_PATH, "--one-based",
            "--estimand", "direct", "--rho-target", "0.5",
            "--reps", "3", "--out", str(out),
        ]
    )
    assert code == 0
    _, rows = read_csv(out)
    assert rows[0]["graph"] == "graph"
    assert rows[0]["params"] == "n=12 edges=18"


def test_benchmark_invalid_config_exits_2(tmp_path):
    config = tmp_path / "bad.json"
    config.write_text(json.dumps({"estimands": ["spillover"], "graphs": [{"family": "er", "n": 20, "p": 0.1}], "designs": []}))
    assert main(["benchmark", "--config", str(config), "--out", str(tmp_path / "out")]) == 2


def test_benchmark_with_overrides(tmp_path, capsys):
    config = tmp_path / "tiny.json"
    config.write_text(
        json.dumps(
            {
                "name": "tiny",
                "estimands": ["direct"],
                "graphs": [{"family": "ba", "n": 30, "m": 2}],
                "designs": ["CR", "EgoClusters"],
            }
        )
    )
    code = main(["benchmark", "--config", str(config), "--out", str(tmp_path / "out"), "--reps", "3", "--seed", "2"])
    assert code == 0
    captured = capsys.readouterr()
    assert "tiny_direct.csv" in captured.out
    assert "skipped: EgoClusters/direct" in captured.err
    _, rows = read_csv(tmp_path / "out" / "tiny_direct.csv")
    assert [row["reps"] for row in rows] == ["3"]


def test_missing_file_exits_2(tmp_path):
    assert main(["design", "--graph", str(tmp_path / "none.edges"), "--estimand", "total"]) == 2


def test_seed_defaults():
    parser = build_parser()
    assert parser.parse_args(["design", "--graph", "g.edges", "--estimand", "total"]).seed == 0
    assert parser.parse_args(["simulate", "--estimand", "total"]).seed == 0
    assert parser.parse_args(["benchmark", "--config", "c.json", "--out", "o"]).seed is None
    assert parser.parse_args(["benchmark", "--config", "c.json", "--out", "o", "--seed", "4"]).seed == 4


def test_negative_seed_exits_2(tmp_path, capsys):
    code = main(["generate", "--family", "er", "--n", "10", "--p", "0.2", "--seed", "-1", "--out", str(tmp_path / "g.edges")])
    assert code == 2
    assert "--seed -1" in capsys.readouterr().err


def test_design_rho_column_matches_auxiliary_assignment(tmp_path):
    _, rows = run_design(tmp_path, "--estimand", "spillover")
    g = load_edge_list_file(EXAMPLE_GRAPH_PATH, one_based=True)
    z_all = np.zeros(g.n, dtype=np.int64)
    for row in rows:
        if row["role"] == "auxiliary":
            z_all[int(row["vertex_id"]) - 1] = int(row["z"])
    rho_all = full_exposure(g, z_all)
    measured = [row for row in rows if row["role"] != "auxiliary"]
    assert measured
    for row in measured:
        assert float(row["rho"]) == pytest.approx(rho_all[int(row["vertex_id"]) - 1], abs=1e-12)


def test_design_direct_bias_bound(tmp_path):
    header, rows = run_design(tmp_path, "--estimand", "direct", "--rho-target", "0.5", "--lipschitz", "10")
    rho = np.array([float(row["rho"]) for row in rows if row["role"] == "independent"])
    assert header["lipschitz"] == "10.0"
    assert float(header["diag.bias_bound"]) == pytest.approx(2 * 10 / len(rho) * np.abs(rho - 0.5).sum())
    assert "diag.predicted_variance" not in header


def test_design_spillover_predicted_variance(tmp_path):
    header, rows = run_design(tmp_path, "--estimand", "spillover", "--sigma", "0.5")
    rho = np.array([float(row["rho"]) for row in rows if row["role"] == "independent"])
    assert float(header["diag.predicted_variance"]) == pytest.approx(0.25 / (len(rho) * rho.var()))
    assert "diag.bias_bound" not in header


def test_design_total_predicted_variance(tmp_path):
    header, rows = run_design(tmp_path, "--estimand", "total", "--sigma", "0.5")
    units = [row for row in rows if row["role"] == "independent"]
    z = np.array([int(row["z"]) for row in units])
    rho = np.array([float(row["rho"]) for row in units])
    if header["diag.predicted_variance"] == "undefined":
        assert z.var() == 0.0 or abs(np.corrcoef(z, rho)[0, 1]) == pytest.approx(1.0)
    else:
        expected = predicted_var_total(0.5, z, rho)
        assert float(header["diag.predicted_variance"]) == pytest.approx(expected.variance)
        assert float(header["diag.predicted_variance"]) >= expected.floor - 1e-12


def test_design_without_sigma_has_no_closed_form_diagnostics(tmp_path):
    header, _ = run_design(tmp_path, "--estimand", "spillover")
    assert "diag.predicted_variance" not in header
    assert header["sigma"] == ""
