import csv
import json
import subprocess
import sys

import click
import numpy as np
import pytest

import oracles
from corrscreen import montecarlo
from corrscreen.cli import _parse_float_list, _parse_int_list, main
from corrscreen.errors import EXIT_BAD_FLAGS, EXIT_INFEASIBLE, EXIT_IO
from corrscreen.spherecap import cap_probability


def _write_csv(path, values, prefix="v"):
    ids = [f"{prefix}{k + 1}" for k in range(values.shape[1])]
    np.savetxt(path, values, delimiter=",", header=",".join(ids), comments="")
    return path


@pytest.fixture
def data_csv(tmp_path):
    rng = np.random.default_rng(17)
    return _write_csv(tmp_path / "study.csv", rng.standard_normal((12, 6)))


def test_parse_int_list():
    assert _parse_int_list("10:35:5", "--n") == [10, 15, 20, 25, 30, 35]
    assert _parse_int_list("10,15,20", "--n") == [10, 15, 20]
    assert _parse_int_list("7", "--n") == [7]
    assert _parse_int_list("10:12", "--n") == [10, 11, 12]
    assert _parse_int_list("35:25:-5", "--n") == [35, 30, 25]
    for bad in ("x", "1:2:0", "1,two", "5:"):
        with pytest.raises(click.UsageError):
            _parse_int_list(bad, "--n")


def test_parse_float_list():
    got = _parse_float_list("0.1:0.3:0.1", "--alpha")
    assert got == pytest.approx([0.1, 0.2, 0.3])
    assert _parse_float_list("0.01,0.025", "--alpha") == [0.01, 0.025]
    assert _parse_float_list("0.5", "--alpha") == [0.5]
    with pytest.raises(click.UsageError):
        _parse_float_list("0.1:0.3:-0.1", "--alpha")
    with pytest.raises(click.UsageError):
        _parse_float_list("half", "--alpha")


def test_screen_cli_writes_all_outputs(tmp_path, data_csv, capsys):
    edges = tmp_path / "edges.csv"
    hits_path = tmp_path / "discoveries.csv"
    summary = tmp_path / "summary.json"
    uscores = tmp_path / "uscores.csv"
    argv = [
        "screen", "--input", str(data_csv), "--rho", "0.5",
        "--edges", str(edges), "--discoveries", str(hits_path),
        "--summary", str(summary), "--uscores", str(uscores),
    ]
    assert main(argv) == 0

    body = json.loads(summary.read_text())
    values = np.loadtxt(data_csv, delimiter=",", skiprows=1)
    hits, brute_edges = oracles.brute_auto(values, 0.5)
    assert body["N"] == len(hits)
    assert body["N_e"] == len(brute_edges)
    assert "edges" not in body and "edges_truncated" not in body
    assert body["provenance"]["subcommand"] == "screen"
    assert body["provenance"]["argv"] == argv
    assert body["provenance"]["tool"] == "corrscreen"

    with open(edges, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == len(brute_edges)
    assert set(rows[0]) == {"var_i", "var_j", "r", "treatment"}

    with open(hits_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [r["var"] for r in rows] == body["discoveries"]
    assert set(rows[0]) == {"var", "degree", "max_abs_r"}

    scores = np.loadtxt(uscores, delimiter=",", skiprows=1)
    assert scores.shape == (11, 6)
    assert np.allclose((scores**2).sum(axis=0), 1.0)


def test_screen_cli_summary_on_stdout(data_csv, capsys):
    assert main(["screen", "--input", str(data_csv), "--alpha", "0.1"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["threshold_kind"] == "fwer_solved"
    assert body["provenance"]["subcommand"] == "screen"


def test_screen_cli_persistent_manifest(tmp_path, capsys):
    rng = np.random.default_rng(23)
    _write_csv(tmp_path / "a.csv", rng.standard_normal((12, 5)))
    _write_csv(tmp_path / "b.csv", rng.standard_normal((14, 5)))
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps({
        "treatments": [
            {"label": "ctrl", "path": "a.csv"},
            {"label": "dose", "path": "b.csv"},
        ]
    }))
    uscores = tmp_path / "scores.csv"
    argv = [
        "screen", "--mode", "persistent", "--manifest", str(manifest),
        "--rho", "0.5,0.55", "--uscores", str(uscores),
    ]
    assert main(argv) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["treatment"] == "ctrl&dose"
    assert body["rho"] == [0.5, 0.55]
    assert body["n"] == [12, 14]
    assert (tmp_path / "scores.ctrl.csv").exists()
    assert (tmp_path / "scores.dose.csv").exists()
    assert not uscores.exists()


def test_screen_cli_usage_errors(tmp_path, data_csv, capsys):
    base = ["screen", "--input", str(data_csv)]
    assert main(base + ["--rho", "0.5", "--alpha", "0.05"]) == EXIT_BAD_FLAGS
    assert main(base) == EXIT_BAD_FLAGS
    assert main(["screen", "--rho", "0.5"]) == EXIT_BAD_FLAGS
    assert main(base + ["--rho", "0.5", "--manifest", "m.json"]) == EXIT_BAD_FLAGS
    assert main(base + ["--input", str(data_csv), "--rho", "0.5"]) == EXIT_BAD_FLAGS  # auto wants 1
    assert main(base + ["--rho", "0.5", "--bogus"]) == EXIT_BAD_FLAGS
    assert main(["frobnicate"]) == EXIT_BAD_FLAGS
    # The service rejecting a flag value the client passed through is
    # still a usage error.
    assert main(base + ["--rho", "1.5"]) == EXIT_BAD_FLAGS
    capsys.readouterr()


def test_screen_cli_infeasible_exit(tmp_path, capsys):
    rng = np.random.default_rng(29)
    a = _write_csv(tmp_path / "a.csv", rng.standard_normal((12, 5)))
    b = _write_csv(tmp_path / "b.csv", rng.standard_normal((9, 5)))
    code = main(["screen", "--mode", "cross", "--input", str(a), "--input", str(b), "--rho", "0.5"])
    assert code == EXIT_INFEASIBLE
    assert "n_a = n_b" in capsys.readouterr().err


def test_screen_cli_io_errors(tmp_path, data_csv, capsys):
    assert main(["screen", "--input", str(tmp_path / "nope.csv"), "--rho", "0.5"]) == EXIT_IO
    code = main(["screen", "--input", str(data_csv), "--rho", "0.5",
                 "--summary", str(tmp_path / "missing-dir" / "s.json")])
    assert code == EXIT_IO
    capsys.readouterr()


def test_screen_cli_server_unreachable(data_csv, capsys):
    code = main(["screen", "--input", str(data_csv), "--rho", "0.5",
                 "--server", "http://127.0.0.1:9"])
    assert code == EXIT_IO
    capsys.readouterr()


def test_phase_solve_cli(capsys):
    assert main(["phase", "solve", "--p", "500", "--n", "10", "--alpha", "0.05"]) == 0
    body = json.loads(capsys.readouterr().out)
    (report,) = body["reports"]
    assert report["kind"] == "fwer_solved"
    assert "lambda" in report
    assert body["provenance"]["subcommand"] == "phase solve"

    assert main(["phase", "solve", "--p", "500", "--n", "10", "--rho", "0.97"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["reports"][0]["kind"] == "user"

    assert main(["phase", "solve", "--p", "500", "--n", "10"]) == EXIT_BAD_FLAGS
    assert main(["phase", "solve", "--p", "500", "--n", "10", "--alpha", "0.05", "--critical"]) == EXIT_BAD_FLAGS
    assert main(["phase", "solve", "--mode", "persistent", "--p", "300", "--n", "10,14",
                 "--alpha", "0.05"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert len(body["reports"]) == 2
    assert body["reports"][0]["lambda"] == body["reports"][1]["lambda"]


def test_phase_solve_infeasible(capsys):
    assert main(["phase", "solve", "--p", "2", "--n", "10", "--alpha", "0.9"]) == EXIT_INFEASIBLE
    assert "cap probability" in capsys.readouterr().err


def test_phase_table1_cli(tmp_path, capsys):
    assert main(["phase", "table1", "--p", "500"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "n,rho_c"
    assert len(lines) == 10
    values = {int(row.split(",")[0]): float(row.split(",")[1]) for row in lines[1:]}
    assert values[500] == pytest.approx(0.197, abs=2e-3)
    assert values[6] == pytest.approx(0.9997, abs=2e-3)

    out = tmp_path / "table.csv"
    assert main(["phase", "table1", "--p", "500", "--n", "10,8", "--out", str(out)]) == 0
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [int(r["n"]) for r in rows] == [10, 8]


def test_power_table_cli(tmp_path, capsys):
    json_out = tmp_path / "cells.json"
    assert main(["power-table", "--p", "100", "--beta", "0.8", "--n", "10",
                 "--alpha", "0.05", "--json-out", str(json_out)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "n,alpha,rho,rho1,beta,p"
    assert len(lines) == 2
    n, alpha, rho, rho1, beta, p = lines[1].split(",")
    assert (n, alpha, beta, p) == ("10", "0.05", "0.8", "100")
    assert 0.0 < float(rho) < float(rho1) < 1.0
    cells = json.loads(json_out.read_text())["cells"]
    assert cells[0]["rho"] == pytest.approx(float(rho), abs=5e-7)


def test_p0_cli(capsys):
    assert main(["p0", "--rho", "0.97", "--n", "10"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["exact"] == pytest.approx(cap_probability(0.97, 10).p0, rel=1e-12)
    assert body["provenance"]["subcommand"] == "p0"


def test_simulate_cli_matches_library(capsys):
    argv = ["simulate", "--op", "fwer", "--p", "20", "--n", "8", "--rho", "0.6",
            "--replicates", "20", "--master-seed", "3", "--workers", "1"]
    assert main(argv) == 0
    body = json.loads(capsys.readouterr().out)
    direct = montecarlo.empirical_fwer(
        montecarlo.SimSpec(p=20, n=8, rho=0.6, replicates=20, master_seed=3)
    )
    assert body["report"] == direct.to_dict()
    assert body["provenance"]["master_seed"] == 3
    assert "curve" not in body  # None values are stripped


def test_simulate_cli_spec_file_with_overrides(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({
        "p": 20, "n": 8, "rho": 0.6, "replicates": 20, "master_seed": 3, "workers": 1,
    }))
    assert main(["simulate", "--spec", str(spec), "--replicates", "10"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["report"]["replicates"] == 10
    assert body["report"]["master_seed"] == 3


def test_simulate_cli_phase_curve_csv(tmp_path, capsys):
    curve = tmp_path / "curve.csv"
    argv = ["simulate", "--op", "phase-curve", "--p", "20", "--n", "8",
            "--rho-grid", "0.6,0.7", "--replicates", "10", "--workers", "1",
            "--curve-out", str(curve)]
    assert main(argv) == 0
    body = json.loads(capsys.readouterr().out)
    assert [pt["rho"] for pt in body["curve"]] == [0.6, 0.7]
    with open(curve, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 2
    assert float(rows[0]["mean_N_over_p"]) == body["curve"][0]["mean_N_over_p"]


def test_simulate_cli_usage_errors(tmp_path, capsys):
    assert main(["simulate", "--op", "fwer", "--rho", "0.6"]) == EXIT_BAD_FLAGS
    assert main(["simulate", "--op", "fwer", "--p", "20", "--n", "8", "--rho", "0.6",
                 "--workers", "1", "--curve-out", str(tmp_path / "c.csv")]) == EXIT_BAD_FLAGS
    # A combination the service's model layer rejects (student_t with no
    # dof) is a data problem, not a flag-syntax problem.
    assert main(["simulate", "--op", "fwer", "--p", "20", "--n", "8", "--rho", "0.6",
                 "--workers", "1", "--distribution", "student_t"]) == EXIT_INFEASIBLE
    capsys.readouterr()


def test_simulate_cli_missing_spec_file(capsys):
    assert main(["simulate", "--spec", "no-such-spec.json"]) == EXIT_IO
    capsys.readouterr()


def test_inclusion_graph_cli_from_subsets(tmp_path, capsys):
    subsets = tmp_path / "subsets.json"
    subsets.write_text(json.dumps({"A": ["x", "y", "z", "w"], "B": ["x", "y", "z"], "C": ["q"]}))
    dot = tmp_path / "graph.dot"
    edge_csv = tmp_path / "graph.csv"
    argv = ["inclusion-graph", "--subsets", str(subsets), "--cutoff", "0.7",
            "--dot", str(dot), "--edge-csv", str(edge_csv)]
    assert main(argv) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["nodes"] == {"A": 4, "B": 3, "C": 1}
    assert {(e["src"], e["dst"]) for e in body["edges"]} == {("A", "B"), ("B", "A")}
    assert dot.read_text().startswith("digraph inclusion {")
    with open(edge_csv, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 2


def test_inclusion_graph_cli_from_screen_summaries(tmp_path, capsys):
    for label, discoveries in (("ctrl", ["v1", "v2", "v3"]), ("dose", ["v1", "v2"])):
        (tmp_path / f"{label}.json").write_text(json.dumps({
            "treatment": label, "discoveries": discoveries,
        }))
    argv = ["inclusion-graph", "--result", str(tmp_path / "ctrl.json"),
            "--result", str(tmp_path / "dose.json"), "--cutoff", "0.6"]
    assert main(argv) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["nodes"] == {"ctrl": 3, "dose": 2}
    assert any(e["src"] == "dose" and e["full_inclusion"] for e in body["edges"])


def test_inclusion_graph_cli_usage_errors(tmp_path, capsys):
    summary = tmp_path / "one.json"
    summary.write_text(json.dumps({"treatment": "a", "discoveries": []}))
    subsets = tmp_path / "subsets.json"
    subsets.write_text(json.dumps({"A": [], "B": []}))
    assert main(["inclusion-graph", "--result", str(summary)]) == EXIT_BAD_FLAGS
    assert main(["inclusion-graph", "--result", str(summary), "--subsets", str(subsets)]) == EXIT_BAD_FLAGS
    assert main(["inclusion-graph", "--result", str(summary), "--result", str(summary)]) == EXIT_BAD_FLAGS
    capsys.readouterr()


def test_no_args_prints_help(capsys):
    assert main([]) == 0
    assert "Usage" in capsys.readouterr().out


def _run_script(*args):
    return subprocess.run(
        ["corrscreen", *args], capture_output=True, text=True, timeout=120
    )


def test_console_script_round_trip(tmp_path):
    done = _run_script("--version")
    assert done.returncode == 0
    assert "corrscreen" in done.stdout

    done = _run_script("p0", "--rho", "0.5", "--n", "10")
    assert done.returncode == 0
    assert json.loads(done.stdout)["n"] == 10

    assert _run_script("--definitely-not-a-flag").returncode == EXIT_BAD_FLAGS
    assert _run_script("screen", "--input", str(tmp_path / "absent.csv"),
                       "--rho", "0.5").returncode == EXIT_IO
