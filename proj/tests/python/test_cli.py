import csv
import json
import os
import subprocess

import pytest

CLI = os.environ.get("SETCD_CLI", "setcd")
HEADER = ["iter", "node", "edge", "grad_sq", "suboptimality"]
SCHEMA = {"setting", "n", "N_max", "rho_U", "rho_G", "ratio", "bound_su", "bound_sgs", "seeds", "iterations"}


def cli(*args, check=True):
    proc = subprocess.run([CLI, *map(str, args)], capture_output=True, text=True)
    if check and proc.returncode != 0:
        raise AssertionError(f"{args} exited {proc.returncode}: {proc.stderr}")
    return proc


def test_gen_graph(tmp_path):
    out = cli("gen-graph", "--n", 12, "--degree", 4, "--out", tmp_path)
    g = json.loads(out.stdout)
    assert g["n"] == 12
    assert len(g["edges"]) == 24
    assert json.loads((tmp_path / "graph.json").read_text()) == g
    r = json.loads(cli("gen-graph", "--type", "random", "--n", 6, "--extra-edges", 2, "--seed", 3).stdout)
    assert len(r["edges"]) == 7


def test_run_and_estimate_rate(tmp_path):
    cli("gen-graph", "--n", 8, "--degree", 4, "--out", tmp_path)
    spec = {
        "setting": "decentralized",
        "graph": {"n": 2, "edges": [[0, 1]]},
        "functions": {"type": "quadratic", "d": 3, "Q": "scaled_identity", "c": 1.0},
        "d": 3,
        "seed": 5,
        "init": "gaussian",
    }
    (tmp_path / "problem.json").write_text(json.dumps(spec))
    out = tmp_path / "run"
    summary = json.loads(
        cli(
            "run", "--problem", tmp_path / "problem.json", "--graph-file", tmp_path / "graph.json",
            "--algorithm", "sgs", "--iterations", 3000, "--seed", 2, "--out", out,
        ).stdout
    )
    assert summary["algorithm"] == "sgs"
    assert "timestamp" in summary
    trace = out / "sgs_seed2.csv"
    with open(trace) as f:
        rows = list(csv.reader(f))
    assert rows[0] == HEADER
    assert len(rows) == 3001
    values = [float(r[4]) for r in rows[1:]]
    assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))
    rate = json.loads(cli("estimate-rate", "--trace", trace).stdout)
    assert 0 < rate["rho"] < 1


def test_experiment_summary_schema_and_determinism(tmp_path):
    args = ["experiment-paramserver", "--sets", 12, "--set-size", 8, "--seeds", 2, "--iterations", 2000]
    a = json.loads(cli(*args, "--out", tmp_path).stdout)
    b = json.loads(cli(*args).stdout)
    assert SCHEMA <= a.keys()
    a.pop("timestamp")
    b.pop("timestamp")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert (tmp_path / "summary_paramserver_12x8.json").exists()


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"degree": 12, "seeds": 1, "iterations": 300, "record_points": 100}))
    s = json.loads(cli("--config", cfg, "experiment-decentralized").stdout)
    assert s["N_max"] == 12
    assert s["seeds"] == 1
    s = json.loads(cli("experiment-decentralized", "--config", cfg, "--seeds", 2).stdout)
    assert s["seeds"] == 2
    assert s["iterations"] == 300


def test_verify_fast(tmp_path):
    proc = cli("verify", "--out", tmp_path)
    report = json.loads(proc.stdout)
    assert report["passed"]
    assert {c["name"] for c in report["checks"]} >= {
        "projector", "gradient_in_range", "sm_norm_axioms", "chain_inequality",
        "cycle_null_vector", "sm_dual_lower_bound", "corrupted_projector_rejected",
    }
    assert (tmp_path / "verify.json").exists()


def test_errors_exit_nonzero(tmp_path):
    assert cli("experiment-paramserver", "--sets", 5, "--set-size", 3, check=False).returncode == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    proc = cli("estimate-rate", "--trace", bad, check=False)
    assert proc.returncode == 2
    assert "ParseError" in proc.stderr
    assert cli("no-such-command", check=False).returncode != 0
