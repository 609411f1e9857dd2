import json
import math
import subprocess
import sys

import numpy as np
import pytest

from georadon.cli import main


def _write_job(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_transform_job_value_and_determinism(tmp_path):
    job = _write_job(tmp_path, "job.json", {
        "command": "transform",
        "model": "hyperboloid",
        "params": {"n": 3, "j": 0, "k": 1},
        "profile": {"family": "closed_form", "id": "hyper_cap",
                    "alpha": 2.0, "a": 2.0},
        "grid": {"kind": "cosh", "lo": 1.0, "hi": 2.0, "count": 50},
        "output": {"path": str(tmp_path / "out.csv"), "format": "csv"},
    })
    assert main(["transform", "--job", job]) == 0
    text1 = (tmp_path / "out.csv").read_text()
    first = text1.splitlines()[2].split(",")
    assert abs(float(first[1]) - math.sqrt(3.0)) < 1e-8
    assert text1.splitlines()[0].startswith("# model=hyperboloid")
    assert "variable=" in text1.splitlines()[0]
    assert main(["transform", "--job", job,
                 "--out", str(tmp_path / "out2.csv")]) == 0
    assert text1 == (tmp_path / "out2.csv").read_text()


def test_json_format_mirror(tmp_path):
    job = _write_job(tmp_path, "job.json", {
        "command": "table",
        "model": "euclidean",
        "profile": {"family": "gaussian", "sigma": 1.0},
        "grid": {"lo": 0.0, "hi": 2.0, "count": 5},
        "output": {"path": str(tmp_path / "t.json"), "format": "json"},
    })
    assert main(["table", "--job", job]) == 0
    doc = json.loads((tmp_path / "t.json").read_text())
    assert doc["meta"]["model"] == "euclidean_affine"
    assert abs(doc["columns"]["value"][0] - 1.0) < 1e-12


def test_invalid_params_exit_2(tmp_path):
    job = _write_job(tmp_path, "bad.json", {
        "command": "transform", "model": "hyperboloid",
        "params": {"n": 3, "j": 1, "k": 1},
        "profile": {"family": "gaussian"},
        "grid": {"lo": 1.0, "hi": 2.0, "count": 5},
        "output": {"path": str(tmp_path / "x.csv")},
    })
    assert main(["transform", "--job", job]) == 2


def test_divergent_profile_exit_3(tmp_path):
    job = _write_job(tmp_path, "div.json", {
        "command": "transform", "model": "euclidean",
        "params": {"n": 4, "j": 0, "k": 2},
        "profile": {"family": "power", "p": 0.0},
        "grid": {"lo": 0.5, "hi": 2.0, "count": 5},
        "output": {"path": str(tmp_path / "x.csv")},
    })
    assert main(["transform", "--job", job]) == 3


def test_convert_job(tmp_path):
    job = _write_job(tmp_path, "conv.json", {
        "command": "convert",
        "convert": {"from": "euclidean", "to": "elliptic"},
        "grid": {"lo": 0.0, "hi": 1.0, "count": 3},
        "output": {"path": str(tmp_path / "c.csv")},
    })
    assert main(["convert", "--job", job]) == 0
    rows = (tmp_path / "c.csv").read_text().splitlines()
    assert abs(float(rows[-1].split(",")[1]) - math.pi / 4) < 1e-14


def test_invert_job(tmp_path):
    # the forward transform of the gaussian has a closed form; ask the CLI
    # to invert it and compare with the gaussian
    n, j, k = 4, 0, 2
    s = list(np.linspace(0.05, 3.5, 24))
    vals = [math.pi * math.exp(-x * x) for x in s]
    job = _write_job(tmp_path, "inv.json", {
        "command": "invert", "model": "euclidean",
        "params": {"n": n, "j": j, "k": k},
        "profile": {"family": "grid", "x": s, "y": vals, "order": 5,
                    "decay_hint": 8.0},
        "grid": {"lo": 0.3, "hi": 2.0, "count": 12},
        "check_residual": False,
        "output": {"path": str(tmp_path / "inv.csv")},
    })
    assert main(["invert", "--job", job]) == 0
    rows = (tmp_path / "inv.csv").read_text().splitlines()[2:]
    for row in rows[::4]:
        coord, value = (float(c) for c in row.split(","))
        assert abs(value - math.exp(-coord * coord)) < 2e-3


def test_mc_duality_job(tmp_path):
    job = _write_job(tmp_path, "dual.json", {
        "command": "mc-duality",
        "params": {"n": 3, "j": 0, "k": 1},
        "duality": {"which": "affine"},
        "profile": {"family": "gaussian"},
        "mc": {"seed": 5, "n_samples": 20000},
        "output": {"path": str(tmp_path / "d.csv")},
    })
    assert main(["mc-duality", "--job", job]) == 0
    rows = (tmp_path / "d.csv").read_text().splitlines()
    lhs = float(rows[2].split(",")[1])
    rhs = float(rows[3].split(",")[1])
    se = math.hypot(float(rows[2].split(",")[2]), float(rows[3].split(",")[2]))
    assert abs(lhs - rhs) <= 4 * se


def test_chain_job(tmp_path):
    job = _write_job(tmp_path, "chain.json", {
        "command": "chain",
        "params": {"n": 3, "j": 1, "k": 2},
        "chain": {"m": 1, "h": {"family": "bump", "a": 1.2}, "rho": 0.6},
        "mc": {"seed": 9, "n_samples": 30000},
        "output": {"path": str(tmp_path / "ch.csv")},
    })
    assert main(["chain", "--job", job]) == 0
    rows = (tmp_path / "ch.csv").read_text().splitlines()
    lhs = float(rows[2].split(",")[1])
    rhs = float(rows[3].split(",")[1])
    se = float(rows[2].split(",")[2])
    assert abs(lhs - rhs) <= 4 * se


def test_verify_job_writes_report(tmp_path):
    job = _write_job(tmp_path, "verify.json", {
        "command": "verify",
        "output": {"path": str(tmp_path / "report.json"), "format": "json"},
    })
    assert main(["verify", "--job", job]) == 0
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["all_pass"] is True
    assert doc["count"] >= 20
    assert all(entry["pass"] for entry in doc["identities"])


def test_console_entry_point(tmp_path):
    job = _write_job(tmp_path, "t.json", {
        "command": "table", "model": "euclidean",
        "profile": {"family": "gaussian"},
        "grid": {"lo": 0.0, "hi": 1.0, "count": 3},
        "output": {"path": str(tmp_path / "t.csv")},
    })
    proc = subprocess.run([sys.executable, "-m", "georadon.cli", "table",
                           "--job", job], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
