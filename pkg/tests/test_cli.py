import csv
import json

import numpy as np
import pytest

from gevreylab.cli import main, run_experiment
from gevreylab.errors import ConfigurationError


def test_unknown_experiment_rejected(tmp_path):
    with pytest.raises(ConfigurationError):
        run_experiment({"experiment": "nope"}, tmp_path)


def test_run_subcommand_unknown_experiment_exit_code(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"experiment": "nope"}))
    rc = main(["--out", str(tmp_path / "o"), "run", str(cfg)])
    assert rc == 2
    assert "unknown experiment" in capsys.readouterr().err


def test_cellular_singularity_experiment(tmp_path):
    man = run_experiment({"experiment": "cellular-singularity",
                          "t_values": [0.5, 1.0], "n": 256}, tmp_path)
    assert man.all_passed
    path = tmp_path / "manifest.json"
    assert path.exists()
    data = json.loads(path.read_text())
    assert data["experiment"] == "cellular-singularity"
    assert data["version"]
    assert data["wall_time"] > 0
    for chk in data["checks"]:
        assert set(chk) == {"name", "passed", "value", "tolerance", "detail"}
    with open(tmp_path / "singularity_scan.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][0] == "t"          # sweep variable first
    assert float(rows[1][0]) == 0.5


def test_eulerian_decay_experiment(tmp_path):
    man = run_experiment({"experiment": "eulerian-decay",
                          "t_values": [1.0], "n": 256}, tmp_path)
    assert man.all_passed
    with open(tmp_path / "eulerian_radius.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "fitted_radius", "predicted_radius", "r_squared"]


def test_majorant_experiment(tmp_path):
    man = run_experiment({"experiment": "majorant-table",
                          "M_values": [1.0], "m_max": 20}, tmp_path, seed=7)
    assert man.all_passed
    assert man.seed == 7
    assert (tmp_path / "persistence_times.json").exists()
    assert (tmp_path / "majorant_M_1.0.csv").exists()


def test_simulate_radius_gevrey_pipeline(tmp_path, capsys):
    out = tmp_path / "sim"
    rc = main(["--out", str(out), "simulate", "--n", "64", "--dt", "1e-3",
               "--t-end", "0.02", "--snap-every", "10"])
    assert rc == 0
    snap = out / "final.snap"
    assert snap.exists()
    with open(out / "series.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][0] == "t"

    rc = main(["--out", str(tmp_path / "rad"), "radius", str(snap)])
    assert rc == 0
    rec = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert "delta_hat" in rec and "reliable" in rec

    rc = main(["--out", str(tmp_path / "gev"), "gevrey", str(snap),
               "--m-max", "10"])
    assert rc == 0
    rec = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert rec["verdict"] in ("convergent", "divergent", "inconclusive")
    assert (tmp_path / "gev" / "ladder.csv").exists()


def test_strip_subcommand_small(tmp_path, capsys):
    # a blunt blob on a coarse grid still exercises the full pipeline;
    # pass/fail lines must appear for every check
    rc = main(["--out", str(tmp_path), "strip", "--n", "256", "--k", "4",
               "--dt", "1e-3", "--t-end", "0.01"])
    out = capsys.readouterr().out
    assert rc in (0, 1)
    assert out.count("left_probe_emptied") == 1
    assert (tmp_path / "strip_series.csv").exists()
    assert (tmp_path / "strip_final.snap").exists()
