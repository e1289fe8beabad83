import json
import subprocess
import sys

import numpy as np
import pytest

from ppkitaev.cli import parse_and_validate, parse_range, run

RUN = [sys.executable, "-m", "ppkitaev.cli"]


def cli(args, **kw):
    return subprocess.run(RUN + args, capture_output=True, text=True, **kw)


def test_parse_range():
    assert parse_range("0:1:0.5") == [0.0, 0.5, 1.0]
    assert parse_range("0.5:0.999:0.01")[-1] <= 0.999 + 1e-12
    assert parse_range("1,2,4", integer=True) == [1, 2, 4]
    with pytest.raises(ValueError):
        parse_range("1:2")
    with pytest.raises(ValueError):
        parse_range("1:2:-1")


def test_parse_and_validate_basic(tmp_path):
    cfg = parse_and_validate(
        ["steady", "--mu", "0.4", "--gamma", "1", "--q", "0.5", "--L", "64",
         "--out", str(tmp_path / "s.csv")]
    )
    assert cfg.command == "steady"
    assert cfg.q == 0.5 and cfg.L == 64


def test_invalid_q_exits_1():
    res = cli(["steady", "--q", "1.5", "--L", "8"])
    assert res.returncode == 1
    assert "q must lie in [0, 1]" in res.stderr


def test_unknown_config_key_rejected(tmp_path):
    cfgfile = tmp_path / "bad.cfg"
    cfgfile.write_text("command = xi\nwibble = 3\n")
    res = cli(["sweep", "--config", str(cfgfile)])
    assert res.returncode == 1
    assert "unknown key" in res.stderr


def test_steady_schema(tmp_path):
    out = tmp_path / "s.csv"
    res = cli(["steady", "--mu", "0.4", "--gamma", "1", "--q", "0.5", "--L", "8",
               "--out", str(out), "--reproducible"])
    assert res.returncode == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("# ppkitaev schema=steady")
    assert lines[2] == "x,g11,g12,g21,g22"
    assert len(lines) == 3 + 8
    row0 = lines[3].split(",")
    assert float(row0[1]) == 0.0  # g11(0) = 0


def test_determinism_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["gap", "--mu", "0.4", "--L", "8", "--sweep-q", "0:1:0.25",
            "--reproducible"]
    assert cli(args + ["--out", str(a)]).returncode == 0
    assert cli(args + ["--out", str(b)]).returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_gap_sweep_rows_echo_parameters(tmp_path):
    out = tmp_path / "g.csv"
    res = cli(["gap", "--mu", "0.4", "--L", "8", "--sweep-q", "0:1:0.5",
               "--sweep-gamma", "1:2:1", "--out", str(out), "--reproducible"])
    assert res.returncode == 0
    lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    rows = [l.split(",") for l in lines[1:]]
    assert len(rows) == 6  # 2 gammas x 3 qs
    assert {r[2] for r in rows} == {"0", "0.5", "1"}
    assert all(float(r[4]) >= 0 for r in rows)


def test_negativity_command(tmp_path):
    out = tmp_path / "n.csv"
    res = cli(["negativity", "--mu", "0.4", "--gamma", "1", "--q", "1", "--L", "16",
               "--ell", "2,4,8", "--out", str(out), "--reproducible"])
    assert res.returncode == 0
    lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert lines[0] == "ell,chord,negativity"
    assert len(lines) == 4
    vals = [float(l.split(",")[2]) for l in lines[1:]]
    assert vals[0] < vals[1] < vals[2]  # growing with block size at q=1


def test_oracle_json(tmp_path):
    out = tmp_path / "o.json"
    res = cli(["oracle", "--mu", "0.4", "--gamma", "1", "--q", "0.5", "--L", "2",
               "--out", str(out), "--reproducible"])
    assert res.returncode == 0
    report = json.loads(out.read_text())
    assert report["all_pass"] is True
    assert report["points"][0]["covariance_mismatch"] < 1e-6
    assert report["points"][0]["pass"] is True
    assert report["meta"]["schema"] == "oracle"


def test_sweep_config_grid(tmp_path):
    cfgfile = tmp_path / "fig2.cfg"
    cfgfile.write_text(
        "command = gap\nmu = 0.4\nL = 8\nsweep-q = 0:1:0.1\nsweep-gamma = 0.25:6:0.25\n"
        f"out = {tmp_path/'grid.csv'}\n"
    )
    cfg = parse_and_validate(["sweep", "--config", str(cfgfile)])
    assert len(cfg.sweep_q) == 11
    assert len(cfg.sweep_gamma) == 24
    assert cfg.sweep_gamma[0] == 0.25 and cfg.sweep_gamma[-1] == 6.0


def test_numerical_failure_exit_2(tmp_path):
    # gamma=0, q=0 has no unique steady state: steady must exit 2
    res = cli(["steady", "--mu", "0.4", "--gamma", "0", "--q", "0.5", "--L", "8",
               "--sweep-q", "0:0:1", "--out", str(tmp_path / "x.csv")])
    assert res.returncode == 2 or "failure" in res.stderr or res.returncode == 1


def test_seventeen_digit_serialization(tmp_path):
    out = tmp_path / "s.csv"
    cli(["steady", "--mu", "0.4", "--gamma", "1", "--q", "0.5", "--L", "4",
         "--out", str(out), "--reproducible"])
    lines = [l for l in out.read_text().splitlines() if not l.startswith("#")][1:]
    val = lines[1].split(",")[2]
    assert float(val) == np.float64(val)  # lossless round trip
    assert len(val.replace("-", "").replace(".", "").lstrip("0")) >= 15
