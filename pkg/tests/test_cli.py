import json

from pu6 import cli


def _write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def _model321():
    return {"model": {"omegas": [3, 2, 1]}}


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def test_simulate_happy_path(tmp_path):
    cfg = _model321()
    cfg["simulate"] = {"dt": 1e-3, "t_end": 20.0, "initial": [1, 0, -9, 0, 81, 0]}
    code = cli.main(
        ["--config", _write(tmp_path, "c.json", cfg), "--out", str(tmp_path / "run"), "simulate"]
    )
    assert code == 0
    summary = json.loads((tmp_path / "run.json").read_text())
    assert summary["method"] == "rk4"
    for key in ("H1", "H2", "H3"):
        assert summary["max_drift"][key] < 1e-8
    assert summary["divergent_mode_present"] is False
    header = (tmp_path / "run.csv").read_text().split("\n", 1)[0]
    assert header == "t,q,qdot,qddot,q3t,q4t,q5t,H1,H2,H3"


def test_simulate_flags_divergent_mode(tmp_path):
    cfg = {"model": {"omegas": [2, 2, 1]}}
    # t sin(2t) initial data excites the linearly growing mode
    cfg["simulate"] = {"dt": 1e-3, "t_end": 2.0, "initial": [0, 0, 4, 0, -32, 0]}
    code = cli.main(
        ["--config", _write(tmp_path, "c.json", cfg), "--out", str(tmp_path / "run"), "simulate"]
    )
    assert code == 0
    summary = json.loads((tmp_path / "run.json").read_text())
    assert summary["divergent_mode_present"] is True


def test_simulate_malformed_config(tmp_path):
    cfg = {"model": {"omegas": [3, 2, 1], "alpha": 1.0, "beta": 2.0, "gamma": 3.0}}
    code = cli.main(["--config", _write(tmp_path, "c.json", cfg), "simulate"])
    assert code == 2


def test_simulate_missing_model(tmp_path):
    code = cli.main(["--config", _write(tmp_path, "c.json", {"simulate": {}}), "simulate"])
    assert code == 2


def test_simulate_byte_identical(tmp_path):
    cfg = _model321()
    cfg["simulate"] = {"dt": 1e-2, "t_end": 2.0, "initial": [1, 0, -9, 0, 81, 0]}
    cfgp = _write(tmp_path, "c.json", cfg)
    blobs = []
    for name in ("a", "b"):
        assert cli.main(["--config", cfgp, "--out", str(tmp_path / name), "simulate"]) == 0
        blobs.append((tmp_path / f"{name}.csv").read_bytes())
    assert blobs[0] == blobs[1]


def test_simulate_exact_method(tmp_path):
    cfg = _model321()
    cfg["simulate"] = {"dt": 1e-2, "t_end": 5.0, "initial": [1, 0, -9, 0, 81, 0],
                       "method": "exact"}
    code = cli.main(
        ["--config", _write(tmp_path, "c.json", cfg), "--out", str(tmp_path / "ex"), "simulate"]
    )
    assert code == 0
    summary = json.loads((tmp_path / "ex.json").read_text())
    assert summary["method"] == "exact"
    assert max(summary["max_drift"].values()) < 1e-9


def test_simulate_overflow_exit_code(tmp_path):
    cfg = {
        "model": {"alpha": 0.0, "beta": 0.0, "gamma": -1.0},
        "simulate": {"dt": 0.1, "t_end": 30.0, "initial": [1e305, 0, 0, 0, 0, 0]},
    }
    code = cli.main(
        ["--config", _write(tmp_path, "c.json", cfg), "--out", str(tmp_path / "x"), "simulate"]
    )
    assert code == 3


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def test_verify_standard_model(tmp_path):
    out = tmp_path / "report.json"
    code = cli.main(["--config", _write(tmp_path, "c.json", _model321()), "--out", str(out), "verify"])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["all_passed"] is True
    assert all(c["status"] == "pass" for c in report["checks"])


def test_verify_degenerate_skips(tmp_path):
    out = tmp_path / "report.json"
    cfg = {"model": {"omegas": [2, 2, 1]}}
    code = cli.main(["--config", _write(tmp_path, "c.json", cfg), "--out", str(out), "verify"])
    assert code == 0
    report = json.loads(out.read_text())
    statuses = {c["name"]: c["status"] for c in report["checks"]}
    assert statuses["hierarchy_routes"] == "skip"
    assert statuses["block_identity"] == "skip"
    assert all(s in ("pass", "skip") for s in statuses.values())


def test_verify_gamma_zero_fails(tmp_path):
    out = tmp_path / "report.json"
    cfg = {"model": {"alpha": 3.0, "beta": 3.0, "gamma": 0.0}}
    code = cli.main(["--config", _write(tmp_path, "c.json", cfg), "--out", str(out), "verify"])
    assert code == 1
    report = json.loads(out.read_text())
    failing = [c for c in report["checks"] if c["status"] == "fail"]
    assert failing
    assert any("GammaZero" in c["detail"] for c in failing)


def test_verify_deterministic_with_seed(tmp_path):
    cfgp = _write(tmp_path, "c.json", _model321())
    outs = []
    for name in ("r1.json", "r2.json"):
        out = tmp_path / name
        assert cli.main(["--config", cfgp, "--out", str(out), "--seed", "5", "verify"]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------

def _scan_cfg(n1=2, n2=2, fixed=("c1", 1.0)):
    cfg = _model321()
    cfg["scan"] = {
        "axis1": {"name": "c2", "min": -25, "max": -10, "n": n1},
        "axis2": {"name": "c3", "min": 40, "max": 120, "n": n2},
        "fixed": {"name": fixed[0], "value": fixed[1]},
    }
    return cfg


def test_scan_row_count(tmp_path):
    out = tmp_path / "region.csv"
    code = cli.main(["--config", _write(tmp_path, "c.json", _scan_cfg(2, 2)), "--out", str(out), "scan"])
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 5  # header + 4 rows


def test_scan_byte_identical(tmp_path):
    cfgp = _write(tmp_path, "c.json", _scan_cfg(6, 6))
    blobs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        assert cli.main(["--config", cfgp, "--out", str(out), "scan"]) == 0
        blobs.append(out.read_bytes())
    assert blobs[0] == blobs[1]


def test_scan_zero_plane(tmp_path):
    out = tmp_path / "region.csv"
    cfg = _scan_cfg(8, 8, fixed=("c1", 0.0))
    code = cli.main(["--config", _write(tmp_path, "c.json", cfg), "--out", str(out), "scan"])
    assert code == 0
    rows = out.read_text().strip().split("\n")[1:]
    assert all(row.split(",")[2] != "positive" for row in rows)


def test_scan_bad_grid(tmp_path):
    cfg = _model321()
    cfg["scan"] = {"axis1": {"name": "c2", "min": 0, "max": 1, "n": 2}}
    code = cli.main(["--config", _write(tmp_path, "c.json", cfg), "scan"])
    assert code == 2


# ---------------------------------------------------------------------------
# represent
# ---------------------------------------------------------------------------

def test_represent_ta2(tmp_path):
    cfg = _model321()
    cfg["represent"] = {"kind": "Ta2"}
    out = tmp_path / "rep.json"
    code = cli.main(["--config", _write(tmp_path, "c.json", cfg), "--out", str(out), "represent"])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["equivalence_pattern"] == ["PU", "PU", "PU"]
    assert payload["positivity"]["positive"] is True


def test_represent_tb1_real_branch(tmp_path):
    cfg = {
        "model": {"alpha": 1.0, "beta": -5.0, "gamma": 1.0},
        "represent": {"kind": "Tb1", "free_choices": {"tau2_branch": -1, "g3_branch": 1}},
    }
    out = tmp_path / "rep.json"
    code = cli.main(["--config", _write(tmp_path, "c.json", cfg), "--out", str(out), "represent"])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["equivalence_pattern"] == ["PU", "PU", "trivial"]
    assert payload["positivity"]["positive"] is False


def test_represent_complex_branch_exit_4(tmp_path):
    for kind in ("Ta1", "Tb1"):
        cfg = _model321()
        cfg["represent"] = {"kind": kind}
        code = cli.main(["--config", _write(tmp_path, "c.json", cfg), "represent"])
        assert code == 4, kind
