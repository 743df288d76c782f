import csv
import io
import json

import numpy as np
import pytest

from switchengine import cli


def run(capsys, *args):
    code = cli.main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_cycle_incoherent_zero(capsys):
    code, out, _ = run(capsys, "cycle", "--mode", "incoherent")
    assert code == 0
    assert json.loads(out)["report"]["eta"] == 0.0


def test_cycle_entangled_gain(capsys):
    code, out, _ = run(capsys, "cycle", "--family", "entangled", "--a", "0.5")
    rep = json.loads(out)["report"]
    assert code == 0
    assert rep["eta"] == pytest.approx(rep["delta_eta"]) and rep["eta"] > 0


@pytest.mark.parametrize("args", [
    ("cycle", "--xi-fraction", "1.5"), ("circuit-compare", "--shots", "0"),
    ("cycle", "--family", "quantum"), ("sweep", "--a-grid", "x:y"), ("cycle", "--a", "abc")])
def test_validation_errors(capsys, args):
    code, _, err = run(capsys, *args)
    assert code == 2
    assert "config error" in err


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# recipe\nfamily = separable\na = 0.2\n")
    _, out, _ = run(capsys, "cycle", "--config", str(cfg), "--a", "0.4")
    doc = json.loads(out)
    assert doc["family"] == "separable" and doc["a"] == 0.4
    cfg.write_text("nonsense = 1\n")
    code, _, err = run(capsys, "cycle", "--config", str(cfg))
    assert code == 2 and ":1:" in err


def test_sweep_columns_and_flags(capsys):
    code, out, _ = run(capsys, "sweep", "--family", "all", "--a-grid", "0:1:11")
    assert code == 0 and out.endswith("\n") and "\r" not in out
    rows = rows_of(out)
    assert list(rows[0]) == cli.SWEEP_COLUMNS
    assert len(rows) == 33
    by = {(r["family"], r["a"]): r for r in rows}
    for r in rows:
        for side in ("plus", "minus"):
            if float(r[f"eta_{side}"]) == 0.0 and float(r[f"w_ext_{side}"]) > 0:
                assert f"{side}:" in r["flags"]
    for a in {r["a"] for r in rows}:
        ps = float(by[("separable", a)]["p_plus"])
        pu = float(by[("uncorrelated", a)]["p_plus"])
        assert abs(2 * ps - 1) <= abs(2 * pu - 1) + 1e-12
    ent = [r for r in rows if r["family"] == "entangled"]
    for r in (ent[0], ent[-1]):
        assert float(r["w_ext_plus"]) > 0 and float(r["w_ext_minus"]) > 0


def test_sweep_consistency_error_exit_code(capsys, monkeypatch):
    from switchengine import analytic
    from switchengine.errors import ConsistencyError

    def broken(*a, **k):
        raise ConsistencyError("forced")
    monkeypatch.setattr(analytic, "cross_check", broken)
    code, _, err = run(capsys, "sweep", "--a-grid", "0.5")
    assert code == 3 and "consistency" in err


def test_map_small(capsys):
    code, out, _ = run(capsys, "map", "--family", "separable", "--grid-n", "5",
                       "--beta-eps-list", "10")
    rows = rows_of(out)
    assert code == 0 and list(rows[0]) == cli.MAP_COLUMNS and len(rows) == 25
    for r in rows:
        if r["feasible"] == "0":
            assert float(r["delta_eta"]) == 0.0


def test_map_workers_identical(capsys):
    args = ["map", "--family", "uncorrelated", "--grid-n", "3", "--beta-eps-list", "0.1"]
    _, serial, _ = run(capsys, *args)
    _, parallel, _ = run(capsys, *args, "--workers", "2")
    assert serial == parallel


def test_optimal_theta(capsys):
    code, out, _ = run(capsys, "optimal-theta", "--family", "uncorrelated", "--a-grid", "0.5",
                       "--beta-eps-list", "2", "--objective", "eta_tilde")
    (row,) = rows_of(out)
    assert code == 0
    assert float(row["theta_opt"]) == pytest.approx(np.pi / 2, abs=1e-3)


def test_circuit_compare_small(capsys):
    code, out, _ = run(capsys, "circuit-compare", "--family", "entangled", "--a-grid", "0:1:3",
                       "--shots", "2000", "--reps", "2")
    doc = json.loads(out)
    assert code == 0
    assert doc["summary"]["max_trace_distance"] < 1e-9
    assert len(doc["points"]) == 3


def test_output_file(tmp_path, capsys):
    path = tmp_path / "s.csv"
    assert cli.main(["sweep", "--a-grid", "0,0.5", "--out", str(path)]) == 0
    assert path.read_bytes().count(b"\n") == 3
