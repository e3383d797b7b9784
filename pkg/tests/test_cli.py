import json
import subprocess
import sys
from pathlib import Path

import pytest

from moledrill.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_predict_header_and_rows(capsys):
    code, out, _ = run(capsys, "predict", "--wob-min", "30", "--wob-max", "140", "--step", "1")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "wob_n,torque_nm,rpm,r,rop_m_hr,e_s_pa"
    assert len(lines) == 112  # header + 111 nodes


def test_predict_missing_config(capsys, tmp_path):
    missing = tmp_path / "absent.toml"
    code, _, err = run(capsys, "predict", "--config", str(missing))
    assert code == 2
    assert str(missing) in err


def test_predict_env_config(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "c.toml"
    cfg.write_text("[galle]\ns_cal = 0.5\n")
    monkeypatch.setenv("MOLEDRILL_CONFIG", str(cfg))
    code, out, _ = run(capsys, "predict", "--json", "--wob-min", "90", "--wob-max", "91")
    assert code == 0 and json.loads(out)["s_cal"] == 0.5
    code, out, _ = run(capsys, "predict", "--json", "--wob-min", "90", "--wob-max", "91",
                       "--set", "galle.s_cal=0.25")
    assert json.loads(out)["s_cal"] == 0.25


def test_predict_above_stall(capsys):
    code, _, err = run(capsys, "predict", "--wob-min", "250", "--wob-max", "300")
    assert code == 3 and "stall" in err


def test_predict_partial_stall_warns(capsys):
    code, out, err = run(capsys, "predict", "--wob-min", "200", "--wob-max", "300", "--step", "10")
    assert code == 0 and "truncated" in err
    assert out.splitlines()[-1].startswith("240.000,")


def test_validate_default(capsys, tmp_path):
    csv_path = tmp_path / "v.csv"
    code, out, _ = run(capsys, "validate", "--csv-out", str(csv_path))
    assert code == 0
    assert "spearman_e_s: -1.000000" in out
    assert csv_path.read_text().startswith("label,wob,measured_rop,model_rop,rel_error")


def test_validate_json(capsys):
    code, out, _ = run(capsys, "validate", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["spearman_e_s"] == -1.0
    assert data["passed"] is True
    assert {"s_cal", "max_rel_error_included", "rows", "tolerance"} <= set(data)
    assert len(data["rows"]) == 5


def test_validate_tight_tolerance(capsys):
    code, out, _ = run(capsys, "validate", "--tolerance", "0.01")
    assert code == 1 and "FAIL" in out


def test_validate_one_row(capsys, tmp_path):
    data = tmp_path / "one.csv"
    data.write_text("label,wob_kgf_added,depth_mm,rpm,e_s_mpa\nW,0,91.09,124,6.58\n")
    code, _, err = run(capsys, "validate", "--dataset", str(data))
    assert code == 2 and "at least 2" in err


def test_optimize(capsys):
    code, out, _ = run(capsys, "optimize")
    assert code == 0
    assert "recommended wob:" in out and "rop:" in out and "s_cal:" in out
    code, out, _ = run(capsys, "optimize", "--json")
    rec = json.loads(out)["recommended"]
    assert 75 <= rec["wob"] <= 112


def test_optimize_no_crossing(capsys):
    code, out, _ = run(capsys, "optimize", "--wob-min", "30", "--wob-max", "40")
    assert code == 3 and "none" in out


def test_simulate(capsys, tmp_path):
    csv_path = tmp_path / "t.csv"
    code, out, _ = run(capsys, "simulate", "--target-depth", "0.3", "--csv-out", str(csv_path))
    assert code == 0
    assert "cycles: 10" in out
    assert len(csv_path.read_text().splitlines()) == 61
    code, out, _ = run(capsys, "simulate", "--target-depth", "0.3", "--json", "--rop", "1.05")
    data = json.loads(out)
    assert data["cycles"] == 10 and data["net_advance_rate_m_hr"] < 1.05


def test_caster(capsys, tmp_path):
    code, out, _ = run(capsys, "caster", "--rise-csv", str(tmp_path / "rise.csv"))
    assert code == 0
    assert "aligns: true (ΣT = -0.0007 N·m)" in out
    assert (tmp_path / "rise.csv").read_text().startswith("t_s,f_c_n\n0.0000,0.000000")
    code, out, _ = run(capsys, "caster", "--json")
    data = json.loads(out)
    assert data["aligns"] is True
    assert set(data) >= {"f_sp", "p_t", "t_sat", "t_ss", "sigma_t"}
    code, out, _ = run(capsys, "caster", "--set", "caster.f_c=0")
    assert "aligns: false" in out


def test_forelimb(capsys, tmp_path):
    code, out, _ = run(capsys, "forelimb", "--csv-out", str(tmp_path / "f.csv"))
    assert code == 0 and "k_trans: 0.262227" in out
    assert len((tmp_path / "f.csv").read_text().splitlines()) == 6
    data = json.loads(run(capsys, "forelimb", "--json")[1])
    assert data["max_rel_error"] <= 0.15
    assert data["pull_servo_n"] > data["pull_linear_n"]


def test_config_roundtrip(capsys, tmp_path):
    code, out, _ = run(capsys, "config", "--set", "soil.mu=0.5")
    path = tmp_path / "c.toml"
    path.write_text(out)
    code2, out2, _ = run(capsys, "config", "--config", str(path))
    assert code == code2 == 0 and out == out2


def test_bad_override(capsys):
    code, _, err = run(capsys, "caster", "--set", "motor.eta=1.2")
    assert code == 2 and "motor.eta" in err


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "moledrill.cli", *argv],
                          capture_output=True, check=False).stdout


@pytest.mark.parametrize("name, argv", [
    ("predict_default.csv", ["predict", "--wob-min", "30", "--wob-max", "140", "--step", "1"]),
    ("validate_default.txt", ["validate"]),
])
def test_golden(name, argv):
    first, second = _cli(*argv), _cli(*argv)
    assert first == second
    assert first == (GOLDEN / name).read_bytes()
