import json

from coaxvane.cli import main
from coaxvane.scenarios import bundled_config_path


def test_analyze_config_writes_table(tmp_path, capsys):
    out = tmp_path / "table.csv"
    code = main([
        "analyze-config", "--mass", "0.952", "--rotor-radius", "0.0762",
        "--n-max", "4", "--out", str(out),
    ])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "n,eta_h,R_circ,S_c,area_ratio,diameter_ratio"
    assert len(lines) == 5
    n2 = lines[2].split(",")
    assert float(n2[4]) == 2.0  # area doubles going from one rotor to two


def test_analyze_config_rejects_bad_mass(capsys):
    code = main([
        "analyze-config", "--mass", "-1", "--rotor-radius", "0.0762",
        "--out", "/dev/null",
    ])
    assert code == 2


def test_mix_check_passes(capsys):
    code = main([
        "mix-check", "--params", str(bundled_config_path("hover")),
        "--samples", "200",
    ])
    assert code == 0
    out = capsys.readouterr().out
    assert "max abs error" in out


def test_simulate_hover(tmp_path, capsys):
    config = tmp_path / "hover.toml"
    config.write_text(
        '[scenario]\ntype = "hover"\nduration = 1.0\n'
        "[output]\ncsv = \"hover.csv\"\n"
    )
    summary = tmp_path / "summary.json"
    code = main([
        "simulate", "--config", str(config),
        "--out-dir", str(tmp_path), "--summary-json", str(summary),
    ])
    assert code == 0
    assert (tmp_path / "hover.csv").exists()
    payload = json.loads(summary.read_text())
    assert payload["status"] == "ok"
    for key in (
        "position_rmse_m", "attitude_rmse_deg", "max_tilt_deg_by_mode",
        "saturation_events", "mode_switch_times",
    ):
        assert key in payload


def test_simulate_missing_config_exits_2(capsys):
    assert main(["simulate", "--config", "/nonexistent.toml"]) == 2


def test_simulate_invalid_config_exits_2(tmp_path, capsys):
    config = tmp_path / "bad.toml"
    config.write_text('[scenario]\ntype = "hover"\n[vehicle]\nmass = -5.0\n')
    assert main(["simulate", "--config", str(config)]) == 2


def test_simulate_allocation_failure_exits_4(tmp_path, capsys):
    config = tmp_path / "floor.toml"
    config.write_text(
        '[scenario]\ntype = "hover"\nduration = 1.0\n'
        "[vehicle]\nrotor_thrust_min = 6.0\n"
    )
    assert main(["simulate", "--config", str(config)]) == 4
