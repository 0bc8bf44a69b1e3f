"""End-to-end CLI behavior: anchors, formats, config, exit codes."""

import json

import pytest

import cknlab.cli as cli
from cknlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_constants_closed_form(capsys):
    doc = run_json(capsys, "constants", "--n", "5", "--alpha", "0")
    assert doc["report"]["closed_form"] == 9.0
    assert doc["report"]["diagnostics"]["exact"] == "9"


def test_constants_bounds_only(capsys):
    doc = run_json(capsys, "constants", "--n", "2")
    report = doc["report"]
    assert report["closed_form"] is None
    assert report["bounds"]["lower"] == 0.25
    assert report["bounds"]["upper"] == 0.75
    assert report["bounds"]["exact_conjectured"] == "9/4"


def test_constants_one_dimensional(capsys):
    doc = run_json(capsys, "constants", "--n", "1", "--alpha", "-0.75")
    assert doc["report"]["closed_form"] == 0.140625


def test_constants_requires_n(capsys):
    code, _, err = run(capsys, "constants")
    assert code == 2
    assert "requires --n" in err


def test_mode_scan_csv(capsys):
    code, out, _ = run(capsys, "mode-scan", "--formula", "J", "--n", "3",
                       "--kmax", "4", "--format", "csv")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "k,value,formula,argmin,tail_verified"
    assert lines[1] == "0,4,J,false,true"
    assert lines[2] == "1,2.25,J,true,true"


def test_mode_scan_weighted_json(capsys):
    doc = run_json(capsys, "mode-scan", "--formula", "K", "--n", "12",
                   "--alpha", "1", "--kmax", "6")
    assert doc["infimum"]["argmin_k"] == 0
    assert doc["infimum"]["value"] == 64.0


def test_mode_scan_kmax_precondition(capsys):
    code, _, err = run(capsys, "mode-scan", "--formula", "J", "--n", "3",
                       "--kmax", "1")
    assert code == 2
    assert "kmax" in err


def test_mode_scan_deterministic_bytes(capsys):
    args = ("mode-scan", "--formula", "J", "--n", "4", "--kmax", "6",
            "--format", "csv")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_quotient_test_function(capsys):
    doc = run_json(capsys, "quotient", "--test-function", "--n", "3")
    assert doc["report"]["quadrature_value"] == pytest.approx(3.36, rel=1e-12)
    assert doc["report"]["closed_form"] == pytest.approx(3.36, rel=1e-15)


def test_quotient_family(capsys):
    doc = run_json(capsys, "quotient", "--family", "thm1.2-2", "--n", "5",
                   "--alpha", "0", "--a", "1", "--b", "2", "--k", "0")
    assert doc["report"]["quadrature_value"] == pytest.approx(9.0, rel=1e-8)
    assert doc["report"]["closed_form"] == 9.0


def test_quotient_one_dim_family(capsys):
    doc = run_json(capsys, "quotient", "--family", "thm1.2-1b", "--n", "1",
                   "--alpha", "1", "--a", "1", "--b", "1")
    assert doc["report"]["quadrature_value"] == pytest.approx(6.25, rel=1e-8)


def test_quotient_coefficient_file(capsys, tmp_path):
    path = tmp_path / "coeffs.txt"
    path.write_text("1.0, 0.5, 0.25\n")
    doc = run_json(capsys, "quotient", "--coeffs", str(path), "--n", "5",
                   "--alpha", "0", "--k", "1")
    assert doc["report"]["quadrature_value"] > 10.24  # exact k=1 bound


def test_quotient_selector_is_exclusive(capsys):
    code, _, err = run(capsys, "quotient", "--n", "3")
    assert code == 2
    assert "exactly one" in err
    code, _, _ = run(capsys, "quotient", "--n", "3", "--test-function",
                     "--family", "thm1.2-2")
    assert code == 2


def test_quotient_discrepancy_exits_consistency(capsys, monkeypatch):
    monkeypatch.setattr(cli, "test_function_quotient", lambda n, spec: 1.0)
    code, out, _ = run(capsys, "quotient", "--test-function", "--n", "3")
    assert code == 4
    doc = json.loads(out)
    assert doc["report"]["diagnostics"]["discrepancy"] is True


def test_minimize_anchor(capsys):
    doc = run_json(capsys, "minimize", "--n", "5", "--alpha", "0", "--k", "0",
                   "--basis", "4,8")
    assert doc["report"]["variational_estimate"] == pytest.approx(9.0, rel=1e-4)
    assert doc["report"]["diagnostics"]["mode_lower_bound"] == 9.0


def test_minimize_requires_multidimensional(capsys):
    code, _, _ = run(capsys, "minimize", "--n", "1", "--k", "0")
    assert code == 2


def test_probe_rejects_other_dimensions(capsys):
    code, _, err = run(capsys, "probe-conjecture", "--n", "5")
    assert code == 2
    assert "minimize" in err


def test_probe_payload(capsys):
    doc = run_json(capsys, "probe-conjecture", "--kmax", "1", "--basis", "4,8")
    assert doc["banner"] == "numerical evidence only"
    assert doc["flag"] == "conjecture-open"
    assert doc["lower_bound"] == pytest.approx(3969 / 676, rel=1e-15)
    assert doc["upper_bound"] == 6.25
    assert doc["test_profile_mode1_quotient"] == pytest.approx(7.03125, rel=1e-12)


def test_plot_data_format(capsys):
    code, out, _ = run(capsys, "minimize", "--n", "5", "--k", "0",
                       "--basis", "4,8", "--format", "plot-data")
    assert code == 0
    rows = [line.split() for line in out.strip().split("\n")]
    assert [r[0] for r in rows] == ["4", "8"]
    assert float(rows[-1][1]) == pytest.approx(9.0, rel=1e-4)


def test_output_file_is_written_atomically(capsys, tmp_path):
    target = tmp_path / "out" / "scan.csv"
    target.parent.mkdir()
    code, out, _ = run(capsys, "mode-scan", "--formula", "J", "--n", "3",
                       "--kmax", "3", "--format", "csv", "--out", str(target))
    assert code == 0
    assert out == ""
    text = target.read_text()
    assert text.startswith("k,value,formula,argmin,tail_verified")
    leftovers = [p for p in target.parent.iterdir() if p.name != "scan.csv"]
    assert leftovers == []


def test_config_file_supplies_defaults(capsys, tmp_path):
    cfg = tmp_path / "scan.cfg"
    cfg.write_text("n = 3\nkmax = 4\nformat = csv\n")
    code, out, _ = run(capsys, "mode-scan", "--formula", "J",
                       "--config", str(cfg))
    assert code == 0
    assert len(out.strip().split("\n")) == 6  # header + k = 0..4


def test_flags_override_config(capsys, tmp_path):
    cfg = tmp_path / "scan.cfg"
    cfg.write_text("n = 3\nkmax = 4\nformat = csv\n")
    code, out, _ = run(capsys, "mode-scan", "--formula", "J",
                       "--config", str(cfg), "--kmax", "2")
    assert code == 0
    assert len(out.strip().split("\n")) == 4


def test_config_env_variable(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "env.cfg"
    cfg.write_text("n = 2\nformat = csv\nkmax = 3\n")
    monkeypatch.setenv("CKNLAB_CONFIG", str(cfg))
    code, out, _ = run(capsys, "mode-scan", "--formula", "J")
    assert code == 0
    assert out.startswith("k,value,formula,argmin,tail_verified")


def test_config_rejects_unknown_keys(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("mystery = 1\n")
    code, _, err = run(capsys, "mode-scan", "--formula", "J", "--n", "3",
                       "--config", str(cfg))
    assert code == 2
    assert "unknown config key" in err


def test_json_output_is_round_trippable(capsys):
    doc = run_json(capsys, "constants", "--n", "5", "--alpha", "0")
    assert json.loads(json.dumps(doc)) == doc
