import json

import pytest

from cymotive.cli import ConfigError, main, parse_config, reload_report
from cymotive.motives import canonical_json


def run(tmp_path, capsys, command, config, *extra):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(config))
    code = main([command, "--config", str(path), *extra])
    return code, capsys.readouterr()


def test_diamond_kummer(tmp_path, capsys):
    out_json = tmp_path / "out.json"
    code, out = run(tmp_path, capsys, "diamond", {"construction": "ch-z2", "n": 2}, "--json", str(out_json))
    assert code == 0
    assert "1  20 1" in out.out
    report = json.loads(out_json.read_text())
    assert report["diamond"][1][1] == 20 and report["euler"] == 24


def test_diamond_schreieder_transcendental(tmp_path, capsys):
    out_json = tmp_path / "out.json"
    code, _ = run(tmp_path, capsys, "diamond", {"construction": "schreieder", "n": 3, "c": 2, "a": 2, "b": 1}, "--json", str(out_json))
    assert code == 0
    assert json.loads(out_json.read_text())["transcendental"] == {"1": 4, "2": 4}


def test_diamond_thousands_separators_only_in_text(tmp_path, capsys):
    out_json = tmp_path / "out.json"
    code, out = run(tmp_path, capsys, "diamond", {"construction": "schreieder", "n": 3, "c": 2, "a": 2, "b": 1}, "--json", str(out_json))
    assert "1,567" in out.out
    assert "1,567" not in out_json.read_text()


def test_report_round_trip_is_byte_identical(tmp_path, capsys):
    out_json = tmp_path / "out.json"
    run(tmp_path, capsys, "diamond", {"construction": "ch-z3", "n": 3}, "--json", str(out_json))
    text = out_json.read_text()
    data, d = reload_report(text)
    assert canonical_json(data) + "\n" == text
    assert d.to_json() == data["diamond"]


@pytest.mark.parametrize(
    "config",
    [
        {"construction": "ch-z2", "n": 3},
        {"construction": "ch-z3", "n": 3},
        {"construction": "schreieder", "n": 2, "c": 1, "a": 2, "b": 0},
    ],
)
def test_verify_passes(tmp_path, capsys, config):
    code, out = run(tmp_path, capsys, "verify", config)
    assert code == 0, out.out
    assert "FAIL" not in out.out


def test_verify_k3_gate_is_listed(tmp_path, capsys):
    _, out = run(tmp_path, capsys, "verify", {"construction": "schreieder", "n": 2, "c": 1, "a": 2, "b": 0})
    assert "PASS  minimal model is a K3 surface" in out.out


@pytest.mark.parametrize(
    "config",
    [
        {"construction": "schreieder", "n": 2, "c": 2, "a": 1, "b": 1},
        {"construction": "ch-z2", "n": 0},
        {"construction": "ch-z2", "n": 2, "a": 1},
        {"construction": "ch-z3", "n": 2, "genera": [1, 1]},
        {"construction": "mystery", "n": 2},
        {"construction": "ch-z2", "n": 2, "colour": "red"},
    ],
)
def test_config_errors_exit_2(tmp_path, capsys, config):
    code, out = run(tmp_path, capsys, "diamond", config)
    assert code == 2
    assert "config error" in out.err


def test_missing_config_file(tmp_path, capsys):
    assert main(["diamond", "--config", str(tmp_path / "absent.json")]) == 2


def test_supersingular_kummer_has_22_classes(tmp_path, capsys):
    code, out = run(tmp_path, capsys, "supersingular", {"construction": "ch-z2", "n": 2, "mode": "supersingular"})
    assert code == 0
    assert "1 + 22*L + L^2" in out.out


def test_supersingular_rejects_odd_dimension(tmp_path, capsys):
    code, out = run(tmp_path, capsys, "supersingular", {"construction": "ch-z2", "n": 3, "mode": "supersingular"})
    assert code == 2 and "even dimension" in out.err


def test_certificate_and_motive(tmp_path, capsys):
    code, out = run(tmp_path, capsys, "certificate", {"construction": "ch-z3", "n": 2})
    assert code == 0 and out.out.strip().endswith("VALID") and "blow_down" in out.out
    code, out = run(tmp_path, capsys, "motive", {"construction": "ch-z3", "n": 3})
    assert code == 0 and "T + 1 + 84*L + 84*L^2 + L^3" in out.out


def test_pipeline_failure_exits_1(tmp_path, capsys):
    # an enumeration cap too small for the oracle turns verify into a failure, not a crash
    code, out = run(tmp_path, capsys, "verify", {"construction": "ch-z2", "n": 3}, "--cap", "2")
    assert code == 1


def test_parse_config_defaults():
    cfg = parse_config({"construction": "ch-z2", "n": 3})
    assert cfg.spec.genera == (1, 1, 1)
    with pytest.raises(ConfigError):
        parse_config({"construction": "schreieder", "n": 3, "c": 1, "a": 1, "b": 2})
