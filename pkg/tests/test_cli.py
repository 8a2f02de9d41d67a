import json

import pytest

from cmstickel.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_theta_cli(capsys):
    code, out, _ = run(capsys, "theta", "--field", '{"conductor": 3}', "--S", "3", "--T", "7", "--json")
    assert code == 0
    d = json.loads(out)
    assert d["theta"]["coefficients"] == ["-1", "1"] and d["integral"]
    code, out, _ = run(capsys, "theta", "--conductor", "4", "--S", "2", "--T", "13")
    assert code == 0 and "-3" in out


def test_field_from_file(tmp_path, capsys):
    p = tmp_path / "field.json"
    p.write_text(json.dumps({"conductor": 5, "subgroup_generators": []}))
    code, out, _ = run(capsys, "--json", "omega", "--field", str(p), "--T", "11")
    assert code == 0 and json.loads(out)["field"]["conductor"] == 5


def test_global_flags_either_side(capsys):
    a = run(capsys, "--json", "verify-c1", "--D", "-4", "--T", "13")
    b = run(capsys, "verify-c1", "--D", "-4", "--T", "13", "--json")
    assert a == b and a[0] == 0


def test_determinism(capsys):
    outs = {run(capsys, "--json", "verify-c1", "--conductor", "5", "--T", "11")[1] for _ in range(2)}
    assert len(outs) == 1


def test_cross_report_consistency(capsys):
    _, v, _ = run(capsys, "--json", "verify-c1", "--conductor", "15", "--T", "7")
    _, i, _ = run(capsys, "--json", "ideal", "--conductor", "15", "--T", "7")
    assert json.loads(v)["theta_side"] == json.loads(i)["theta_minus_sharp"]


def test_ideal_generators(capsys):
    code, out, _ = run(capsys, "--json", "ideal", "--D", "-4", "--T", "13", "--generators")
    gens = json.loads(out)["generators"]
    assert [g["J"] for g in gens] == [[], [2]]
    assert gens[1]["element"]["coefficients"] == ["6", "6"]


def test_classgroup_cli(capsys):
    code, out, _ = run(capsys, "--json", "classgroup", "--D", "-23", "--check")
    d = json.loads(out)
    assert code == 0 and d["class_number"] == 3 and d["class_number_by_ideals"] == 3
    assert run(capsys, "classgroup", "--D", "-5")[0] == 2


def test_raymodule_and_fitting(capsys):
    code, out, _ = run(capsys, "--json", "raymodule", "--D", "-4", "--T", "13", "--dual")
    d = json.loads(out)
    assert d["module"]["invariant_factors"] == [3] and d["fitting"]["basis"] == [["3"]]
    code, out, _ = run(capsys, "--json", "fitting", "--conductor", "5", "--T", "11")
    assert json.loads(out)["fitting"]["basis"] == [["1", "3"], ["0", "5"]]


def test_battery_cli(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"fields": [{"conductor": 4, "subgroup_generators": [], "T": [13]}],
                               "checks": ["c1", "nuJ", "euler", "integrality"]}))
    code, out, _ = run(capsys, "--json", "battery", "--config", str(cfg))
    assert code == 0 and json.loads(out)["summary"]["passed"] == 1
    code, out, _ = run(capsys, "battery", "--config", '{"fields": []}')
    assert code == 0
    code, out, _ = run(capsys, "battery", "--config", '{"fields": [{"conductor": 23, "T": [3]}]}')
    assert code == 1 and "FAIL" in out
    code, _, err = run(capsys, "battery", "--config", '{"fields": 3}')
    assert code == 2


def test_tower_cli(capsys):
    code, out, _ = run(capsys, "--json", "tower", "--D", "-3", "--p", "5", "--levels", "1")
    assert code == 0 and json.loads(out)["passed"]


def test_input_errors(capsys):
    assert run(capsys, "theta", "--conductor", "7", "--T", "3")[0] == 2  # S misses 7
    assert run(capsys, "verify-c1", "--conductor", "4", "--T", "2")[0] == 2  # inadmissible
    assert run(capsys, "verify-c1", "--conductor", "23", "--T", "3")[0] == 2  # out of scope
    assert run(capsys, "--conductor-cap", "50", "theta", "--conductor", "101", "--S", "101")[0] == 2
    assert run(capsys, "theta", "--field", "{not json")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "theta")[0] == 2
