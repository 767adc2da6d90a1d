import json

import pytest

from sasaki.cli import main
from sasaki.scenarios import SCENARIOS


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0
    names = [line.split()[0] for line in out.splitlines()]
    assert names == list(SCENARIOS)


def test_verify_builtin_json(capsys):
    code, out, _ = run(capsys, "verify", "--scenario", "plane-in-e3", "--samples", "5")
    assert code == 0
    data = json.loads(out)
    assert data["passed"] and data["scenario"] == "plane-in-e3" and data["samples"] == 5
    assert data["classification"]["verdict"] == "TOTALLY_GEODESIC"


def test_verify_is_deterministic(capsys):
    args = ("verify", "--scenario", "latitude-in-sphere2", "--samples", "8", "--seed", "11")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    _, other, _ = run(capsys, *args[:-1], "12")
    assert other != first


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("SASAKI_SEED", "7")
    _, out, _ = run(capsys, "verify", "--scenario", "plane-in-e3", "--samples", "3")
    assert json.loads(out)["seed"] == 7
    _, out, _ = run(capsys, "verify", "--scenario", "plane-in-e3", "--samples", "3",
                    "--seed", "2")
    assert json.loads(out)["seed"] == 2


def test_cross_check_mode(capsys):
    code, out, _ = run(capsys, "verify", "--scenario", "sphere2-in-e3", "--samples", "5",
                       "--mode", "cross-check")
    assert code == 0
    data = json.loads(out)
    assert {c["check"].split("@")[1] for c in data["checks"]} == {"analytic", "fd"}
    assert all(x["agree"] for x in data["cross_check"])
    assert data["cross_check"][-1]["check"] == "verdict"


def test_scenario_file_and_report_command(capsys, tmp_path):
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"scenario": "equator-in-sphere2", "samples": 4, "seed": 1}))
    out_json = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify", str(spec), "--out", str(out_json))
    assert code == 0
    code, out, _ = run(capsys, "report", "--in", str(out_json))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "scenario,check,anchor,tier,samples,max_residual,mean_residual,pass"
    assert all(line.startswith("equator-in-sphere2,") for line in lines[1:])
    code, out, _ = run(capsys, "report", "--in", str(out_json), "--format", "json")
    assert out == out_json.read_text()


def test_custom_scenario_file(capsys, tmp_path):
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"custom": {"name": "tilted-plane", "source": "euclidean:2",
                                           "target": "euclidean:3", "map": "linear",
                                           "params": {"matrix": [[0.6, 0], [0.8, 0], [0, 1]]},
                                           "expected": "TOTALLY_GEODESIC"},
                                "samples": 5}))
    code, out, _ = run(capsys, "verify", str(spec))
    assert code == 0
    assert json.loads(out)["scenario"] == "tilted-plane"


def test_failing_check_exits_1(capsys, tmp_path):
    # a wrong expected verdict makes the run fail without any error
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"custom": {"source": "euclidean:2", "target": "euclidean:3",
                                           "map": "linear",
                                           "params": {"matrix": [[1, 0], [0, 1], [0, 0]]},
                                           "expected": "NOT"},
                                "samples": 3}))
    code, out, _ = run(capsys, "verify", str(spec), "--format", "text")
    assert code == 1
    assert "FAIL" in out.splitlines()[0]


def test_precondition_exits_2(capsys, tmp_path):
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"custom": {"source": "circle:1", "target": "sphere2:1",
                                           "map": "latitude", "params": {"theta": 0.7853981633974483}},
                                "samples": 3}))
    code, out, err = run(capsys, "verify", str(spec))
    assert code == 2 and out == "" and "precondition" in err


@pytest.mark.parametrize("argv", [
    ("verify",),
    ("verify", "--scenario", "no-such-scenario"),
    ("verify", "--scenario", "plane-in-e3", "--mode", "bogus"),
    ("verify", "--scenario", "plane-in-e3", "--samples", "0"),
    ("verify", "/nonexistent/file.json"),
    ("report", "--in", "/nonexistent/r.json"),
    ("frobnicate",),
])
def test_usage_errors_exit_3(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 3 and err


def test_unknown_field_in_scenario_file_exits_3(capsys, tmp_path):
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"scenario": "plane-in-e3", "colour": "red"}))
    code, _, err = run(capsys, "verify", str(spec))
    assert code == 3 and "colour" in err
    spec.write_text(json.dumps({"custom": {"source": "euclidean:2", "target": "euclidean:3",
                                           "map": "linear", "shape": 1}}))
    assert run(capsys, "verify", str(spec))[0] == 3


def test_bad_map_params_exit_3(capsys, tmp_path):
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"custom": {"source": "circle:1", "target": "sphere2:1",
                                           "map": "latitude", "params": {"radius": 2}}}))
    assert run(capsys, "verify", str(spec))[0] == 3
