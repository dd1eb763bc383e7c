import json

import pytest

from mrmp.cli import main
from mrmp.instances import load
from mrmp.planfile import parse_plan, serialize_plan
from mrmp.verifier import check_plan


@pytest.fixture
def fig8_file(tmp_path):
    path = tmp_path / "fig8.mrmp.json"
    assert main(["gen", "--fig", "fig8", "--out", str(path)]) == 0
    return path


def test_gen_and_check_fixture(fig8_file, capsys):
    assert main(["check", str(fig8_file)]) == 0
    assert json.loads(capsys.readouterr().out) == {"violations": []}


def test_gen_random_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["gen", "--seed", "7", "--n", "30", "--m", "6", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_plan_then_verify(fig8_file, tmp_path, capsys):
    out = tmp_path / "plan.json"
    assert main(["plan", str(fig8_file), "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["stats"]["moveCount"] == 2 and d["stats"]["planningMillis"] is None
    assert {e["type"] for m in d["moves"] for e in m["path"]} <= {"segment", "arc"}
    assert main(["verify", str(fig8_file), str(out)]) == 0
    capsys.readouterr()


def test_plan_with_timing(fig8_file, tmp_path):
    out = tmp_path / "plan.json"
    assert main(["plan", str(fig8_file), "--out", str(out), "--timing"]) == 0
    assert json.loads(out.read_text())["stats"]["planningMillis"] >= 0


def test_plan_file_is_deterministic_and_round_trips(fig8_file, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["plan", str(fig8_file), "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    plan, inst = parse_plan(a.read_text())
    assert serialize_plan(plan, inst=inst) == a.read_text()
    assert check_plan(load(fig8_file), plan) == []


@pytest.mark.parametrize("fig", ["fig2i", "fig2ii"])
def test_plan_rejects_lower_bound_fixtures(fig, tmp_path, capsys):
    path = tmp_path / "f.json"
    main(["gen", "--fig", fig, "--out", str(path)])
    assert main(["plan", str(path), "--out", str(tmp_path / "p.json")]) == 2
    kinds = {v["kind"] for v in json.loads(capsys.readouterr().out)["violations"]}
    assert kinds & {"muViolation", "betaViolation"}
    assert not (tmp_path / "p.json").exists()


def test_unreadable_input_exits_one(tmp_path):
    assert main(["plan", str(tmp_path / "missing.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["check", str(bad)]) == 1


def test_verify_corrupted_plan(fig8_file, tmp_path, capsys):
    out = tmp_path / "plan.json"
    main(["plan", str(fig8_file), "--out", str(out)])
    d = json.loads(out.read_text())
    d["moves"][0]["to"][0] += 0.5
    out.write_text(json.dumps(d))
    assert main(["verify", str(fig8_file), str(out)]) == 2
    kinds = {v["kind"] for v in json.loads(capsys.readouterr().out)["violations"]}
    assert kinds & {"pathRobotCollision", "discontinuity"}


def test_verify_empty_plan(fig8_file, tmp_path, capsys):
    out = tmp_path / "plan.json"
    out.write_text(json.dumps({"version": 1, "moves": []}))
    assert main(["verify", str(fig8_file), str(out)]) == 2
    assert "wrongFinalSet" in capsys.readouterr().out


def test_check_beta_violation(tmp_path, capsys):
    path = tmp_path / "f.json"
    main(["gen", "--fig", "fig2ii", "--out", str(path)])
    assert main(["check", str(path)]) == 2
    assert "betaViolation" in capsys.readouterr().out


def test_render_is_deterministic(fig8_file, tmp_path):
    plan = tmp_path / "plan.json"
    main(["plan", str(fig8_file), "--out", str(plan)])
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for p in (a, b):
        assert main(["render", str(fig8_file), "--plan", str(plan), "--layers", "freespace,auras,plan",
                     "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().lstrip().startswith("<?xml")


def test_render_rejects_unknown_layer(fig8_file, tmp_path):
    assert main(["render", str(fig8_file), "--layers", "nope", "--out", str(tmp_path / "x.svg")]) == 2
