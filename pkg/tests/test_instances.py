import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from shapely.geometry import Polygon

from mrmp.figures import fig2i, fig2ii
from mrmp.freespace import compute_free_space
from mrmp.instances import (FIGURES, GenerationFailed, Instance, ParseError, gen_figure, gen_random, parse,
                            serialize)
from mrmp.verifier import check_instance

MINIMAL = '{"version": 1, "workspace": [[0, 0], [10, 0], [10, 6]], "starts": [[6, 2]], "targets": [[6, 2]]}'
finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


# -------------------------------------------------------------------- I/O
def test_parse_minimal():
    inst = parse(MINIMAL)
    assert len(inst.workspace) == 3 and inst.m == 1 and inst.name is None


def test_parse_rejects_two_vertices():
    d = json.loads(MINIMAL)
    d["workspace"] = [[0, 0], [1, 0]]
    with pytest.raises(ParseError) as exc:
        parse(json.dumps(d))
    assert exc.value.path == "workspace"


@pytest.mark.parametrize("field,value,path", [
    ("starts", [[6, "x"]], "starts[0][1]"),
    ("targets", [[6]], "targets[0]"),
    ("version", 2, "version"),
])
def test_parse_error_paths(field, value, path):
    d = json.loads(MINIMAL)
    d[field] = value
    with pytest.raises(ParseError) as exc:
        parse(json.dumps(d))
    assert exc.value.path == path


def test_parse_reports_json_line():
    with pytest.raises(ParseError) as exc:
        parse('{\n  "version": 1,\n  oops\n}')
    assert exc.value.path.startswith("line 3")


def test_count_mismatch_parses_and_is_flagged():
    d = json.loads(MINIMAL)
    d["workspace"] = [[0, 0], [20, 0], [20, 10], [0, 10]]
    d["starts"] = [[3, 3], [15, 3]]
    inst = parse(json.dumps(d))
    assert inst.m == 2 and len(inst.targets) == 1
    assert "chargeViolation" in [v.kind for v in check_instance(inst)]


@given(st.lists(st.tuples(finite, finite), min_size=3, max_size=12), st.lists(st.tuples(finite, finite), max_size=5))
def test_round_trip_is_exact(ws, pts):
    inst = Instance(ws, pts, list(reversed(pts)), name="rt", extra={"note": "x"})
    back = parse(serialize(inst))
    assert [tuple(p) for p in back.workspace] == ws
    assert [tuple(p) for p in back.starts] == pts
    assert back.name == "rt" and back.extra == {"note": "x"}
    assert serialize(back) == serialize(inst)


# -------------------------------------------------------------- generator
def test_gen_random_seed_one_is_clean():
    assert check_instance(gen_random(1, n=20, m=4)) == []


def test_gen_random_is_deterministic():
    assert serialize(gen_random(7, n=30, m=6)) == serialize(gen_random(7, n=30, m=6))


def test_gen_random_multi_component_zero_charge():
    inst = gen_random(3, n=36, m=5, multi=True)
    fs = compute_free_space(inst.workspace)
    per, _, _ = fs.partition(inst.starts, inst.targets)
    assert len(fs.components) >= 2
    assert all(cp.charge == 0 for cp in per)
    assert sum(1 for cp in per if cp.starts) >= 2


def test_gen_random_reports_failure():
    with pytest.raises(GenerationFailed, match="most frequent failure"):
        gen_random(0, n=8, m=40, max_tries=3)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 100_000), st.integers(4, 40), st.integers(1, 5), st.booleans())
def test_generated_instances_pass_the_checker(seed, n, m, multi):
    try:
        inst = gen_random(seed, n=n, m=m, multi=multi, max_tries=50)
    except GenerationFailed:
        return
    assert check_instance(inst) == []


# ----------------------------------------------------------------- figures
@pytest.mark.parametrize("which", FIGURES)
def test_figures_honour_expected_metadata(which):
    inst = gen_figure(which, 0.1)
    assert inst.name == which
    clean = check_instance(inst) == []
    assert clean == (inst.expected == "solvable")


def test_figure_arguments_are_checked():
    with pytest.raises(ValueError):
        gen_figure("fig1", 0.1)
    with pytest.raises(ValueError):
        gen_figure("fig2i", 0.6)


@pytest.mark.parametrize("build", [fig2i, fig2ii])
@pytest.mark.parametrize("epsilon", [0.1, 0.3, 0.5])
def test_arc_approximation_within_quarter_epsilon(build, epsilon):
    coarse = Polygon(build(epsilon).workspace)
    fine = Polygon(build(epsilon, sagitta=1e-7).workspace)
    assert coarse.hausdorff_distance(fine) <= epsilon / 4
    # inscribed: the coarse polygon never leaves the finer one
    assert coarse.difference(fine.buffer(1e-6)).area == 0.0


def test_fig2i_start_distance():
    inst = fig2i(0.1)
    vs = [v for v in check_instance(inst) if v.kind == "muViolation"]
    assert [v.detail["distance"] for v in vs] == [pytest.approx(3.9, abs=1e-6)]


def test_fig2ii_beta_and_gap():
    eps = 0.1
    inst = fig2ii(eps)
    A, B = inst.extra["A"], inst.extra["B"]
    assert B[0] - A[0] == pytest.approx(2 - inst.extra["delta"])
    assert inst.extra["delta"] < 2 * eps / 3
    assert len(compute_free_space(inst.workspace).components) == 2
    beta = [v for v in check_instance(inst) if v.kind == "betaViolation"]
    assert beta and min(v.detail["distance"] for v in beta) == pytest.approx(3 - eps, abs=1e-6)
