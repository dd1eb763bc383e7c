import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mrmp.figures import fig8, fig9
from mrmp.freespace import compute_free_space
from mrmp.geom.primitives import Point, Segment, dist
from mrmp.geom.region import path_clearance, point_in_region
from mrmp.instances import Instance, gen_random
from mrmp.multiplan import (CycleDetected, InterferenceRecord, PreconditionViolation, build_order,
                            detour_around_auras, interference_sets, solve_all)
from mrmp.planner import Move
from mrmp.verifier import check_plan

# two 8x8 rooms joined by a corridor of width 1.5 and length 10
DUMBBELL = [(0, 0), (8, 0), (8, 3), (18, 3), (18, 0), (26, 0), (26, 8), (18, 8), (18, 4.5), (8, 4.5),
            (8, 8), (0, 8)]
ROOM = [(0, 0), (20, 0), (20, 10), (0, 10)]


def rec(src, a, b, blocker=True):
    return InterferenceRecord(src, Point(0, 0), a, b, blocker)


def test_far_components_do_not_interfere():
    fs = compute_free_space(DUMBBELL)
    assert len(fs.components) == 2
    assert interference_sets(fs, [(4, 4), (22, 4)], [(4, 6.5), (22, 1.5)]) == []


def test_fig8_upper_start_blocks_lower_component():
    inst = fig8()
    fs = compute_free_space(inst.workspace)
    recs = interference_sets(fs, inst.starts, inst.targets)
    blockers = [r for r in recs if r.is_remote_blocker]
    assert [(r.source, r.source_component, r.target_component) for r in blockers] == [(("start", 1), 1, 0)]
    assert build_order(recs, 2) == [1, 0]


def test_fig8_plan_moves_upper_robot_first():
    inst = fig8()
    plan = solve_all(inst)
    assert [(tuple(m.start), tuple(m.end)) for m in plan.moves] == [
        (tuple(inst.starts[1]), tuple(inst.targets[1])), (tuple(inst.starts[0]), tuple(inst.targets[0]))]
    assert check_plan(inst, plan) == []


def test_fig9_start_and_target_both_interfere():
    inst = fig9()
    fs = compute_free_space(inst.workspace)
    recs = interference_sets(fs, inst.starts, inst.targets)
    assert {r.source for r in recs} == {("start", 1), ("target", 1)}
    assert len({(r.source_component, r.target_component) for r in recs}) == 1
    plan = solve_all(inst)
    assert check_plan(inst, plan) == []


def test_build_order_cases():
    assert build_order([], 3) == [0, 1, 2]
    assert build_order([rec(("start", 0), 2, 1), rec(("target", 0), 0, 1)], 3) == [2, 1, 0]
    assert build_order([rec(("start", 0), 0, 1, blocker=False)], 2) == [0, 1]
    with pytest.raises(CycleDetected):
        build_order([rec(("start", 0), 0, 1), rec(("start", 1), 1, 0)], 2)


def test_beta_violation_across_components_is_rejected():
    base = fig8()
    x = math.sqrt(2.9 ** 2 - (0.35 + 1.22) ** 2)
    inst = Instance(base.workspace, base.starts, [Point(x, -1.22), base.targets[1]])
    with pytest.raises(PreconditionViolation) as exc:
        solve_all(inst)
    assert "betaViolation" in [v.kind for v in exc.value.violations]


# ---------------------------------------------------------------- detours
def _region():
    return compute_free_space(ROOM).components[0]


def _assert_valid_detour(mv, parked, region):
    path = list(mv.path)
    assert dist(path[0].a, mv.start) < 1e-9 and dist(path[-1].b, mv.end) < 1e-9
    for a, b in zip(path, path[1:]):
        assert dist(a.b, b.a) < 1e-9
    for p in parked:
        assert path_clearance(path, p) >= 2 - 1e-6
    for e in path:
        assert point_in_region(e.point_at(0.5), region, 1e-7) != "outside"


def test_detour_leaves_clear_path_unchanged():
    mv = Move(Point(2, 2), Point(18, 2), (Segment(Point(2, 2), Point(18, 2)),))
    assert detour_around_auras(mv, [(10, 8)], _region()) is mv


def test_detour_replaces_chord_by_arc():
    region = _region()
    mv = Move(Point(2, 5), Point(18, 5), (Segment(Point(2, 5), Point(18, 5)),))
    out = detour_around_auras(mv, [(10, 6)], region)
    _assert_valid_detour(out, [(10, 6)], region)
    assert any(e.kind == "arc" for e in out.path)
    # straight parts plus the lower arc of the aura, not the long way round
    assert out.length < 16 + 2 * math.pi


def test_detour_around_two_overlapping_auras():
    region = _region()
    parked = [(9, 5.5), (11.5, 6)]
    mv = Move(Point(2, 5), Point(18, 5), (Segment(Point(2, 5), Point(18, 5)),))
    out = detour_around_auras(mv, parked, region)
    _assert_valid_detour(out, parked, region)


# ------------------------------------------------------------ random runs
@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 6))
def test_random_multi_component_plans_verify(seed, m):
    inst = gen_random(seed, n=36, m=m, multi=True)
    plan = solve_all(inst)
    assert check_plan(inst, plan) == []
    assert len(plan.moves) <= 2 * m * m + m
    fs = compute_free_space(inst.workspace)
    assert sorted(plan.order) == list(range(len(fs.components)))
