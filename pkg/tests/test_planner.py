import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mrmp.figures import fig3ii, fig6
from mrmp.freespace import compute_free_space
from mrmp.geom.primitives import Point
from mrmp.instances import gen_random
from mrmp.motiongraph import graph_path
from mrmp.planner import (ComponentPlanner, MotionPlan, cut_zero_charge_edges, find_sink, merge_close_pairs,
                          solve_component, validate_single_component)
from mrmp.verifier import check_plan

CORRIDOR = [(0, 0), (40, 0), (40, 4), (0, 4)]


def kinds(vs):
    return [v.kind for v in vs]


# ------------------------------------------------------------- validation
def test_validate_mu_and_charge():
    assert kinds(validate_single_component([(0, 0), (3.9, 0)], [(10, 0), (20, 0)])) == ["muViolation"]
    assert kinds(validate_single_component([(0, 0)], [(10, 0), (20, 0)])) == ["chargeViolation"]
    inst = fig3ii()
    region = compute_free_space(inst.workspace).components[0]
    assert validate_single_component(inst.starts, inst.targets, region) == []


def test_merge_close_pairs_boundary():
    assert merge_close_pairs([(0, 0)], [(1, 0)]) == {0: 0}
    assert merge_close_pairs([(0, 0)], [(2, 0)]) == {}
    with pytest.raises(AssertionError):
        merge_close_pairs([(0, 0)], [(1, 0), (-1, 0)])


# ------------------------------------------------------------ tree logic
def test_cut_zero_charge_edges_examples():
    path = [(0, 1), (1, 2), (2, 3)]
    parts = cut_zero_charge_edges({0, 1, 2, 3}, path, {0: 1, 1: -1, 2: 1, 3: -1})
    assert sorted(map(sorted, parts)) == [[0, 1], [2, 3]]
    star = [(0, 1), (0, 2), (0, 3)]
    parts = cut_zero_charge_edges({0, 1, 2, 3}, star, {0: 0, 1: 0, 2: 0, 3: 0})
    assert sorted(map(sorted, parts)) == [[0], [1], [2], [3]]
    parts = cut_zero_charge_edges({0, 1, 2}, [(0, 1), (1, 2)], {0: 1, 1: 0, 2: -1})
    assert len(parts) == 1


def test_find_sink_examples():
    assert find_sink({0, 1}, [(0, 1)], {0: 1, 1: -1}) == 1
    assert find_sink({0, 1, 2}, [(0, 1), (1, 2)], {0: 2, 1: -1, 2: -1}) == 2
    assert find_sink({5}, [], {5: 0}) == 5


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=8), st.randoms(use_true_random=False))
def test_sink_has_no_outward_edge(charges, rnd):
    n = len(charges)
    charges[-1] -= sum(charges)
    edges = [(rnd.randrange(k), k) for k in range(1, n)]
    q = dict(enumerate(charges))
    for part in cut_zero_charge_edges(set(range(n)), edges, q):
        if len(part) == 1:
            continue
        sigma = find_sink(part, edges, q)
        inner = [(a, b) for a, b in edges if a in part and b in part]
        for a, b in inner:
            if sigma not in (a, b):
                continue
            side = {a}
            grow = True
            while grow:
                grow = False
                for x, y in inner:
                    if (x, y) == (a, b):
                        continue
                    for u, v in ((x, y), (y, x)):
                        if u in side and v not in side:
                            side.add(v)
                            grow = True
            qa = sum(q[v] for v in side)
            if sigma in side:
                assert qa < 0
            else:
                assert qa > 0


# ------------------------------------------------------------ chain moves
def _corridor_planner():
    region = compute_free_space(CORRIDOR).components[0]
    S = [(2, 2), (12, 2), (22, 2)]
    T = [(32, 2), (7, 2), (17, 2)]
    return ComponentPlanner(region, S, T)


def _hops(P, a, b):
    ks = graph_path(P.G, a, b, usable=lambda e: True)
    out, cur = [], a
    for k in ks:
        nxt = P.G.edges[k].other(cur)
        out.append((cur, nxt, k))
        cur = nxt
    return out


def test_chain_move_single_hop():
    P = _corridor_planner()
    t = P.ca.target_ids[2]  # (17, 2)
    moves = P.chain_move(_hops(P, 2, t))
    assert len(moves) == 1 and moves[0].start == Point(22, 2) and moves[0].end == Point(17, 2)


def test_chain_move_shifts_far_end_first():
    P = _corridor_planner()
    goal = P.ca.target_ids[0]  # (32, 2), right end
    hops = _hops(P, 0, goal)
    interior = [b for _, b, _ in hops[:-1] if b in P.occ]
    moves = P.chain_move(hops)
    assert len(moves) == len(interior) + 1
    assert moves[0].end == Point(32, 2) and moves[-1].start == Point(2, 2)
    assert P.occ == {1, 2, goal}


# ---------------------------------------------------------------- solving
def test_solve_component_trivial_cases():
    region = compute_free_space(CORRIDOR).components[0]
    assert solve_component(region, [(5, 2)], [(5, 2)]).moves == []
    plan = solve_component(region, [(5, 2)], [(30, 2)])
    assert len(plan.moves) == 1


@pytest.mark.parametrize("fixture", [fig3ii, fig6])
def test_fixture_plans_verify(fixture):
    inst = fixture()
    region = compute_free_space(inst.workspace).components[0]
    plan = solve_component(region, inst.starts, inst.targets)
    assert check_plan(inst, plan) == []
    m = len(inst.starts)
    assert len(plan.moves) <= 2 * m * m + m


def test_fig6_blocker_target_filled_last():
    inst = fig6()
    region = compute_free_space(inst.workspace).components[0]
    plan = solve_component(region, inst.starts, inst.targets)
    assert len(plan.moves) == 2
    assert tuple(plan.moves[-1].end) == tuple(inst.targets[0])


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 7), st.integers(0, 1))
def test_random_single_component_plans_verify(seed, m, close):
    inst = gen_random(seed, n=28, m=m, close_pairs=close, gadget_p=0.3)
    region = compute_free_space(inst.workspace).components[0]
    plan = solve_component(region, inst.starts, inst.targets)
    assert isinstance(plan, MotionPlan)
    assert check_plan(inst, plan) == []
    assert len(plan.moves) <= 2 * m * m + m


def test_solve_component_rejects_bad_input():
    region = compute_free_space(CORRIDOR).components[0]
    with pytest.raises(ValueError):
        solve_component(region, [(3, 2), (6, 2)], [(20, 2), (30, 2)])
