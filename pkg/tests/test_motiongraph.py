import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mrmp.figures import fig3ii, fig6
from mrmp.freespace import ComponentAnalysis, compute_free_space
from mrmp.geom.primitives import dist
from mrmp.geom.region import path_clearance, point_in_region
from mrmp.instances import gen_random
from mrmp.motiongraph import MotionGraph, graph_path
from mrmp.paths import NoPath
from mrmp.planner import ComponentPlanner

RECT = [(0, 0), (20, 0), (20, 10), (0, 10)]


def planner_for(inst, c=0):
    fs = compute_free_space(inst.workspace)
    per, _, _ = fs.partition(inst.starts, inst.targets)
    S = [inst.starts[i] for i in per[c].starts]
    T = [inst.targets[j] for j in per[c].targets]
    return ComponentPlanner(fs.components[c], S, T)


def check_edge_paths(P):
    ca = P.ca
    for e in P.G.edges:
        assert e.u != e.v
        path = e.oriented_path(e.u)
        assert dist(path[0].a, ca.pts[e.u]) < 1e-7
        assert dist(path[-1].b, ca.pts[e.v]) < 1e-7
        for a, b in zip(path, path[1:]):
            assert dist(a.b, b.a) < 1e-7
        for piece in path:
            assert point_in_region(piece.point_at(0.5), ca.region, 1e-7) != "outside"


def test_lone_target_gets_only_its_own_entry():
    fs = compute_free_space(RECT)
    ca = ComponentAnalysis(fs.components[0], [], [(10, 5)])
    G = MotionGraph(ca)
    assert G.edges == []
    assert {en.node for lam in G.lambdas for en in lam.entries} <= {0}


def test_empty_rectangle_graph_connected_with_guaranteed_edges():
    fs = compute_free_space(RECT)
    P = ComponentPlanner(fs.components[0], [(3, 3), (10, 7)], [(17, 3), (3, 7.5)])
    assert P.G.is_connected()
    assert all(e.kind == "guaranteed" for e in P.G.edges)
    check_edge_paths(P)


def test_fig6_has_blockable_edge_with_target_blocker():
    P = planner_for(fig6())
    bl = [e for e in P.G.edges if e.kind == "blockable"]
    assert bl and all(e.blockers == (P.ca.target_ids[0],) for e in bl)
    check_edge_paths(P)
    blockers = set(bl[0].blockers)
    for e in bl:
        for pid in P.ca.structural - {e.u, e.v} - blockers:
            assert path_clearance(e.path, P.ca.pts[pid]) >= 2 - 1e-6


def test_graph_path_respects_occupied_blockers():
    # fig6: start 1 sits beyond the blocking area of target 0 (id 2)
    G = planner_for(fig6()).G
    assert graph_path(G, 0, 0) == []
    same_residual = graph_path(G, 0, 3)
    assert all(G.edges[k].kind == "guaranteed" for k in same_residual)
    with pytest.raises(NoPath):
        graph_path(G, 0, 1, usable=lambda e: 2 not in e.blockers)
    across = graph_path(G, 0, 1, usable=lambda e: True)
    assert [G.edges[k].kind for k in across] == ["blockable"]


def test_fig3ii_graph_connected_and_clear():
    P = planner_for(fig3ii())
    assert P.G.is_connected()
    check_edge_paths(P)
    for e in P.G.edges:
        if e.kind == "guaranteed":
            for pid in P.ca.structural - {e.u, e.v}:
                assert path_clearance(e.path, P.ca.pts[pid]) >= 2 - 1e-6


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 5000), st.integers(2, 6), st.booleans())
def test_random_graphs_connected_with_clear_guaranteed_edges(seed, m, gadget):
    inst = gen_random(seed, n=24, m=m, gadget_p=0.5 if gadget else 0.0)
    P = planner_for(inst)
    assert P.ca.H.is_tree()
    assert P.G.is_connected()
    check_edge_paths(P)
    ns = len(P.starts)
    partner = {s: ns + t for s, t in P.pairs.items()}
    for e in P.G.edges:
        if e.kind != "guaranteed":
            continue
        skip = {e.u, e.v} | {partner[x] for x in (e.u, e.v) if x in partner}
        for pid in P.ca.structural - skip:
            assert path_clearance(e.path, P.ca.pts[pid]) >= 2 - 1e-6
