import math

import numpy as np
import pytest
import shapely
from hypothesis import given, settings
from hypothesis import strategies as st
from shapely.geometry import Polygon

from mrmp.figures import fig3ii, fig6
from mrmp.freespace import (ComponentAnalysis, EmptyFreeSpace, MalformedPolygon, compute_free_space,
                            remote_components, validate_polygon)
from mrmp.geom.region import aura_union, disc, point_in_region, region_boolean

L_SHAPE = [(0, 0), (8, 0), (8, 3), (3, 3), (3, 7), (0, 7)]
L_SHAPE_FREE_AREA = 10.214601841415321  # shapely buffer(-1), 8192 segments per quarter circle
NOTCHED = [(0, 0), (10, 0), (10, 3.9), (5.95, 3.9), (5.95, 1.9), (4.05, 1.9), (4.05, 3.9), (0, 3.9)]


def test_rectangle_offsets_to_rectangle():
    fs = compute_free_space([(0, 0), (10, 0), (10, 6), (0, 6)])
    assert len(fs.components) == 1
    assert fs.region.area == pytest.approx(32.0)
    assert fs.region.bbox() == pytest.approx((1, 1, 9, 5))


def test_l_shape_area_matches_buffer_oracle():
    assert compute_free_space(L_SHAPE).region.area == pytest.approx(L_SHAPE_FREE_AREA, abs=1e-6)


def test_narrow_passage_splits_free_space():
    assert len(compute_free_space(NOTCHED).components) == 2


def test_clockwise_polygon_is_reversed():
    cw = list(reversed(L_SHAPE))
    assert compute_free_space(cw).region.area == pytest.approx(L_SHAPE_FREE_AREA, abs=1e-6)
    assert validate_polygon(cw) == validate_polygon(L_SHAPE)


@pytest.mark.parametrize("poly", [
    [(0, 0), (1, 0)],
    [(0, 0), (4, 4), (4, 0), (0, 4)],
    [(0, 0), (4, 0), (4, 0), (0, 4)],
])
def test_malformed_polygons(poly):
    with pytest.raises(MalformedPolygon):
        compute_free_space(poly)


def test_thin_polygon_has_empty_free_space():
    with pytest.raises(EmptyFreeSpace):
        compute_free_space([(0, 0), (10, 0), (10, 1.5), (0, 1.5)])


@settings(max_examples=25, deadline=None)
@given(st.floats(2.5, 20), st.floats(2.5, 20))
def test_rectangle_area_property(w, h):
    fs = compute_free_space([(0, 0), (w, 0), (w, h), (0, h)])
    assert fs.region.area == pytest.approx((w - 2) * (h - 2), rel=1e-9, abs=1e-9)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_membership_matches_distance_oracle(seed):
    from mrmp.instances import random_polygon
    W = random_polygon(seed, n=24)
    fs = compute_free_space(W)
    P = Polygon(W)
    rng = np.random.default_rng(seed)
    x0, y0, x1, y1 = P.bounds
    xs, ys = rng.uniform(x0, x1, 4000), rng.uniform(y0, y1, 4000)
    d = shapely.distance(P.exterior, shapely.points(xs, ys))
    want = shapely.contains_xy(P, xs, ys) & (d >= 1.0)
    band = np.abs(d - 1.0) <= 1e-6
    assert not np.any((fs.region.contains(xs, ys) != want) & ~band)


def test_components_are_simply_connected():
    for comp in compute_free_space(NOTCHED).components:
        assert len(comp.faces) == 1 and not comp.faces[0].holes


# --------------------------------------------------------------- stage 2
def test_target_without_start_auras_has_no_remote_pieces():
    fs = compute_free_space([(0, 0), (12, 0), (12, 6), (0, 6)])
    assert remote_components((3, 3), [(9, 3)], fs.components[0]) == []


def test_remote_piece_areas_add_up():
    # D2(t) within F splits into the home piece, one remote piece and the part under start auras
    inst = fig6()
    fs = compute_free_space(inst.workspace)
    F = fs.components[0]
    t = inst.targets[0]
    ca = ComponentAnalysis(F, inst.starts, inst.targets)
    mine = [r for r in ca.remotes if r.owner == ca.target_ids[0]]
    assert len(mine) == 1
    local = region_boolean(disc(t, 2.0), F, "intersection")
    covered = region_boolean(local, aura_union(inst.starts), "intersection")
    home = ca.faces_region(ca.main_faces[ca.target_ids[0]])
    total = home.area + ca.remote_region(mine[0]).area + covered.area
    assert total == pytest.approx(local.area, abs=1e-7)


def test_fig3ii_three_remote_pieces_two_blocking():
    inst = fig3ii()
    fs = compute_free_space(inst.workspace)
    ca = ComponentAnalysis(fs.components[0], inst.starts, inst.targets)
    assert len(ca.remotes) == 3
    assert sum(r.is_blocking for r in ca.remotes) == 2
    for r in ca.remotes:
        if r.is_blocking:
            assert len(r.free_boundary) == 2
            for ch in r.free_boundary:
                assert ch.x != ch.y
    assert len(ca.H.nodes) == 3 and len(ca.H.edges) == 2 and ca.H.is_tree()


def test_fig6_one_blocker_two_residual_nodes():
    inst = fig6()
    fs = compute_free_space(inst.workspace)
    ca = ComponentAnalysis(fs.components[0], inst.starts, inst.targets)
    assert [r.is_blocking for r in ca.remotes].count(True) == 1
    assert len(ca.H.nodes) == 2 and len(ca.H.edges) == 1


def test_no_blockers_one_residual_node():
    fs = compute_free_space([(0, 0), (20, 0), (20, 10), (0, 10)])
    ca = ComponentAnalysis(fs.components[0], [(3, 3), (10, 5)], [(17, 7), (3, 8)])
    assert len(ca.H.nodes) == 1 and ca.H.edges == []


def test_fstar_of_rectangle_minus_start_aura_has_hole():
    fs = compute_free_space([(0, 0), (20, 0), (20, 10), (0, 10)])
    ca = ComponentAnalysis(fs.components[0], [(10, 5)], [(4, 5)])
    regs = ca.fstar_regions()
    assert len(regs) == 1 and len(regs[0].faces) == 1 and len(regs[0].faces[0].holes) == 1
    assert point_in_region((10, 5), regs[0]) == "outside"
    assert regs[0].area == pytest.approx(18 * 8 - 4 * math.pi, abs=1e-9)
