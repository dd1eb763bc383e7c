import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mrmp.geom.intersect import intersect
from mrmp.geom.primitives import Arc, Point, Segment, circle, dist, sample_chain
from mrmp.geom.region import (aura_union, boundary_components_in_disc, connected_faces, disc,
                              path_clearance, point_in_region, polygon_region, region_boolean)

coord = st.floats(-10, 10, allow_nan=False)
point = st.builds(Point, coord, coord)

# lens of two radius-2 discs 3 apart: 2r^2 acos(d/2r) - (d/2) sqrt(4r^2 - d^2), frozen
LENS_AREA = 1.8132470159104392


def rect(x0, y0, x1, y1):
    return polygon_region([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])


# ------------------------------------------------------------------ dist
@pytest.mark.parametrize("p,q,d", [((0, 0), (3, 4), 5.0), ((1, 1), (1, 1), 0.0), ((0, 0), (1, 0), 1.0)])
def test_dist_examples(p, q, d):
    assert dist(p, q) == d


@given(point, point)
def test_dist_symmetric_nonnegative(p, q):
    assert dist(p, q) == dist(q, p) >= 0


# --------------------------------------------------------------- curves
@given(point, st.floats(0.1, 5), st.floats(-7, 7), st.floats(-6.2, 6.2), st.floats(0, 1))
def test_arc_point_on_circle(c, r, a0, sweep, u):
    a = Arc(c, r, a0, sweep)
    assert abs(dist(a.point_at(u), c) - r) < 1e-9


@given(point, point, point, point)
def test_segment_intersections_lie_on_both(a, b, c, d):
    s1, s2 = Segment(a, b), Segment(c, d)
    if s1.length < 1e-3 or s2.length < 1e-3:
        return
    for u1, u2, p in intersect(s1, s2):
        assert dist(s1.point_at(u1), p) < 1e-6
        assert dist(s2.point_at(u2), p) < 1e-6


@given(point, st.floats(0.5, 4), point, st.floats(0.5, 4))
def test_circle_intersections_lie_on_both(c1, r1, c2, r2):
    a, b = circle(c1, r1), circle(c2, r2)
    for _, _, p in intersect(a, b):
        assert abs(dist(p, c1) - r1) < 1e-6
        assert abs(dist(p, c2) - r2) < 1e-6


# --------------------------------------------------------------- booleans
def test_difference_rect_disc_has_hole():
    r = region_boolean(rect(0, 0, 10, 6), disc((5, 3), 2), "difference")
    assert len(r.faces) == 1 and len(r.faces[0].holes) == 1
    assert r.area == pytest.approx(60 - 4 * math.pi, abs=1e-9)


def test_intersection_lens_area():
    r = region_boolean(disc((0, 0), 2), disc((3, 0), 2), "intersection")
    assert len(r.faces) == 1
    assert r.area == pytest.approx(LENS_AREA, abs=1e-9)
    xs = [p[0] for p in sample_chain(r.elements, 0.01)]
    assert max(xs) - min(xs) == pytest.approx(1.0, abs=1e-6)


def test_union_disjoint_discs_two_faces():
    r = region_boolean(disc((0, 0), 1), disc((5, 0), 1), "union")
    assert len(connected_faces(r)) == 2


def test_connected_faces_rectangle_and_slab():
    assert len(connected_faces(rect(0, 0, 4, 3))) == 1
    cut = region_boolean(rect(0, 0, 10, 4), rect(4, -1, 5, 5), "difference")
    assert len(connected_faces(cut)) == 2


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.5, 2.5))
def test_inclusion_exclusion_on_discs(x, y, r):
    a, b = disc((0, 0), 2), disc((x, y), r)
    u = region_boolean(a, b, "union").area
    i = region_boolean(a, b, "intersection").area
    assert u + i == pytest.approx(a.area + b.area, abs=1e-7)


# ---------------------------------------------------------------- queries
def test_point_in_region_cases():
    d = disc((0, 0), 2)
    assert point_in_region((0, 0), d) == "inside"
    assert point_in_region((2 + 5e-10, 0), d) == "boundary"
    assert point_in_region((50, 0), d) == "outside"


def test_boundary_chains_in_disc():
    wall = rect(-10, 0, 10, 10)
    assert len(boundary_components_in_disc(wall, (0, 0), 2)) == 1
    corridor = rect(-10, 0, 10, 1.5)
    assert len(boundary_components_in_disc(corridor, (0, 0.75), 2)) == 2
    assert boundary_components_in_disc(wall, (0, 5), 2) == []


def test_path_clearance_examples():
    assert path_clearance([Segment(Point(0, 0), Point(10, 0))], (5, 3)) == pytest.approx(3)
    assert path_clearance([circle((1, 1), 2)], (1, 1)) == pytest.approx(2)


@settings(max_examples=30, deadline=None)
@given(point, st.floats(0.5, 3), st.floats(-3, 3))
def test_path_clearance_matches_sampling(p, r, sweep):
    path = [Segment(Point(0, 0), Point(2, 0)), Segment(Point(2, 0), Point(2, 2)), Arc(Point(2, 2 + r), r, -math.pi / 2, sweep)]
    pts = np.array(sample_chain(path, 1e-4))
    dense = np.min(np.hypot(pts[:, 0] - p[0], pts[:, 1] - p[1]))
    got = path_clearance(path, p)
    assert got <= dense + 1e-9
    assert dense - got < 1e-4


def test_aura_union_cases():
    assert len(aura_union([(0, 0)]).faces) == 1
    assert aura_union([(0, 0)]).area == pytest.approx(4 * math.pi)
    assert len(aura_union([(0, 0), (4, 0)]).faces) == 2
    assert aura_union([]).is_empty
