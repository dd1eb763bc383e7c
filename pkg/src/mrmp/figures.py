"""Fixture instances for the lower-bound constructions and worked examples.

The two lower-bound workspaces are built as the union of discs of radius
``R = 1 + kappa`` swept along the intended robot paths. Every wall tip that a
robot has to turn around is then an exact polygon vertex, and the free space
is a thin band of width about ``2 * kappa`` around the paths. Circular pieces
are replaced by inscribed polylines with sagitta at most ``kappa / 2`` (which
is below ``epsilon / 4``), so the polygon never leaves the ideal region. A
finer ``sagitta`` can be passed to compare against a closer approximation.
"""
from __future__ import annotations

import math

from shapely.geometry import Polygon
from shapely.ops import unary_union

from .geom.primitives import Point

KAPPA_FRAC = 1 / 20  # kappa = epsilon * KAPPA_FRAC


def _steps(radius: float, sweep: float, sagitta: float) -> int:
    """Number of chords so that each chord is within ``sagitta`` of the arc."""
    c = 1.0 - sagitta / radius
    dmax = 2.0 * math.acos(max(-1.0, min(1.0, c)))
    return max(1, math.ceil(abs(sweep) / dmax - 1e-12))


def arc_points(center, radius: float, a0: float, a1: float, sagitta: float) -> list[tuple[float, float]]:
    """Inscribed polyline from angle a0 to a1 (radians), both ends on the circle."""
    n = _steps(radius, a1 - a0, sagitta)
    return [(center[0] + radius * math.cos(a0 + (a1 - a0) * k / n),
             center[1] + radius * math.sin(a0 + (a1 - a0) * k / n)) for k in range(n + 1)]


def _disc(c, r, sag):
    return Polygon(arc_points(c, r, 0.0, 2 * math.pi, sag)[:-1])


def _sector(apex, r, a0, a1, sag):
    return Polygon([tuple(apex)] + arc_points(apex, r, a0, a1, sag))


def _strip(p, q, r):
    """Rectangle of half-width r around segment pq."""
    dx, dy = q[0] - p[0], q[1] - p[1]
    L = math.hypot(dx, dy)
    nx, ny = -dy / L * r, dx / L * r
    return Polygon([(p[0] + nx, p[1] + ny), (p[0] - nx, p[1] - ny),
                    (q[0] - nx, q[1] - ny), (q[0] + nx, q[1] + ny)])


def _outline(shapes, exact=()) -> list[Point]:
    """CCW vertex list of the union; vertices near ``exact`` points are snapped onto them."""
    u = unary_union(shapes)
    if u.geom_type == "Polygon" and all(Polygon(i).area < 1e-12 for i in u.interiors):
        u = Polygon(u.exterior)  # slivers where pieces share an apex
    if u.geom_type != "Polygon" or len(u.interiors):
        raise RuntimeError("fixture union is not a simple polygon")
    u = u.simplify(0.0)
    if not u.exterior.is_ccw:
        u = Polygon(list(u.exterior.coords)[::-1])
    pts = list(u.exterior.coords)[:-1]
    out = []
    for x, y in pts:
        for e in exact:
            if math.hypot(x - e[0], y - e[1]) < 1e-6:
                x, y = e
        p = Point(round(x, 12), round(y, 12))
        if out and math.dist(p, out[-1]) < 1e-6:
            if p in exact:
                out[-1] = p
            continue
        out.append(p)
    while len(out) > 1 and math.dist(out[0], out[-1]) < 1e-6:
        out.pop(0 if out[-1] in exact else -1)
    return out


def _pt(x, y) -> Point:
    return Point(round(x, 12), round(y, 12))


# ------------------------------------------------------------------ fig2i
def fig2i(epsilon: float = 0.1, sagitta: float | None = None):
    """Two robots above a width-2 corridor, starts 4 - epsilon apart.

    Each robot has to turn around a wall tip (A or B) to enter the corridor,
    and each start lies within distance 2 of the other robot's entry point,
    so neither can go first.
    """
    from .instances import Instance
    k = epsilon * KAPPA_FRAC
    R = 1.0 + k
    sag = k / 2 if sagitta is None else sagitta
    A, B = (-R, 0.0), (R, 0.0)
    # s1 = A + R(cos al, sin al), |s1 s2| = 2R(1 - cos al) = 4 - epsilon
    al = math.acos(1.0 - (4.0 - epsilon) / (2.0 * R))
    s1 = (A[0] + R * math.cos(al), A[1] + R * math.sin(al))
    s2 = (-s1[0], s1[1])
    t1, t2 = (0.0, -4.5), (0.0, -8.5)
    bottom = t2[1] - R
    shapes = [
        _sector(A, 2 * R, 0.0, al, sag),
        _sector(B, 2 * R, math.pi - al, math.pi, sag),
        _disc(s1, R, sag), _disc(s2, R, sag),
        Polygon([A, (A[0], bottom), (B[0], bottom), B]),
    ]
    W = _outline(shapes, exact=(A, B))
    return Instance(W, [_pt(*s1), _pt(*s2)], [_pt(*t1), _pt(*t2)], name="fig2i",
                    expected="preconditionViolation",
                    extra={"epsilon": epsilon, "A": list(A), "B": list(B)})


# ----------------------------------------------------------------- fig2ii
def fig2ii(epsilon: float = 0.1, sagitta: float | None = None):
    """Two free-space components meeting at a gap AB of width 2 - delta.

    The upper robot lives on two arcs around the tips A and B and has to get
    from s1 to t1, which are 3 - epsilon apart. The lower robot runs through
    width-2 corridors and passes just below the gap, where both upper
    positions reach it.
    """
    from .instances import Instance
    delta = epsilon / 2  # < 2 epsilon / 3
    k = epsilon * KAPPA_FRAC
    R = 1.0 + k
    sag = k / 2 if sagitta is None else sagitta
    a = 1.0 - delta / 2
    A, B = (-a, 0.0), (a, 0.0)
    thd = math.acos(a / R)  # angle of the gap points seen from A
    al = math.acos((a - (3.0 - epsilon) / 2) / R)
    s1 = (A[0] + R * math.cos(al), R * math.sin(al))
    t1 = (-s1[0], s1[1])
    dt, db = (0.0, R * math.sin(thd)), (0.0, -R * math.sin(thd))
    th_low = math.radians(60.0)
    corridor = 5.0
    u = (math.cos(math.radians(210.0)), math.sin(math.radians(210.0)))
    pL = (A[0] + R * math.cos(-th_low), -R * math.sin(th_low))
    s2 = (pL[0] + corridor * u[0], pL[1] + corridor * u[1])
    pR = (-pL[0], pL[1])
    t2 = (-s2[0], s2[1])
    shapes = [
        _sector(A, 2 * R, thd, al, sag), _sector(B, 2 * R, math.pi - al, math.pi - thd, sag),
        _sector(A, 2 * R, -th_low, -thd, sag), _sector(B, 2 * R, math.pi + thd, math.pi + th_low, sag),
        # the gap between the tips; lies inside the discs around the gap points
        _sector(A, R, -thd, thd, sag), _sector(B, R, math.pi - thd, math.pi + thd, sag),
        _disc(s1, R, sag), _disc(t1, R, sag), _disc(dt, R, sag), _disc(db, R, sag),
        _disc(pL, R, sag), _disc(pR, R, sag),
        _strip(pL, s2, R), _strip(pR, t2, R), _disc(s2, R, sag), _disc(t2, R, sag),
    ]
    W = _outline(shapes, exact=(A, B))
    return Instance(W, [_pt(*s1), _pt(*s2)], [_pt(*t1), _pt(*t2)], name="fig2ii",
                    expected="preconditionViolation",
                    extra={"epsilon": epsilon, "delta": delta, "A": list(A), "B": list(B)})


# ------------------------------------------------------------------- fig8
def fig8(epsilon: float = 0.1):
    """Upper room over a lower corridor, joined by a slot narrower than 2.

    The upper start sits in the slot mouth; its aura cuts the lower corridor,
    so the upper robot has to leave before the lower one can pass.
    """
    from .instances import Instance
    W = [(-7.2, -2.42), (7.2, -2.42), (7.2, -0.02), (0.95, -0.02), (0.95, 0.0), (3.0, 0.0),
         (3.0, 5.5), (-3.0, 5.5), (-3.0, 0.0), (-0.95, 0.0), (-0.95, -0.02), (-7.2, -0.02)]
    starts = [(-6.0, -1.22), (0.0, 0.35)]
    targets = [(6.0, -1.22), (0.0, 4.4)]
    return Instance([Point(*p) for p in W], [Point(*p) for p in starts], [Point(*p) for p in targets],
                    name="fig8", expected="solvable")


# ------------------------------------------------------------------- fig9
def fig9(epsilon: float = 0.1):
    """Two rooms joined by a wedge-tipped gap of width 1.98.

    The upper robot sits on arcs around the two tips, so both of its
    positions reach into the lower room. Neither cuts the lower room apart,
    which leaves the order free but forces the lower robot around the auras.
    """
    from .instances import Instance
    a, L, top, floor = 0.99, 1.2, 5.0, -3.4
    up, dn = math.radians(40.0), math.radians(55.0)
    U = (-a - L * math.cos(up), -L * math.sin(up))
    D = (-a - L * math.cos(dn), -L * math.sin(dn))
    left = [(-6.0, top), (-6.0, U[1]), U, (-a, 0.0), D, (-7.0, D[1]), (-7.0, floor)]
    W = left + [(-x, y) for x, y in reversed(left)]
    r, al = 1.005, math.radians(122.0)
    s2 = (-a + r * math.cos(al), r * math.sin(al))
    starts = [(-5.5, floor + 1.2), s2]
    targets = [(5.5, floor + 1.2), (-s2[0], s2[1])]
    return Instance([_pt(*p) for p in W], [_pt(*p) for p in starts], [_pt(*p) for p in targets],
                    name="fig9", expected="solvable", extra={"epsilon": epsilon})


# ------------------------------------------------------------------- fig6
def fig6(epsilon: float = 0.1):
    """A thin wall tip with a width-2.2 corridor beside it.

    The first target hugs the tip, and the first start sits in the corridor
    mouth. The aura of the start cuts off a remote piece of the room that
    the route to the target has to cross, so the motion graph gets a
    blockable edge.
    """
    from .instances import GADGET_S, GADGET_T, GADGET_TH, GADGET_WP, GADGET_CEIL, Instance
    h, x1 = GADGET_TH / 2, GADGET_TH / 2 + 2 + GADGET_WP
    W = [(h, 0.0), (-h, 0.0), (-h, -4.0), (-7.0, -4.0), (-7.0, GADGET_CEIL), (x1, GADGET_CEIL),
         (x1, -6.0), (12.0, -6.0), (12.0, -12.0), (h, -12.0)]
    starts = [GADGET_S, (8.0, -9.0)]
    targets = [GADGET_T, (-5.0, -2.0)]
    return Instance([_pt(*p) for p in W], [_pt(*p) for p in starts], [_pt(*p) for p in targets],
                    name="fig6", expected="solvable", extra={"epsilon": epsilon})


# ----------------------------------------------------------------- fig3ii
def fig3ii(epsilon: float = 0.1):
    """One component with three remote pieces, two of them blocking.

    Two thin wall tips rise from the floor with a ceiling pocket beside each.
    Both pocket targets cut off a blocking piece next to their tip, and the
    target in the slanted notch cuts off a third piece that blocks nothing.
    """
    from .instances import Instance
    W = [(0.0, 0.0), (1.248917, 0.0), (0.952736, -3.829089), (3.358885, -2.798098), (3.655066, 0.0),
         (8.520385, 0.0), (8.520385, 5.234254), (8.540385, 5.234254), (8.540385, 0.0),
         (15.348201, 0.0), (15.348201, 5.24929), (15.368201, 5.24929), (15.368201, 0.0),
         (20.367816, 0.0), (20.367816, 2.908568), (17.568201, 2.908568), (17.568201, 8.64929),
         (11.718533, 8.64929), (11.718533, 2.908568), (10.740385, 2.908568), (10.740385, 8.634254),
         (5.361022, 8.634254), (5.361022, 2.908568), (0.0, 2.908568)]
    starts = [(9.030385, 7.534254), (15.858201, 7.54929), (3.51017, 1.346378)]
    targets = [(2.205669, -0.799278), (14.626952, 5.970539), (7.799136, 5.955503)]
    return Instance([_pt(*p) for p in W], [_pt(*p) for p in starts], [_pt(*p) for p in targets],
                    name="fig3ii", expected="solvable", extra={"epsilon": epsilon})
