"""Pairwise intersections between segments and arcs.

Each routine returns a list of ``(u1, u2, point)`` with curve parameters in
[0, 1]. Tangencies within ``EPS`` are reported as a single touching point.
"""
from __future__ import annotations

import math

from .primitives import EPS, Arc, Point, Segment


def _clamp(u: float) -> float:
    return 0.0 if u < 0.0 else (1.0 if u > 1.0 else u)


def seg_seg(s1: Segment, s2: Segment, tol: float = EPS):
    ax, ay = s1.a
    bx, by = s1.b
    cx, cy = s2.a
    dx, dy = s2.b
    d1x, d1y = bx - ax, by - ay
    d2x, d2y = dx - cx, dy - cy
    l1 = math.hypot(d1x, d1y)
    l2 = math.hypot(d2x, d2y)
    if l1 == 0.0 or l2 == 0.0:
        return []
    den = d1x * d2y - d1y * d2x
    if abs(den) <= 1e-12 * l1 * l2:
        # parallel: only collinear overlaps matter, reported by their endpoints
        if abs((cx - ax) * d1y - (cy - ay) * d1x) / l1 > tol:
            return []
        out = []
        for p in (s2.a, s2.b):
            u = s1.param_of(p, tol)
            if u is not None:
                out.append((u, s2.closest_param(p), p))
        for p in (s1.a, s1.b):
            u = s2.param_of(p, tol)
            if u is not None:
                out.append((s1.closest_param(p), u, p))
        return out
    ex, ey = cx - ax, cy - ay
    t = (ex * d2y - ey * d2x) / den
    s = (ex * d1y - ey * d1x) / den
    if t < -tol / l1 or t > 1 + tol / l1 or s < -tol / l2 or s > 1 + tol / l2:
        return []
    t, s = _clamp(t), _clamp(s)
    return [(t, s, Point(ax + t * d1x, ay + t * d1y))]


def line_circle_params(seg: Segment, center, r: float, tol: float = EPS):
    """Parameters along the segment's supporting line where it meets the circle."""
    ax, ay = seg.a
    dx, dy = seg.b[0] - ax, seg.b[1] - ay
    L2 = dx * dx + dy * dy
    L = math.sqrt(L2)
    fx, fy = ax - center[0], ay - center[1]
    t0 = -(fx * dx + fy * dy) / L2
    # signed distance from center to the line
    h = abs(fx * dy - fy * dx) / L
    if h > r + tol:
        return []
    if abs(h - r) <= tol:
        return [t0]
    hc = math.sqrt(max(r * r - h * h, 0.0)) / L
    return [t0 - hc, t0 + hc]


def seg_arc(seg: Segment, arc: Arc, tol: float = EPS):
    L = seg.length
    if L == 0.0:
        return []
    out = []
    for t in line_circle_params(seg, arc.center, arc.radius, tol):
        if t < -tol / L or t > 1 + tol / L:
            continue
        t = _clamp(t)
        p = seg.point_at(t)
        phi = math.atan2(p[1] - arc.center[1], p[0] - arc.center[0])
        u = arc.angle_param(phi, tol / arc.radius)
        if u is not None:
            out.append((t, u, p))
    return out


def arc_seg(arc: Arc, seg: Segment, tol: float = EPS):
    return [(u, t, p) for (t, u, p) in seg_arc(seg, arc, tol)]


def arc_arc(a1: Arc, a2: Arc, tol: float = EPS):
    c1, c2 = a1.center, a2.center
    r1, r2 = a1.radius, a2.radius
    dx, dy = c2[0] - c1[0], c2[1] - c1[1]
    d = math.hypot(dx, dy)
    if d <= tol and abs(r1 - r2) <= tol:
        # coincident circles: report arc endpoints lying on the other arc
        out = []
        if not a2.is_full:
            for p in (a2.point_at(0.0), a2.point_at(1.0)):
                u = a1.param_of(p, tol)
                if u is not None:
                    out.append((u, a2.closest_param(p), p))
        if not a1.is_full:
            for p in (a1.point_at(0.0), a1.point_at(1.0)):
                u = a2.param_of(p, tol)
                if u is not None:
                    out.append((a1.closest_param(p), u, p))
        return out
    if d <= tol:
        return []
    if d > r1 + r2 + tol or d < abs(r1 - r2) - tol:
        return []
    ux, uy = dx / d, dy / d
    pts = []
    if abs(d - (r1 + r2)) <= tol:
        pts.append(Point(c1[0] + r1 * ux, c1[1] + r1 * uy))
    elif abs(d - abs(r1 - r2)) <= tol:
        s = 1.0 if r1 > r2 else -1.0
        pts.append(Point(c1[0] + s * r1 * ux, c1[1] + s * r1 * uy))
    else:
        a = (d * d + r1 * r1 - r2 * r2) / (2 * d)
        h = math.sqrt(max(r1 * r1 - a * a, 0.0))
        mx, my = c1[0] + a * ux, c1[1] + a * uy
        pts.append(Point(mx - h * uy, my + h * ux))
        pts.append(Point(mx + h * uy, my - h * ux))
    out = []
    for p in pts:
        u1 = a1.angle_param(math.atan2(p[1] - c1[1], p[0] - c1[0]), tol / r1)
        if u1 is None:
            continue
        u2 = a2.angle_param(math.atan2(p[1] - c2[1], p[0] - c2[0]), tol / r2)
        if u2 is None:
            continue
        out.append((u1, u2, p))
    return out


def intersect(c1, c2, tol: float = EPS):
    if c1.kind == "segment":
        if c2.kind == "segment":
            return seg_seg(c1, c2, tol)
        return seg_arc(c1, c2, tol)
    if c2.kind == "segment":
        return arc_seg(c1, c2, tol)
    return arc_arc(c1, c2, tol)


def ray_up_hits(curve, x: float, y0: float, tol: float = EPS):
    """(y, u) pairs where the upward vertical ray from (x, y0) meets ``curve``."""
    out = []
    if curve.kind == "segment":
        (ax, ay), (bx, by) = curve.a, curve.b
        if abs(bx - ax) <= 1e-15:
            return out  # vertical, collinear with the ray at most
        lo, hi = (ax, bx) if ax < bx else (bx, ax)
        if x < lo - tol or x > hi + tol:
            return out
        u = _clamp((x - ax) / (bx - ax))
        y = ay + u * (by - ay)
        if y > y0 + tol:
            out.append((y, u))
        return out
    c, r = curve.center, curve.radius
    dx = x - c[0]
    if abs(dx) > r + tol:
        return out
    h = math.sqrt(max(r * r - dx * dx, 0.0))
    for y in (c[1] - h, c[1] + h):
        if y <= y0 + tol:
            continue
        u = curve.angle_param(math.atan2(y - c[1], dx), tol / r)
        if u is not None:
            out.append((y, u))
    return out
