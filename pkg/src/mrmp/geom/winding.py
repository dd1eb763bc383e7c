"""Winding numbers and crossing tests for chains of segments and arcs."""
from __future__ import annotations

import math

import numpy as np

from .primitives import TWO_PI


def _chord_angle(a, b, p) -> float:
    ax, ay = a[0] - p[0], a[1] - p[1]
    bx, by = b[0] - p[0], b[1] - p[1]
    return math.atan2(ax * by - ay * bx, ax * bx + ay * by)


def winding_number(elements, p) -> int:
    """Winding number of a closed chain around ``p`` (p assumed off the chain).

    An arc contributes the angle of its chord plus a full turn when ``p`` lies
    in the circular segment cut off by that chord.
    """
    total = 0.0
    for e in elements:
        a, b = e.point_at(0.0), e.point_at(1.0)
        if e.kind == "segment":
            total += _chord_angle(a, b, p)
            continue
        c, r = e.center, e.radius
        sgn = 1.0 if e.sweep > 0 else -1.0
        inside = (p[0] - c[0]) ** 2 + (p[1] - c[1]) ** 2 < r * r
        if e.is_full:
            if inside:
                total += sgn * TWO_PI
            continue
        total += _chord_angle(a, b, p)
        if inside:
            m = e.point_at(0.5)
            dx, dy = b[0] - a[0], b[1] - a[1]
            sp = dx * (p[1] - a[1]) - dy * (p[0] - a[0])
            sm = dx * (m[1] - a[1]) - dy * (m[0] - a[0])
            if sp * sm > 0:
                total += sgn * TWO_PI
    return int(round(total / TWO_PI))


def monotone_pieces(elements):
    """Split a chain into y-monotone pieces for crossing tests.

    Returns arrays describing segments ``(x0, y0, x1, y1)`` and arc pieces
    ``(cx, cy, r, ylo, yhi, side)`` where ``side`` is +1 for the right half of
    the circle and -1 for the left half.
    """
    segs = []
    arcs = []
    for e in elements:
        if e.kind == "segment":
            (x0, y0), (x1, y1) = e.point_at(0.0), e.point_at(1.0)
            segs.append((x0, y0, x1, y1))
            continue
        # cut points at angles pi/2 and 3pi/2 (top and bottom of the circle)
        us = [0.0, 1.0]
        for phi in (math.pi / 2, 3 * math.pi / 2):
            u = e.angle_param(phi)
            if u is not None and 0.0 < u < 1.0:
                us.append(u)
            if e.is_full and u == 0.0:
                pass
        if e.is_full:
            us = [0.0, 0.5, 1.0]
        us.sort()
        for u0, u1 in zip(us, us[1:]):
            if u1 - u0 <= 1e-15:
                continue
            p0, p1 = e.point_at(u0), e.point_at(u1)
            pm = e.point_at(0.5 * (u0 + u1))
            side = 1.0 if pm[0] >= e.center[0] else -1.0
            ylo, yhi = (p0[1], p1[1]) if p0[1] <= p1[1] else (p1[1], p0[1])
            arcs.append((e.center[0], e.center[1], e.radius, ylo, yhi, side))
    return np.array(segs, dtype=float).reshape(-1, 4), np.array(arcs, dtype=float).reshape(-1, 6)


def crossing_parity(segs: np.ndarray, arcs: np.ndarray, px: np.ndarray, py: np.ndarray) -> np.ndarray:
    """Even-odd inside test for many points against the pieces of closed chains."""
    count = np.zeros(px.shape, dtype=np.int64)
    for x0, y0, x1, y1 in segs:
        if y0 == y1:
            continue
        lo, hi = (y0, y1) if y0 < y1 else (y1, y0)
        m = (py >= lo) & (py < hi)
        if not m.any():
            continue
        xi = x0 + (py[m] - y0) * (x1 - x0) / (y1 - y0)
        cnt = xi > px[m]
        count[m] += cnt
    for cx, cy, r, ylo, yhi, side in arcs:
        if yhi <= ylo:
            continue
        m = (py >= ylo) & (py < yhi)
        if not m.any():
            continue
        dy = py[m] - cy
        xi = cx + side * np.sqrt(np.maximum(r * r - dy * dy, 0.0))
        count[m] += xi > px[m]
    return (count & 1).astype(bool)
