"""Points, straight segments and circular arcs.

All curve pieces share a parametrisation u in [0, 1] from start to end so the
arrangement code can treat them uniformly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

EPS = 1e-9
TWO_PI = 2.0 * math.pi


class Point(NamedTuple):
    x: float
    y: float


def dist(p, q) -> float:
    """Euclidean distance between two points."""
    return math.hypot(p[0] - q[0], p[1] - q[1])


def _cross(ax, ay, bx, by) -> float:
    return ax * by - ay * bx


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    kind = "segment"
    curvature = 0.0

    @property
    def length(self) -> float:
        return dist(self.a, self.b)

    def point_at(self, u: float) -> Point:
        a, b = self.a, self.b
        return Point(a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1]))

    def tangent(self, u: float = 0.0) -> tuple[float, float]:
        dx, dy = self.b[0] - self.a[0], self.b[1] - self.a[1]
        n = math.hypot(dx, dy)
        return (dx / n, dy / n)

    def reversed(self) -> "Segment":
        return Segment(self.b, self.a)

    def sub(self, u0: float, u1: float) -> "Segment":
        return Segment(self.point_at(u0), self.point_at(u1))

    def bbox(self) -> tuple[float, float, float, float]:
        a, b = self.a, self.b
        return (min(a[0], b[0]), min(a[1], b[1]), max(a[0], b[0]), max(a[1], b[1]))

    def closest_param(self, p) -> float:
        ax, ay = self.a
        dx, dy = self.b[0] - ax, self.b[1] - ay
        den = dx * dx + dy * dy
        if den == 0.0:
            return 0.0
        u = ((p[0] - ax) * dx + (p[1] - ay) * dy) / den
        return min(1.0, max(0.0, u))

    def distance_to(self, p) -> float:
        return dist(p, self.point_at(self.closest_param(p)))

    def param_of(self, p, tol: float = EPS) -> float | None:
        """Parameter of ``p`` if it lies on the segment within ``tol``."""
        u = self.closest_param(p)
        if dist(p, self.point_at(u)) > tol:
            return None
        return u

    def area_term(self) -> float:
        """Contribution to the signed area of a closed chain (Green's formula)."""
        return 0.5 * (self.a[0] * self.b[1] - self.b[0] * self.a[1])

    def top_params(self) -> list[float]:
        return []


@dataclass(frozen=True)
class Arc:
    """Circular arc from angle ``start`` sweeping ``sweep`` radians (ccw if positive).

    A sweep of magnitude 2*pi is a full circle.
    """

    center: Point
    radius: float
    start: float
    sweep: float

    kind = "arc"

    @property
    def start_angle(self) -> float:
        return self.start

    @property
    def end_angle(self) -> float:
        return self.start + self.sweep

    @property
    def ccw(self) -> bool:
        return self.sweep > 0

    @property
    def orientation(self) -> str:
        return "ccw" if self.sweep > 0 else "cw"

    @property
    def is_full(self) -> bool:
        return abs(abs(self.sweep) - TWO_PI) < 1e-12

    @property
    def curvature(self) -> float:
        return (1.0 if self.sweep > 0 else -1.0) / self.radius

    @property
    def length(self) -> float:
        return self.radius * abs(self.sweep)

    @property
    def start_point(self) -> Point:
        return self.point_at(0.0)

    @property
    def end_point(self) -> Point:
        return self.point_at(1.0)

    # uniform names with Segment
    @property
    def a(self) -> Point:
        return self.point_at(0.0)

    @property
    def b(self) -> Point:
        return self.point_at(1.0)

    def angle_at(self, u: float) -> float:
        return self.start + u * self.sweep

    def point_at(self, u: float) -> Point:
        th = self.start + u * self.sweep
        c = self.center
        return Point(c[0] + self.radius * math.cos(th), c[1] + self.radius * math.sin(th))

    def tangent(self, u: float = 0.0) -> tuple[float, float]:
        th = self.start + u * self.sweep
        s = 1.0 if self.sweep > 0 else -1.0
        return (-s * math.sin(th), s * math.cos(th))

    def reversed(self) -> "Arc":
        return Arc(self.center, self.radius, self.start + self.sweep, -self.sweep)

    def sub(self, u0: float, u1: float) -> "Arc":
        return Arc(self.center, self.radius, self.start + u0 * self.sweep, (u1 - u0) * self.sweep)

    def bbox(self) -> tuple[float, float, float, float]:
        c, r = self.center, self.radius
        if self.is_full:
            return (c[0] - r, c[1] - r, c[0] + r, c[1] + r)
        p0, p1 = self.point_at(0.0), self.point_at(1.0)
        xs = [p0[0], p1[0]]
        ys = [p0[1], p1[1]]
        for k in range(4):
            u = self.angle_param(k * math.pi / 2)
            if u is not None:
                q = self.point_at(u)
                xs.append(q[0])
                ys.append(q[1])
        return (min(xs), min(ys), max(xs), max(ys))

    def angle_param(self, phi: float, tol_angle: float = 0.0) -> float | None:
        """Parameter of polar angle ``phi`` on this arc, or None if outside."""
        s = 1.0 if self.sweep > 0 else -1.0
        w = abs(self.sweep)
        d = ((phi - self.start) * s) % TWO_PI
        if self.is_full:
            return d / w
        if d <= w + tol_angle:
            return min(d / w, 1.0)
        if d >= TWO_PI - tol_angle:
            return 0.0
        return None

    def param_of(self, p, tol: float = EPS) -> float | None:
        c = self.center
        if abs(math.hypot(p[0] - c[0], p[1] - c[1]) - self.radius) > tol:
            return None
        phi = math.atan2(p[1] - c[1], p[0] - c[0])
        return self.angle_param(phi, tol / self.radius)

    def closest_param(self, p) -> float:
        c = self.center
        dx, dy = p[0] - c[0], p[1] - c[1]
        if dx == 0.0 and dy == 0.0:
            return 0.0
        u = self.angle_param(math.atan2(dy, dx))
        if u is not None:
            return u
        return 0.0 if dist(p, self.point_at(0.0)) <= dist(p, self.point_at(1.0)) else 1.0

    def distance_to(self, p) -> float:
        return dist(p, self.point_at(self.closest_param(p)))

    def area_term(self) -> float:
        c, r = self.center, self.radius
        t0, t1 = self.start, self.start + self.sweep
        return 0.5 * (r * r * self.sweep
                      + r * (c[0] * (math.sin(t1) - math.sin(t0))
                             - c[1] * (math.cos(t1) - math.cos(t0))))

    def top_params(self) -> list[float]:
        u = self.angle_param(math.pi / 2)
        return [] if u is None else [u]


ArcSeg = Union[Segment, Arc]


def circle(center, radius: float) -> Arc:
    """Full ccw circle parametrised from its bottom point (so u=0.5 is the top)."""
    return Arc(Point(float(center[0]), float(center[1])), float(radius), -math.pi / 2, TWO_PI)


def chain_length(path) -> float:
    return sum(e.length for e in path)


def chain_area(elements) -> float:
    return sum(e.area_term() for e in elements)


def sample_chain(path, step: float):
    """Dense points along a chain (for oracles and plotting)."""
    pts = []
    for e in path:
        k = max(2, int(math.ceil(e.length / step)) + 1)
        for i in range(k):
            pts.append(e.point_at(i / (k - 1)))
    return pts
