"""Generalized regions bounded by segments and arcs, and operations on them."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .arrangement import Arrangement
from .intersect import intersect
from .primitives import EPS, Arc, Point, chain_area, circle, dist
from .winding import crossing_parity, monotone_pieces, winding_number


@dataclass(frozen=True)
class Loop:
    elements: tuple

    @cached_property
    def area(self) -> float:
        return chain_area(self.elements)

    @property
    def orientation(self) -> str:
        return "outer" if self.area > 0 else "hole"

    def bbox(self):
        bs = np.array([e.bbox() for e in self.elements])
        return (bs[:, 0].min(), bs[:, 1].min(), bs[:, 2].max(), bs[:, 3].max())

    def winding(self, p) -> int:
        return winding_number(self.elements, p)

    def reversed(self) -> "Loop":
        return Loop(tuple(e.reversed() for e in reversed(self.elements)))


@dataclass(frozen=True)
class RegionFace:
    outer: Loop
    holes: tuple = ()

    @property
    def area(self) -> float:
        return self.outer.area + sum(h.area for h in self.holes)

    @property
    def loops(self):
        return (self.outer,) + tuple(self.holes)


@dataclass(frozen=True)
class GeneralizedRegion:
    faces: tuple = ()

    @property
    def area(self) -> float:
        return sum(f.area for f in self.faces)

    @property
    def loops(self):
        return [lp for f in self.faces for lp in f.loops]

    @property
    def elements(self):
        return [e for lp in self.loops for e in lp.elements]

    @property
    def is_empty(self) -> bool:
        return not self.faces

    @cached_property
    def _pieces(self):
        return monotone_pieces(self.elements)

    def contains(self, px, py) -> np.ndarray:
        """Vectorized membership (boundary points may fall either way)."""
        px = np.asarray(px, dtype=float)
        py = np.asarray(py, dtype=float)
        segs, arcs = self._pieces
        return crossing_parity(segs, arcs, px, py)

    def bbox(self):
        bs = np.array([lp.bbox() for lp in self.loops])
        return (bs[:, 0].min(), bs[:, 1].min(), bs[:, 2].max(), bs[:, 3].max())


def disc(center, radius: float) -> GeneralizedRegion:
    return GeneralizedRegion((RegionFace(Loop((circle(center, radius),))),))


def polygon_region(vertices) -> GeneralizedRegion:
    from .primitives import Segment
    pts = [Point(float(x), float(y)) for x, y in vertices]
    lp = Loop(tuple(Segment(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))))
    if lp.area < 0:
        lp = lp.reversed()
    return GeneralizedRegion((RegionFace(lp),))


def boundary_distance(r: GeneralizedRegion, p) -> float:
    return min((e.distance_to(p) for e in r.elements), default=math.inf)


def point_in_region(p, r: GeneralizedRegion, tol: float = EPS) -> str:
    """Classify ``p`` as "inside", "boundary" or "outside" of ``r``."""
    if boundary_distance(r, p) <= tol:
        return "boundary"
    for f in r.faces:
        if f.outer.winding(p) != 0 and all(h.winding(p) == 0 for h in f.holes):
            return "inside"
    return "outside"


def region_distance(r: GeneralizedRegion, p) -> float:
    """Distance from ``p`` to the closed region (0 inside)."""
    if point_in_region(p, r) != "outside":
        return 0.0
    return boundary_distance(r, p)


# ---------------------------------------------------------------- extraction
def boundary_cycles(arr: Arrangement, faces: set) -> list[list[int]]:
    """Half-edge cycles bounding the union of arrangement faces ``faces``."""
    hf = arr.h_face
    nxt = arr.h_next
    bd = [h for h in range(2 * arr.n_edges) if hf[h] in faces and hf[h ^ 1] not in faces]
    used = set()
    cycles = []
    for h0 in bd:
        if h0 in used:
            continue
        cyc = []
        h = h0
        while h not in used:
            used.add(h)
            cyc.append(h)
            n = nxt[h]
            guard = 0
            while hf[n ^ 1] in faces:
                n = nxt[n ^ 1]
                guard += 1
                if guard > 10000:
                    raise RuntimeError("boundary tracing did not close")
            h = n
        cycles.append(cyc)
    return cycles


def cycle_elements(arr: Arrangement, cyc: list[int]) -> tuple:
    """Elements of a half-edge cycle, merging consecutive pieces of one curve."""
    runs: list[list] = []  # [curve, u_start, u_end]
    for h in cyc:
        e = h >> 1
        ci = arr.e_curve[e]
        u0, u1 = arr.e_u0[e], arr.e_u1[e]
        a, b = (u0, u1) if h & 1 == 0 else (u1, u0)
        if runs and runs[-1][0] == ci:
            r = runs[-1]
            c = arr.curves[ci]
            full = c.kind == "arc" and c.is_full
            if abs(r[2] - a) < 1e-12:
                r[2] = b
                continue
            if full and abs(abs(r[2] - a) - 1.0) < 1e-12:
                r[2] = b + (r[2] - a)
                continue
        runs.append([ci, a, b])
    # merge wrap-around of first and last run
    if len(runs) > 1 and runs[0][0] == runs[-1][0]:
        c = arr.curves[runs[0][0]]
        full = c.kind == "arc" and c.is_full
        first, last = runs[0], runs[-1]
        if abs(last[2] - first[1]) < 1e-12:
            first[1] = last[1]
            runs.pop()
        elif full and abs(abs(last[2] - first[1]) - 1.0) < 1e-12:
            shift = last[2] - first[1]
            first[1] = last[1] - shift
            runs.pop()
    return tuple(arr.curves[ci].sub(a, b) for ci, a, b in runs)


def assemble_region(loops: list[Loop]) -> GeneralizedRegion:
    """Group outer loops and holes into faces (holes go to the tightest outer)."""
    outers = [lp for lp in loops if lp.area > 0]
    holes = [lp for lp in loops if lp.area <= 0]
    outers.sort(key=lambda lp: lp.area)
    assigned: list[list[Loop]] = [[] for _ in outers]
    for h in holes:
        p = h.elements[0].point_at(0.5)
        # step slightly into the region side of the hole (left of a cw loop)
        g = h.elements[0]
        tx, ty = g.tangent(0.5)
        q = Point(p[0] - ty * 1e-7, p[1] + tx * 1e-7)
        for k, o in enumerate(outers):
            if o.winding(q) != 0:
                assigned[k].append(h)
                break
    return GeneralizedRegion(tuple(RegionFace(o, tuple(hs)) for o, hs in zip(outers, assigned)))


def faces_to_region(arr: Arrangement, faces: set) -> GeneralizedRegion:
    loops = [Loop(cycle_elements(arr, c)) for c in boundary_cycles(arr, faces)]
    loops = [lp for lp in loops if abs(lp.area) > 1e-14 or len(lp.elements) > 0]
    return assemble_region(loops)


def face_components(arr: Arrangement, faces: set) -> list[set]:
    """Groups of faces connected across shared edges (not just vertices)."""
    parent = {f: f for f in faces}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    hf = arr.h_face
    for e in range(arr.n_edges):
        f, g = hf[2 * e], hf[2 * e + 1]
        if f != g and f in parent and g in parent:
            ra, rb = find(f), find(g)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, set] = {}
    for f in faces:
        groups.setdefault(find(f), set()).add(f)
    return [groups[k] for k in sorted(groups)]


# ------------------------------------------------------------------ booleans
def region_boolean(a: GeneralizedRegion, b: GeneralizedRegion, op: str) -> GeneralizedRegion:
    """Union, difference or intersection of two regions."""
    if op not in ("union", "difference", "intersection"):
        raise ValueError(f"unknown op {op!r}")
    curves = a.elements + b.elements
    if not curves:
        return GeneralizedRegion()
    arr = Arrangement(curves)
    keep = set()
    for f in range(arr.n_faces):
        if not arr.f_bounded[f]:
            continue
        p = arr.face_sample(f)
        if p is None:
            continue
        ina = point_in_region(p, a, 0.0) == "inside"
        inb = point_in_region(p, b, 0.0) == "inside"
        if op == "union":
            sel = ina or inb
        elif op == "intersection":
            sel = ina and inb
        else:
            sel = ina and not inb
        if sel:
            keep.add(f)
    return faces_to_region(arr, keep)


def connected_faces(r: GeneralizedRegion) -> list[GeneralizedRegion]:
    return [GeneralizedRegion((f,)) for f in r.faces]


# ---------------------------------------------------------- disc boundaries
def boundary_components_in_disc(r: GeneralizedRegion, c, rad: float) -> list[list]:
    """Maximal pieces of the boundary of ``r`` strictly inside the disc D_rad(c)."""
    circ = circle(c, rad)
    chains: list[list] = []
    for lp in r.loops:
        pieces = []  # (element piece, inside?)
        for e in lp.elements:
            us = sorted({u for u, _, _ in intersect(e, circ)} | {0.0, 1.0})
            for u0, u1 in zip(us, us[1:]):
                if u1 - u0 < 1e-12:
                    continue
                piece = e.sub(u0, u1)
                m = piece.point_at(0.5)
                pieces.append((piece, dist(m, c) < rad - 1e-12))
        if not pieces:
            continue
        if all(ins for _, ins in pieces):
            chains.append([p for p, _ in pieces])
            continue
        # rotate so that we start right after an outside piece
        k = next(i for i, (_, ins) in enumerate(pieces) if not ins)
        pieces = pieces[k + 1:] + pieces[:k + 1]
        cur: list = []
        for piece, ins in pieces:
            if ins:
                cur.append(piece)
            elif cur:
                chains.append(cur)
                cur = []
        if cur:
            chains.append(cur)
    return chains


def path_clearance(path, p) -> float:
    """Minimum distance from ``p`` to a chain of segments and arcs."""
    return min((e.distance_to(p) for e in path), default=math.inf)


def aura_union(positions, radius: float = 2.0) -> GeneralizedRegion:
    """Union of open discs around ``positions`` (closure returned as a region)."""
    pts = [Point(float(x), float(y)) for x, y in positions]
    if not pts:
        return GeneralizedRegion()
    arr = Arrangement([circle(p, radius) for p in pts])
    keep = set()
    for f in range(arr.n_faces):
        if not arr.f_bounded[f]:
            continue
        s = arr.face_sample(f)
        if s is not None and any(dist(s, p) < radius for p in pts):
            keep.add(f)
    return faces_to_region(arr, keep)
