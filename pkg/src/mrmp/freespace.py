"""Free space, auras, remote components, blocking areas and the residual tree.

Two stages:

* :func:`compute_free_space` erodes the workspace polygon by the unit robot
  radius and splits the result into connected components.
* :class:`ComponentAnalysis` overlays one component with the radius-2 aura
  circles of all positions and derives remote components, blocking areas, the
  residual components (F-bar), the start-aura-free part (F*), and the residual
  tree H. Everything downstream (motion graph, planner) reads from it.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .geom.arrangement import Arrangement
from .geom.intersect import seg_seg
from .geom.primitives import EPS, Point, Segment, circle, dist
from .geom.region import (
    GeneralizedRegion,
    Loop,
    RegionFace,
    aura_union,  # re-exported
    boundary_cycles,
    face_components,
    faces_to_region,
    point_in_region,
)

log = logging.getLogger(__name__)

AURA = 2.0
ROBOT = 1.0

__all__ = [
    "AURA", "ROBOT", "MalformedPolygon", "EmptyFreeSpace", "NotATree", "FreeSpace",
    "ComponentPositions", "RemoteComponent", "FreeChain", "ResidualGraph",
    "ComponentAnalysis", "compute_free_space", "validate_polygon", "aura_union",
    "remote_components", "polygon_distance",
]


class MalformedPolygon(ValueError):
    pass


class EmptyFreeSpace(ValueError):
    pass


class NotATree(AssertionError):
    pass


# ------------------------------------------------------------------ stage 1
def validate_polygon(vertices) -> list[Point]:
    """Check simplicity; return the vertices in ccw order."""
    pts = [Point(float(x), float(y)) for x, y in vertices]
    n = len(pts)
    if n < 3:
        raise MalformedPolygon(f"polygon needs at least 3 vertices, got {n}")
    for v in pts:
        if not (math.isfinite(v.x) and math.isfinite(v.y)):
            raise MalformedPolygon("non-finite coordinate")
    segs = [Segment(pts[i], pts[(i + 1) % n]) for i in range(n)]
    for i, s in enumerate(segs):
        if s.length <= EPS:
            raise MalformedPolygon(f"edge {i} has zero length")
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            hits = seg_seg(segs[i], segs[j])
            if adjacent:
                shared = pts[j] if j == i + 1 else pts[0]
                if any(dist(p, shared) > EPS for _, _, p in hits):
                    raise MalformedPolygon(f"edges {i} and {j} overlap")
            elif hits:
                raise MalformedPolygon(f"edges {i} and {j} intersect")
    area = 0.5 * sum(pts[i].x * pts[(i + 1) % n].y - pts[(i + 1) % n].x * pts[i].y for i in range(n))
    if abs(area) <= EPS:
        raise MalformedPolygon("polygon has zero area")
    if area < 0:
        pts.reverse()
    return pts


def polygon_distance(vertices, px, py) -> np.ndarray:
    """Distance from points to the polygon boundary (vectorized)."""
    v = np.asarray(vertices, dtype=float)
    a = v
    b = np.roll(v, -1, axis=0)
    px = np.asarray(px, dtype=float)[..., None]
    py = np.asarray(py, dtype=float)[..., None]
    dx, dy = b[:, 0] - a[:, 0], b[:, 1] - a[:, 1]
    L2 = dx * dx + dy * dy
    t = np.clip(((px - a[:, 0]) * dx + (py - a[:, 1]) * dy) / L2, 0.0, 1.0)
    qx = a[:, 0] + t * dx - px
    qy = a[:, 1] + t * dy - py
    return np.sqrt(qx * qx + qy * qy).min(axis=-1)


@dataclass(frozen=True)
class ComponentPositions:
    index: int
    starts: tuple  # input indices
    targets: tuple

    @property
    def charge(self) -> int:
        return len(self.starts) - len(self.targets)


@dataclass(frozen=True)
class FreeSpace:
    workspace: tuple
    region: GeneralizedRegion
    components: tuple

    def component_of(self, p) -> int:
        """Index of the component containing ``p`` (boundary counts), else -1."""
        for i, c in enumerate(self.components):
            if point_in_region(p, c) != "outside":
                return i
        return -1

    def partition(self, starts, targets) -> tuple[list[ComponentPositions], list[int], list[int]]:
        """Per-component position lists plus the component index of each position."""
        cs = [self.component_of(p) for p in starts]
        ct = [self.component_of(p) for p in targets]
        per = [ComponentPositions(i, tuple(k for k, c in enumerate(cs) if c == i),
                                  tuple(k for k, c in enumerate(ct) if c == i))
               for i in range(len(self.components))]
        return per, cs, ct


def compute_free_space(workspace) -> FreeSpace:
    """Erode a simple polygon by the unit disc.

    The boundary of the result consists of the polygon edges shifted inward by
    one and unit arcs around reflex vertices; the arrangement of these curves
    is labelled by sampling each face.
    """
    pts = validate_polygon(workspace)
    n = len(pts)
    curves = []
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        L = dist(a, b)
        nx, ny = -(b.y - a.y) / L, (b.x - a.x) / L
        curves.append(Segment(Point(a.x + nx, a.y + ny), Point(b.x + nx, b.y + ny)))
    for i in range(n):
        p, q, r = pts[i - 1], pts[i], pts[(i + 1) % n]
        cr = (q.x - p.x) * (r.y - q.y) - (q.y - p.y) * (r.x - q.x)
        if cr < 0:
            curves.append(circle(q, ROBOT))
    arr = Arrangement(curves)
    faces = [f for f in range(arr.n_faces) if arr.f_bounded[f] and arr.f_area[f] > 1e-12]
    samples = [arr.face_sample(f) for f in faces]
    ok = [k for k, s in enumerate(samples) if s is not None]
    free = set()
    if ok:
        sx = np.array([samples[k][0] for k in ok])
        sy = np.array([samples[k][1] for k in ok])
        wreg = GeneralizedRegion((RegionFace(Loop(tuple(
            Segment(pts[i], pts[(i + 1) % n]) for i in range(n)))),))
        inside = wreg.contains(sx, sy)
        d = polygon_distance(pts, sx, sy)
        for k, ins, dd in zip(ok, inside, d):
            if ins and dd >= ROBOT:
                free.add(faces[k])
    if not free:
        raise EmptyFreeSpace("no point of the workspace has clearance 1")
    comps = []
    for group in face_components(arr, free):
        reg = faces_to_region(arr, group)
        for f in reg.faces:
            if f.holes:
                raise AssertionError("free-space component with a hole")
            comps.append(GeneralizedRegion((f,)))
    # deterministic order: by lowest-leftmost boundary point
    def key(r):
        x0, y0, x1, y1 = r.bbox()
        return (round(y0, 9), round(x0, 9))
    comps.sort(key=key)
    region = GeneralizedRegion(tuple(c.faces[0] for c in comps))
    return FreeSpace(tuple(pts), region, tuple(comps))


# ------------------------------------------------------------------ stage 2
@dataclass
class FreeChain:
    """Maximal run of a blocking area's boundary lying on the free-space boundary."""

    halfedges: list
    x: Point
    y: Point
    prev_h: int  # boundary half-edge of the area just before x
    next_h: int  # boundary half-edge just after y


@dataclass
class RemoteComponent:
    owner: int  # position id of the owning target
    faces: frozenset
    is_blocking: bool = False
    free_boundary: list = field(default_factory=list)
    _region: GeneralizedRegion | None = None


@dataclass
class ResidualGraph:
    """Tree H over residual components."""

    nodes: list  # face sets
    edges: list  # (blocker-side node, other node, remote index, blocker id)
    positions: list  # per node: position ids
    charge: list  # per node: starts - targets (active)

    def adjacency(self) -> dict[int, list[tuple[int, int]]]:
        adj = {i: [] for i in range(len(self.nodes))}
        for k, (u, v, _, _) in enumerate(self.edges):
            adj[u].append((v, k))
            adj[v].append((u, k))
        return adj

    def is_tree(self) -> bool:
        n = len(self.nodes)
        if len(self.edges) != n - 1:
            return False
        if n == 0:
            return True
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v, _ in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == n


class ComponentAnalysis:
    """Cell complex of one free-space component overlaid with aura circles.

    Position ids: starts first, then targets, then parked positions of other
    components (which only restrict paths, never the structure).

    Parameters
    ----------
    region : GeneralizedRegion
        A single simply connected free-space component.
    starts, targets : list of Point
    parked : list of Point
        Cross-component positions whose auras must be avoided by paths.
    ignore_targets : iterable of int
        Indices into ``targets`` that take no part in the structure (targets
        merged with a nearby start).
    """

    def __init__(self, region: GeneralizedRegion, starts, targets, parked=(), ignore_targets=()):
        self.region = region
        self.loop = region.faces[0].outer
        starts = [Point(float(p[0]), float(p[1])) for p in starts]
        targets = [Point(float(p[0]), float(p[1])) for p in targets]
        parked = [Point(float(p[0]), float(p[1])) for p in parked]
        ns, nt = len(starts), len(targets)
        self.ns, self.nt = ns, nt
        self.pts = starts + targets + parked
        self.kind = ["start"] * ns + ["target"] * nt + ["parked"] * len(parked)
        self.start_ids = list(range(ns))
        self.target_ids = list(range(ns, ns + nt))
        self.parked_ids = list(range(ns + nt, len(self.pts)))
        self.ignored = frozenset(ns + j for j in ignore_targets)
        self.active_targets = [t for t in self.target_ids if t not in self.ignored]
        self.structural = frozenset(self.start_ids) | frozenset(self.active_targets)
        self.S = frozenset(self.start_ids)

        curves = list(self.loop.elements)
        tags = [("F", k) for k in range(len(curves))]
        for pid, p in enumerate(self.pts):
            curves.append(circle(p, AURA))
            tags.append(("aura", pid))
        self.arr = arr = Arrangement(curves, tags, points=starts + targets)
        self.pos_vertex = list(arr.point_vertex)
        self._label_faces()
        self._analyze()

    # -------------------------------------------------------------- labels
    def _label_faces(self):
        arr = self.arr
        nf = arr.n_faces
        self.f_inF = [False] * nf
        self.f_aura = [frozenset()] * nf
        idx, xs, ys = [], [], []
        for f in range(nf):
            if not arr.f_bounded[f]:
                continue
            s = arr.face_sample(f)
            if s is None:
                continue
            idx.append(f)
            xs.append(s[0])
            ys.append(s[1])
        if not idx:
            return
        xs, ys = np.array(xs), np.array(ys)
        inside = self.region.contains(xs, ys)
        P = np.array(self.pts, dtype=float).reshape(-1, 2)
        d = np.hypot(xs[:, None] - P[None, :, 0], ys[:, None] - P[None, :, 1])
        near = d < AURA
        for k, f in enumerate(idx):
            self.f_inF[f] = bool(inside[k])
            self.f_aura[f] = frozenset(np.nonzero(near[k])[0].tolist())
        hf = arr.h_face
        self.e_inF = [self.f_inF[hf[2 * e]] or self.f_inF[hf[2 * e + 1]] for e in range(arr.n_edges)]
        self.e_label = [self.f_aura[hf[2 * e]] & self.f_aura[hf[2 * e + 1]] for e in range(arr.n_edges)]

    def struct_label(self, f: int) -> frozenset:
        return self.f_aura[f] & self.structural

    def pos_faces(self, pid: int) -> list[int]:
        """F-faces incident to a position's vertex."""
        v = self.pos_vertex[pid]
        fs = sorted(self.arr.vertex_faces(v))
        return [f for f in fs if self.f_inF[f]]

    # ------------------------------------------------------------ structure
    def _analyze(self):
        arr = self.arr
        self.F_faces = {f for f in range(arr.n_faces) if self.f_inF[f]}
        S = self.S
        remotes: list[RemoteComponent] = []
        self.main_faces: dict[int, frozenset] = {}
        for t in self.active_targets:
            dm = {f for f in self.F_faces if t in self.f_aura[f] and not (self.f_aura[f] & S)}
            home = set(self.pos_faces(t))
            for comp in face_components(arr, dm):
                if comp & home:
                    self.main_faces[t] = frozenset(comp) | self.main_faces.get(t, frozenset())
                else:
                    remotes.append(RemoteComponent(t, frozenset(comp)))
        self.remotes = remotes
        for r in remotes:
            rest = self.F_faces - r.faces
            r.is_blocking = len(face_components(arr, rest)) >= 2
            if r.is_blocking:
                r.free_boundary = self._free_chains(r.faces)
        removed = set()
        for r in remotes:
            removed |= r.faces
        self.Fbar_faces = self.F_faces - removed
        self.residual = face_components(arr, self.Fbar_faces)
        self.face_residual = {}
        for i, comp in enumerate(self.residual):
            for f in comp:
                self.face_residual[f] = i
        self.Fstar_faces = {f for f in self.Fbar_faces if not (self.f_aura[f] & S)}
        self.fstar = face_components(arr, self.Fstar_faces)
        self.face_fstar = {}
        for j, comp in enumerate(self.fstar):
            for f in comp:
                self.face_fstar[f] = j
        self.pos_residual = {}
        for pid in self.start_ids + self.target_ids:
            rs = [self.face_residual[f] for f in self.pos_faces(pid) if f in self.face_residual]
            if rs:
                self.pos_residual[pid] = min(rs)
        self.H = self._build_H()

    def _free_chains(self, faces) -> list[FreeChain]:
        arr = self.arr
        hf = arr.h_face
        chains = []
        for cyc in boundary_cycles(arr, set(faces)):
            free = [not self.f_inF[hf[h ^ 1]] for h in cyc]
            if all(free) or not any(free):
                continue
            n = len(cyc)
            k = next(i for i in range(n) if not free[i])
            order = [cyc[(k + 1 + i) % n] for i in range(n)]
            fl = [free[(k + 1 + i) % n] for i in range(n)]
            i = 0
            while i < n:
                if not fl[i]:
                    i += 1
                    continue
                j = i
                while j < n and fl[j]:
                    j += 1
                hs = order[i:j]
                prev_h = order[i - 1] if i > 0 else order[-1]
                next_h = order[j % n]
                chains.append(FreeChain(hs, arr.V[arr.origin(hs[0])], arr.V[arr.dest(hs[-1])],
                                        prev_h, next_h))
                i = j
        return chains

    def _build_H(self) -> ResidualGraph:
        arr = self.arr
        hf = arr.h_face
        edges = []
        for ri, r in enumerate(self.remotes):
            if not r.is_blocking:
                continue
            adj = set()
            for e in range(arr.n_edges):
                f, g = hf[2 * e], hf[2 * e + 1]
                if f in r.faces and g in self.face_residual:
                    adj.add(self.face_residual[g])
                elif g in r.faces and f in self.face_residual:
                    adj.add(self.face_residual[f])
            z = self.pos_residual.get(r.owner)
            if z is None or z not in adj:
                log.warning("blocker %d not adjacent to its blocking area", r.owner)
            for w in sorted(adj):
                if w != z and z is not None:
                    edges.append((z, w, ri, r.owner))
        n = len(self.residual)
        positions = [[] for _ in range(n)]
        charge = [0] * n
        for pid, node in sorted(self.pos_residual.items()):
            if pid in self.ignored:
                continue
            positions[node].append(pid)
            charge[node] += 1 if self.kind[pid] == "start" else -1
        return ResidualGraph(list(self.residual), edges, positions, charge)

    # ------------------------------------------------------------- regions
    def faces_region(self, faces) -> GeneralizedRegion:
        return faces_to_region(self.arr, set(faces))

    def remote_region(self, r: RemoteComponent) -> GeneralizedRegion:
        if r._region is None:
            r._region = self.faces_region(r.faces)
        return r._region

    def residual_regions(self) -> list[GeneralizedRegion]:
        return [self.faces_region(c) for c in self.residual]

    def fstar_regions(self) -> list[GeneralizedRegion]:
        return [self.faces_region(c) for c in self.fstar]


def remote_components(t, starts, component: GeneralizedRegion) -> list[GeneralizedRegion]:
    """Remote components of target ``t`` given start positions ``starts``."""
    ca = ComponentAnalysis(component, starts, [t])
    return [ca.remote_region(r) for r in ca.remotes]
