"""Planar arrangement of segments and circular arcs as a half-edge structure.

The construction splits every curve at all intersection points (snapped at
``EPS``), orders the half-edges around each vertex by tangent angle with a
curvature tie-break, and traces faces. Vertical bridge segments connect every
nested curve component to something above it, so each bounded face is bounded
by a single cycle. Optional input points are attached with an upward
"antenna" segment so they become vertices.

Half-edge ``h`` belongs to edge ``h >> 1``; even ids run along the source
curve, odd ids against it. ``twin(h) == h ^ 1``.
"""
from __future__ import annotations

import logging
import math
from functools import cmp_to_key

import numpy as np

from .intersect import intersect, ray_up_hits
from .primitives import EPS, TWO_PI, Point, Segment, dist
from .winding import winding_number

log = logging.getLogger(__name__)

ANG_TOL = 1e-8


class _Snap:
    """Vertex registry identifying points closer than ``tol``."""

    def __init__(self, tol: float = EPS):
        self.tol = tol
        self.cell = tol * 16
        self.grid: dict[tuple[int, int], list[int]] = {}
        self.pts: list[Point] = []

    def get(self, p) -> int:
        cx, cy = int(math.floor(p[0] / self.cell)), int(math.floor(p[1] / self.cell))
        best, bd = -1, self.tol
        for i in (cx - 1, cx, cx + 1):
            for j in (cy - 1, cy, cy + 1):
                for v in self.grid.get((i, j), ()):
                    d = dist(self.pts[v], p)
                    if d <= bd:
                        best, bd = v, d
        if best >= 0:
            return best
        v = len(self.pts)
        self.pts.append(Point(float(p[0]), float(p[1])))
        self.grid.setdefault((cx, cy), []).append(v)
        return v


class _UF:
    def __init__(self, n: int):
        self.p = list(range(n))

    def add(self) -> int:
        self.p.append(len(self.p))
        return len(self.p) - 1

    def find(self, a: int) -> int:
        p = self.p
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.p[rb] = ra
            else:
                self.p[ra] = rb


def _bbox_pairs(boxes: np.ndarray, tol: float):
    """Index pairs (i < j) of overlapping bounding boxes."""
    n = len(boxes)
    if n < 2:
        return []
    x0, y0, x1, y1 = boxes[:, 0] - tol, boxes[:, 1] - tol, boxes[:, 2] + tol, boxes[:, 3] + tol
    ov = ((x0[:, None] <= x1[None, :]) & (x0[None, :] <= x1[:, None])
          & (y0[:, None] <= y1[None, :]) & (y0[None, :] <= y1[:, None]))
    ii, jj = np.nonzero(np.triu(ov, 1))
    return list(zip(ii.tolist(), jj.tolist()))


def _ray_up(curves, idxs, p, tol=EPS):
    """Nearest curve hit above ``p``: (y, curve, u) or None."""
    best = None
    x, y0 = p
    for i in idxs:
        for y, u in ray_up_hits(curves[i], x, y0, tol):
            if best is None or y < best[0]:
                best = (y, i, u)
    return best


class Arrangement:
    """Half-edge arrangement of ``curves``.

    Parameters
    ----------
    curves : list of Segment/Arc
        Input curves. Full circles are allowed.
    tags : list, optional
        One tag per curve, kept for callers (bridges and antennas get
        ``("bridge",)`` and ``("antenna", k)``).
    points : list of Point, optional
        Points to embed as vertices (each gets an upward antenna).
    """

    def __init__(self, curves, tags=None, points=(), tol: float = EPS):
        self.tol = tol
        self.curves = list(curves)
        self.tags = list(tags) if tags is not None else [None] * len(self.curves)
        n0 = len(self.curves)
        snap = _Snap(tol)
        splits: list[list[tuple[float, int]]] = [[] for _ in range(n0)]
        uf = _UF(n0)

        for i, c in enumerate(self.curves):
            if c.kind == "segment" or not c.is_full:
                splits[i].append((0.0, snap.get(c.point_at(0.0))))
                splits[i].append((1.0, snap.get(c.point_at(1.0))))
            else:
                splits[i].append((0.0, snap.get(c.point_at(0.0))))
                splits[i].append((0.5, snap.get(c.point_at(0.5))))

        boxes = np.array([c.bbox() for c in self.curves], dtype=float).reshape(-1, 4)
        for i, j in _bbox_pairs(boxes, 10 * tol):
            ci, cj = self.curves[i], self.curves[j]
            hits = intersect(ci, cj, tol)
            for u1, u2, p in hits:
                v = snap.get(p)
                splits[i].append((u1, v))
                splits[j].append((u2, v))
            # endpoints resting on the other curve
            for a, b in ((i, j), (j, i)):
                ca, cb = self.curves[a], self.curves[b]
                if ca.kind == "arc" and ca.is_full:
                    continue
                for ua in (0.0, 1.0):
                    q = ca.point_at(ua)
                    ub = cb.param_of(q, tol)
                    if ub is not None:
                        v = snap.get(q)
                        splits[b].append((ub, v))
                        hits = True
            if hits:
                uf.union(i, j)

        # antennas from embedded points
        self.point_vertex: list[int] = []
        extra: list[tuple[Segment, tuple, int, float, int, int]] = []
        all_idx = list(range(n0))
        for k, p in enumerate(points):
            vp = snap.get(p)
            self.point_vertex.append(vp)
            for i in np.nonzero((boxes[:, 0] <= p[0] + tol) & (boxes[:, 2] >= p[0] - tol)
                                & (boxes[:, 1] <= p[1] + tol) & (boxes[:, 3] >= p[1] - tol))[0].tolist():
                u = self.curves[i].param_of(p, tol)
                if u is not None:
                    splits[i].append((u, vp))
            hit = _ray_up(self.curves, all_idx, p, tol)
            if hit is None:
                log.warning("point %s has nothing above it", p)
                continue
            y, ci, u = hit
            q = self.curves[ci].point_at(u)
            vq = snap.get(q)
            splits[ci].append((u, vq))
            if vq == vp:
                continue
            extra.append((Segment(Point(*p), Point(q[0], q[1])), ("antenna", k), vp, vq, ci))

        # bridges between nested curve components
        groups: dict[int, list[int]] = {}
        for i in range(n0):
            groups.setdefault(uf.find(i), []).append(i)
        for root in sorted(groups):
            members = groups[root]
            top = None
            for i in members:
                c = self.curves[i]
                cand = [0.0, 1.0] if (c.kind == "segment" or not c.is_full) else [0.5]
                cand += c.top_params()
                for u in cand:
                    q = c.point_at(u)
                    if top is None or q[1] > top[0][1] + 1e-15:
                        top = (q, i, u)
            q, i, u = top
            mset = set(members)
            others = [j for j in all_idx if j not in mset]
            hit = _ray_up(self.curves, others, q, tol)
            if hit is None:
                continue
            vq = snap.get(q)
            splits[i].append((u, vq))
            y, cj, uj = hit
            r = self.curves[cj].point_at(uj)
            vr = snap.get(r)
            splits[cj].append((uj, vr))
            if vr != vq:
                extra.append((Segment(Point(q[0], q[1]), Point(r[0], r[1])), ("bridge",), vq, vr, cj))

        for seg, tag, va, vb, _ in extra:
            self.curves.append(seg)
            self.tags.append(tag)
            splits.append([(0.0, va), (1.0, vb)])
        # added segments should meet nothing else; check cheaply for safety
        if extra:
            boxes = np.array([c.bbox() for c in self.curves], dtype=float)
            for k in range(n0, len(self.curves)):
                ck = self.curves[k]
                bx = boxes[k]
                cand = np.nonzero((boxes[:, 0] <= bx[2] + tol) & (boxes[:, 2] >= bx[0] - tol)
                                  & (boxes[:, 1] <= bx[3] + tol) & (boxes[:, 3] >= bx[1] - tol))[0]
                for j in cand.tolist():
                    if j == k:
                        continue
                    for uk, uj, p in intersect(ck, self.curves[j], tol):
                        v = snap.get(p)
                        splits[k].append((uk, v))
                        splits[j].append((uj, v))

        self.V: list[Point] = snap.pts
        self._build_edges(splits)
        self._build_rotation()
        self._trace_faces()

    # ------------------------------------------------------------------ edges
    def _build_edges(self, splits):
        e_curve, e_u0, e_u1, e_v0, e_v1 = [], [], [], [], []
        seen: dict[tuple[int, int], list[int]] = {}
        self.curve_edges: list[list[tuple[float, float, int, bool]]] = [[] for _ in self.curves]
        for ci, sp in enumerate(splits):
            c = self.curves[ci]
            full = c.kind == "arc" and c.is_full
            sp = sorted(sp)
            pts: list[tuple[float, int]] = []
            for u, v in sp:
                if pts and pts[-1][1] == v:
                    continue
                pts.append((u, v))
            if full:
                while len(pts) > 1 and pts[-1][1] == pts[0][1]:
                    pts.pop()
                pts.append((1.0, pts[0][1]))
            else:
                # drop any interior duplicate of the end vertices
                if len(pts) >= 2 and pts[-1][0] < 1.0:
                    pts.append((1.0, pts[-1][1]))
            for (u0, v0), (u1, v1) in zip(pts, pts[1:]):
                if u1 - u0 <= 0.0:
                    continue
                if v0 == v1:
                    if c.length * (u1 - u0) < 1e3 * self.tol:
                        continue
                    log.debug("loop edge on curve %d", ci)
                key = (min(v0, v1), max(v0, v1))
                mid = c.point_at(0.5 * (u0 + u1))
                dup = None
                for e in seen.get(key, ()):
                    ce = self.curves[e_curve[e]]
                    m2 = ce.point_at(0.5 * (e_u0[e] + e_u1[e]))
                    if dist(mid, m2) < 1e-7:
                        dup = e
                        break
                if dup is not None:
                    same = e_v0[dup] == v0
                    self.curve_edges[ci].append((u0, u1, dup, same))
                    continue
                e = len(e_curve)
                e_curve.append(ci)
                e_u0.append(u0)
                e_u1.append(u1)
                e_v0.append(v0)
                e_v1.append(v1)
                seen.setdefault(key, []).append(e)
                self.curve_edges[ci].append((u0, u1, e, True))
        self.e_curve = e_curve
        self.e_u0 = e_u0
        self.e_u1 = e_u1
        self.e_v0 = e_v0
        self.e_v1 = e_v1
        self.n_edges = len(e_curve)
        self.e_len = [self.curves[c].length * (u1 - u0) for c, u0, u1 in zip(e_curve, e_u0, e_u1)]
        self.e_geom = [self.curves[c].sub(u0, u1) for c, u0, u1 in zip(e_curve, e_u0, e_u1)]

    def origin(self, h: int) -> int:
        e = h >> 1
        return self.e_v0[e] if h & 1 == 0 else self.e_v1[e]

    def dest(self, h: int) -> int:
        e = h >> 1
        return self.e_v1[e] if h & 1 == 0 else self.e_v0[e]

    def hgeom(self, h: int):
        g = self.e_geom[h >> 1]
        return g if h & 1 == 0 else g.reversed()

    def hpart(self, h: int, t0: float, t1: float):
        """Piece of half-edge ``h`` between its own parameters ``t0 <= t1``."""
        e = h >> 1
        c = self.curves[self.e_curve[e]]
        u0, u1 = self.e_u0[e], self.e_u1[e]
        if h & 1 == 0:
            return c.sub(u0 + t0 * (u1 - u0), u0 + t1 * (u1 - u0))
        return c.sub(u1 - t0 * (u1 - u0), u1 - t1 * (u1 - u0))

    def hpoint(self, h: int, t: float) -> Point:
        e = h >> 1
        c = self.curves[self.e_curve[e]]
        u0, u1 = self.e_u0[e], self.e_u1[e]
        u = u0 + t * (u1 - u0) if h & 1 == 0 else u1 - t * (u1 - u0)
        return c.point_at(u)

    def hlen(self, h: int) -> float:
        return self.e_len[h >> 1]

    def htag(self, h: int):
        return self.tags[self.e_curve[h >> 1]]

    def locate(self, ci: int, u: float) -> tuple[int, float]:
        """Half-edge and its parameter for parameter ``u`` on input curve ``ci``."""
        best = None
        for u0, u1, e, same in self.curve_edges[ci]:
            if u0 - 1e-12 <= u <= u1 + 1e-12:
                t = (u - u0) / (u1 - u0)
                t = min(1.0, max(0.0, t))
                return (2 * e, t) if same else (2 * e + 1, t)
            d = min(abs(u - u0), abs(u - u1))
            if best is None or d < best[0]:
                t = 0.0 if abs(u - u0) <= abs(u - u1) else 1.0
                best = (d, (2 * e, t) if same else (2 * e + 1, t))
        if best is None:
            raise ValueError("curve has no edges")
        return best[1]

    # --------------------------------------------------------------- rotation
    def _build_rotation(self):
        nv = len(self.V)
        out: list[list[int]] = [[] for _ in range(nv)]
        ang = [0.0] * (2 * self.n_edges)
        curv = [0.0] * (2 * self.n_edges)
        for e in range(self.n_edges):
            c = self.curves[self.e_curve[e]]
            tx, ty = c.tangent(self.e_u0[e])
            ang[2 * e] = math.atan2(ty, tx) % TWO_PI
            curv[2 * e] = c.curvature
            tx, ty = c.tangent(self.e_u1[e])
            ang[2 * e + 1] = math.atan2(-ty, -tx) % TWO_PI
            curv[2 * e + 1] = -c.curvature
            out[self.e_v0[e]].append(2 * e)
            out[self.e_v1[e]].append(2 * e + 1)
        self.h_angle = ang
        self.h_curv = curv
        pos = [0] * (2 * self.n_edges)
        for v in range(nv):
            hs = out[v]
            if len(hs) > 1:
                hs = self._sort_around(hs, ang, curv)
                out[v] = hs
            for k, h in enumerate(hs):
                pos[h] = k
        self.v_out = out
        self.h_pos = pos

    @staticmethod
    def _sort_around(hs, ang, curv):
        hs = sorted(hs, key=lambda h: (ang[h], curv[h], h))
        n = len(hs)
        # rotate so that the list starts after a genuine angular gap
        start = 0
        for k in range(n):
            a_prev = ang[hs[k - 1]] - (TWO_PI if k == 0 else 0.0)
            if ang[hs[k]] - a_prev > ANG_TOL:
                start = k
                break
        hs = hs[start:] + hs[:start]
        base = ang[hs[0]]
        unwrapped = {h: (ang[h] - base) % TWO_PI for h in hs}
        for h in hs:
            if unwrapped[h] > TWO_PI - ANG_TOL:
                unwrapped[h] -= TWO_PI

        def cmp(h1, h2):
            d = unwrapped[h1] - unwrapped[h2]
            if abs(d) > ANG_TOL:
                return -1 if d < 0 else 1
            if curv[h1] != curv[h2]:
                return -1 if curv[h1] < curv[h2] else 1
            return -1 if d < 0 else (1 if d > 0 else (h1 > h2) - (h1 < h2))

        return sorted(hs, key=cmp_to_key(cmp))

    # ------------------------------------------------------------------ faces
    def _trace_faces(self):
        nh = 2 * self.n_edges
        nxt = [0] * nh
        for h in range(nh):
            t = h ^ 1
            v = self.dest(h)
            hs = self.v_out[v]
            nxt[h] = hs[self.h_pos[t] - 1]
        self.h_next = nxt
        face = [-1] * nh
        cycles: list[list[int]] = []
        for h in range(nh):
            if face[h] >= 0:
                continue
            f = len(cycles)
            cyc = []
            g = h
            while face[g] < 0:
                face[g] = f
                cyc.append(g)
                g = nxt[g]
            cycles.append(cyc)
        self.h_face = face
        self.cycles = cycles
        self.f_area = [sum(self.hgeom(h).area_term() for h in cyc) for cyc in cycles]
        self.f_bounded = [a > 0 for a in self.f_area]
        self.n_faces = len(cycles)

    def face_elements(self, f: int):
        return [self.hgeom(h) for h in self.cycles[f]]

    def face_sample(self, f: int) -> Point | None:
        """A point strictly inside bounded face ``f``."""
        cyc = self.cycles[f]
        order = sorted(cyc, key=lambda h: -self.hlen(h))
        elems = None
        for h in order[:6]:
            L = self.hlen(h)
            if L <= 0:
                continue
            g = self.hgeom(h)
            m = g.point_at(0.5)
            tx, ty = g.tangent(0.5)
            delta = min(1e-6, 0.05 * L)
            while delta > 1e-11:
                p = Point(m[0] - ty * delta, m[1] + tx * delta)
                if elems is None:
                    elems = self.face_elements(f)
                if winding_number(elems, p) == 1:
                    return p
                delta *= 0.1
        return None

    def vertex_faces(self, v: int) -> set[int]:
        return {self.h_face[h] for h in self.v_out[v]}
