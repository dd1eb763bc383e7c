"""Motion graph on start and target positions of one free-space component.

Guaranteed edges come from consecutive representative points on the outer
boundary of each F*-component (the circular list Lambda), plus direct edges
emitted by vertical rays and by obstructed start connectors. Blockable edges
cross the free-boundary chains of blocking areas. Every edge carries a realised
path in the free space.
"""
from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field

from .freespace import AURA, ComponentAnalysis
from .geom.intersect import ray_up_hits
from .geom.primitives import Point, Segment, circle, dist
from .geom.region import boundary_cycles, path_clearance
from .paths import NoPath, PathFinder, join_paths, reverse_path

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MotionNode:
    id: int  # position id in the component analysis
    position: Point
    kind: str  # "start", "target" or "merged"
    partner: int | None = None  # target id merged into this start


@dataclass
class MotionEdge:
    u: int
    v: int
    kind: str  # "guaranteed" or "blockable"
    blockers: tuple = ()
    path: list = field(default_factory=list)
    detour: bool = False  # path crosses a parked aura and needs a detour

    @property
    def length(self) -> float:
        return sum(e.length for e in self.path)

    def other(self, a: int) -> int:
        return self.v if a == self.u else self.u

    def oriented_path(self, a: int) -> list:
        return self.path if a == self.u else reverse_path(self.path)


@dataclass
class LambdaEntry:
    pos: float  # arc length along the outer cycle
    h: int
    t: float
    node: int
    how: str  # "run", "ray" or "start"
    origin: Point | None = None  # ray origin for "ray" entries
    point: Point | None = None
    via: tuple = ()  # target auras the leg has to cross


@dataclass
class LambdaList:
    owner: int  # F* component index
    entries: list


@dataclass
class _Cycle:
    hs: list
    cum: list
    total: float
    index: dict

    def locate(self, s: float) -> tuple[int, float]:
        """Half-edge and parameter at arc length ``s`` along the cycle."""
        s = s % self.total if self.total > 0 else 0.0
        lo, hi = 0, len(self.hs) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.cum[mid] <= s:
                lo = mid
            else:
                hi = mid - 1
        L = self.cum[lo + 1] - self.cum[lo]
        t = 0.0 if L <= 0 else min(1.0, max(0.0, (s - self.cum[lo]) / L))
        return self.hs[lo], t


class MotionGraph:
    """Motion graph of one component (see module docstring).

    Parameters
    ----------
    ca : ComponentAnalysis
    merged : dict
        start id -> target id for start-target pairs closer than 2.
    """

    def __init__(self, ca: ComponentAnalysis, merged: dict | None = None):
        self.ca = ca
        self.arr = ca.arr
        self.merged = dict(merged or {})
        self.pf = PathFinder(ca)
        self.ignore = frozenset(ca.ignored)
        self.nodes: dict[int, MotionNode] = {}
        for s in ca.start_ids:
            if s in self.merged:
                self.nodes[s] = MotionNode(s, ca.pts[s], "merged", self.merged[s])
            else:
                self.nodes[s] = MotionNode(s, ca.pts[s], "start")
        for t in ca.active_targets:
            self.nodes[t] = MotionNode(t, ca.pts[t], "target")
        self.edges: list[MotionEdge] = []
        self.lambdas: list[LambdaList] = []
        self.repairs = 0
        self._cand: list[MotionEdge] = []
        self._cycles: dict[int, tuple[_Cycle, list]] = {}
        self._clean: dict[int, set] = {}
        self._build()

    # ------------------------------------------------------------- helpers
    def _slabel(self, h: int) -> frozenset:
        return self.ca.e_label[h >> 1] & self.ca.structural

    def _cycle(self, j: int):
        if j in self._cycles:
            return self._cycles[j]
        arr = self.arr
        cyc = boundary_cycles(arr, set(self.ca.fstar[j]))
        outer, holes = [], []
        for c in cyc:
            area = sum(arr.hgeom(h).area_term() for h in c)
            (outer if area > 0 else holes).append((area, c))
        if not outer:
            res = (None, [c for _, c in holes])
        else:
            outer.sort(key=lambda x: -x[0])
            if len(outer) > 1:
                log.debug("F* component %d has %d outer cycles", j, len(outer))
            hs = outer[0][1]
            cum = [0.0]
            for h in hs:
                cum.append(cum[-1] + arr.hlen(h))
            res = (_Cycle(hs, cum, cum[-1], {h: k for k, h in enumerate(hs)}),
                   [c for _, c in holes] + [c for _, c in outer[1:]])
        self._cycles[j] = res
        return res

    def _runs(self, mask: list[bool]) -> list[tuple[int, int]]:
        """Maximal circular runs of True as (start index, length)."""
        n = len(mask)
        if not any(mask):
            return []
        if all(mask):
            return [(0, n)]
        k = next(i for i in range(n) if not mask[i])
        runs = []
        i = 0
        while i < n:
            idx = (k + 1 + i) % n
            if not mask[idx]:
                i += 1
                continue
            j = i
            while j < n and mask[(k + 1 + j) % n]:
                j += 1
            runs.append(((k + 1 + i) % n, j - i))
            i = j
        return runs

    def _run_mid(self, cyc: _Cycle, start: int, length: int) -> float:
        n = len(cyc.hs)
        s0 = cyc.cum[start]
        L = sum(cyc.cum[(start + i) % n + 1] - cyc.cum[(start + i) % n] for i in range(length))
        return (s0 + 0.5 * L) % cyc.total

    def _clean_faces(self, s: int) -> set:
        """Faces reachable from s inside its aura without entering another aura."""
        if s in self._clean:
            return self._clean[s]
        ca = self.ca
        arr = self.arr
        good = {f for f in ca.F_faces if ca.struct_label(f) == frozenset([s])}
        home = set(ca.pos_faces(s)) & good
        out = set(home)
        stack = list(home)
        nbrs = self._face_adj()
        while stack:
            f = stack.pop()
            for g in nbrs.get(f, ()):
                if g in good and g not in out:
                    out.add(g)
                    stack.append(g)
        self._clean[s] = out
        return out

    def _face_adj(self):
        if not hasattr(self, "_fadj"):
            arr = self.arr
            hf = arr.h_face
            adj: dict[int, set] = {}
            for e in range(arr.n_edges):
                f, g = hf[2 * e], hf[2 * e + 1]
                if f != g:
                    adj.setdefault(f, set()).add(g)
                    adj.setdefault(g, set()).add(f)
            self._fadj = adj
        return self._fadj

    # ------------------------------------------------------------- connectors
    def _connect(self, node: int, h: int, t: float, allowed_extra=()) -> list | None:
        """Pieces from a node's vertex to point (h, t), preferring its own aura."""
        pf = self.pf
        v = self.ca.pos_vertex[node]
        for allowed in (frozenset([node]), frozenset([node, *allowed_extra])):
            try:
                return pf.vertex_to_point(v, h, t, allowed, self.ignore)
            except NoPath:
                continue
        return None

    def _direct(self, u: int, v: int, allowed=None, kind="guaranteed", blockers=()) -> MotionEdge | None:
        allowed = frozenset(allowed if allowed is not None else (u, v))
        pf = self.pf
        a, b = self.ca.pos_vertex[u], self.ca.pos_vertex[v]
        try:
            pieces = pf.vertex_to_vertex(a, b, allowed, self.ignore)
            return MotionEdge(u, v, kind, tuple(blockers), pf.geometry(pieces))
        except NoPath:
            pass
        # parked auras may be in the way: take the structural path and detour later
        try:
            pieces = pf.vertex_to_vertex(a, b, allowed, self.ignore | frozenset(self.ca.parked_ids))
        except NoPath:
            return None
        edge = MotionEdge(u, v, kind, tuple(blockers), pf.geometry(pieces))
        edge.detour = bool(pf.pieces_label(pieces) & frozenset(self.ca.parked_ids))
        return edge

    def _walk(self, cyc: _Cycle, a: LambdaEntry, b: LambdaEntry) -> list:
        """Pieces along the cycle from entry a forward to entry b."""
        ia, ib = cyc.index[a.h], cyc.index[b.h]
        n = len(cyc.hs)
        if ia == ib and b.t >= a.t and not (a is b):
            return [(a.h, a.t, b.t)]
        pieces = [(a.h, a.t, 1.0)]
        k = (ia + 1) % n
        guard = 0
        while k != ib:
            pieces.append((cyc.hs[k], 0.0, 1.0))
            k = (k + 1) % n
            guard += 1
            if guard > n + 1:
                break
        pieces.append((b.h, 0.0, b.t))
        return pieces

    def _entry_leg(self, en: LambdaEntry, other: int) -> list | None:
        """Geometry from the node of ``en`` to its representative point."""
        if en.how == "ray":
            return self._ray_leg(en.node, en.origin, self.arr.hpoint(en.h, en.t))
        pieces = self._connect(en.node, en.h, en.t, (other, *en.via))
        if pieces is None:
            return None
        return self.pf.geometry(pieces)

    def _ray_leg(self, x: int, origin: Point, hit) -> list:
        pts = [self.ca.pts[x], origin, Point(*hit)]
        return [Segment(a, b) for a, b in zip(pts, pts[1:]) if dist(a, b) > 1e-12]

    # --------------------------------------------------------------- build
    def _build(self):
        ca = self.ca
        for j in range(len(ca.fstar)):
            lam = self._build_lambda(j)
            self.lambdas.append(lam)
            self._lambda_edges(j, lam)
        self._blockable()
        self._finalize()

    def _ray(self, j: int, x: int, origin: Point, own_circle: int | None):
        """Shoot a ray upward; returns ("boundary", h, t) or ("aura", y) or None."""
        ca = self.ca
        arr = self.arr
        cyc, holes = self._cycle(j)
        best = None  # (y, kind, payload)
        for y in sorted(ca.structural):
            if y == x or y == own_circle:
                continue
            p = ca.pts[y]
            if abs(origin.x - p.x) >= AURA - 1e-12:
                continue
            if dist(origin, p) < AURA - 1e-12:
                return ("aura", y, None)
            hits = [yy for yy, _ in ray_up_hits(circle(p, AURA), origin.x, origin.y)]
            if hits:
                yy = min(hits)
                if best is None or yy < best[0]:
                    best = (yy, "aura", y)
        cycles = ([cyc.hs] if cyc is not None else []) + holes
        for ci, hs in enumerate(cycles):
            for h in hs:
                g = arr.hgeom(h)
                for yy, u in ray_up_hits(g, origin.x, origin.y):
                    if best is None or yy < best[0] - 1e-12 or (
                            abs(yy - best[0]) <= 1e-12 and best[1] == "aura"):
                        best = (yy, "boundary" if ci == 0 and cyc is not None else "hole", (h, u))
        if best is None:
            return None
        if best[1] == "aura":
            return ("aura", best[2], best[0])
        h, u = best[2]
        if best[1] == "boundary":
            return ("boundary", h, u)
        tag = arr.htag(h)
        if tag and tag[0] == "aura" and tag[1] in ca.structural:
            return ("aura", tag[1], best[0])
        return None

    def _build_lambda(self, j: int) -> LambdaList:
        ca = self.ca
        arr = self.arr
        cyc, holes = self._cycle(j)
        entries: list[LambdaEntry] = []
        fstar = ca.fstar[j]
        if cyc is None:
            return LambdaList(j, entries)
        labels = [self._slabel(h) for h in cyc.hs]
        with_run = set()
        # (i) target runs on the outer boundary
        for t in ca.active_targets:
            mask = [t in lab for lab in labels]
            for start, length in self._runs(mask):
                s = self._run_mid(cyc, start, length)
                h, tt = cyc.locate(s)
                entries.append(LambdaEntry(s, h, tt, t, "run"))
                with_run.add(t)
        # (ii) rays from interior targets and hole-forming starts
        ray_sources = []
        for t in ca.active_targets:
            if t in with_run:
                continue
            if set(ca.pos_faces(t)) & fstar:
                ray_sources.append((t, ca.pts[t], None))
        hole_starts = {}
        for hs in holes:
            for h in hs:
                tag = arr.htag(h)
                if tag and tag[0] == "aura" and tag[1] in ca.S:
                    g = arr.hgeom(h)
                    cands = [0.0, 1.0] + g.top_params() if g.kind == "arc" else [0.0, 1.0]
                    for u in cands:
                        q = g.point_at(u)
                        cur = hole_starts.get(tag[1])
                        if cur is None or q[1] > cur[1]:
                            hole_starts[tag[1]] = q
        for s in sorted(hole_starts):
            ray_sources.append((s, Point(*hole_starts[s]), s))
        for x, origin, own in ray_sources:
            res = self._ray(j, x, origin, own)
            if res is None:
                log.debug("ray from %d found nothing", x)
                continue
            if res[0] == "boundary":
                h, tt = res[1], res[2]
                s = cyc.cum[cyc.index[h]] + tt * arr.hlen(h)
                entries.append(LambdaEntry(s, h, tt, x, "ray", origin))
            else:
                y = res[1]
                e = self._ray_edge(x, y, origin, res[2])
                if e is not None:
                    self._cand.append(e)
        # (iii) starts touching the outer boundary
        for s in ca.start_ids:
            idxs = [k for k, h in enumerate(cyc.hs) if arr.htag(h) == ("aura", s)]
            if not idxs:
                continue
            clean = self._clean_faces(s)
            hf = arr.h_face
            mask = [False] * len(cyc.hs)
            for k in idxs:
                if hf[cyc.hs[k] ^ 1] in clean:
                    mask[k] = True
            runs = self._runs(mask)
            if runs:
                best = max(runs, key=lambda r: (sum(arr.hlen(cyc.hs[(r[0] + i) % len(cyc.hs)])
                                                    for i in range(r[1])), -r[0]))
                pos = self._run_mid(cyc, *best)
                h, tt = cyc.locate(pos)
                entries.append(LambdaEntry(pos, h, tt, s, "start"))
            else:
                obst = self._obstructing(s, clean)
                for t in obst:
                    e = self._direct(s, t)
                    if e is not None:
                        self._cand.append(e)
                # keep s on the cycle; edges through the obstructing auras become blockable
                own = frozenset([s])
                mask = [k in idxs and ca.f_inF[hf[cyc.hs[k] ^ 1]]
                        and ca.struct_label(hf[cyc.hs[k] ^ 1]) == own for k in range(len(cyc.hs))]
                runs = self._runs(mask)
                if runs and obst:
                    best = max(runs, key=lambda r: (sum(arr.hlen(cyc.hs[(r[0] + i) % len(cyc.hs)])
                                                        for i in range(r[1])), -r[0]))
                    pos = self._run_mid(cyc, *best)
                    h, tt = cyc.locate(pos)
                    entries.append(LambdaEntry(pos, h, tt, s, "start", via=tuple(obst)))
        entries.sort(key=lambda en: (en.pos, en.node))
        for en in entries:
            en.point = arr.hpoint(en.h, en.t)
        return LambdaList(j, entries)

    def _obstructing(self, s: int, clean: set) -> list[int]:
        ca = self.ca
        nb = self._face_adj()
        out = set()
        for f in clean:
            for g in nb.get(f, ()):
                lab = ca.struct_label(g) if ca.f_inF[g] else frozenset()
                if s in lab and len(lab) == 2:
                    (t,) = lab - {s}
                    if ca.kind[t] == "target":
                        out.add(t)
        return sorted(out)

    def _ray_edge(self, x: int, y: int, origin: Point, hit_y) -> MotionEdge | None:
        ca = self.ca
        allowed = frozenset([x, y])
        if hit_y is not None:
            hit = Point(origin.x, hit_y)
            ci = len(ca.loop.elements) + y
            try:
                u = self.arr.curves[ci].param_of(hit, 1e-7)
                if u is not None:
                    h, t = self.arr.locate(ci, u)
                    pieces = self.pf.point_to_vertex(h, t, ca.pos_vertex[y], allowed, self.ignore)
                    path = join_paths(self._ray_leg(x, origin, hit), self.pf.geometry(pieces))
                    if self._path_ok(path, allowed):
                        return MotionEdge(x, y, "guaranteed", (), path)
            except NoPath:
                pass
        self.repairs += 1
        return self._direct(x, y)

    def _path_ok(self, path, allowed) -> bool:
        ca = self.ca
        for p in ca.structural | frozenset(ca.parked_ids):
            if p in allowed:
                continue
            if path_clearance(path, ca.pts[p]) < AURA - 1e-7:
                return False
        return True

    def _lambda_edges(self, j: int, lam: LambdaList):
        ens = lam.entries
        n = len(ens)
        if n < 2:
            return
        cyc, _ = self._cycle(j)
        for k in range(n):
            a, b = ens[k], ens[(k + 1) % n]
            if a.node == b.node:
                continue
            allowed = frozenset([a.node, b.node])
            via = tuple(sorted(set(a.via + b.via) - allowed))
            walk = self._walk(cyc, a, b)
            ok = self.pf.pieces_in_free(walk) and (self.pf.pieces_label(walk) - self.ignore) <= allowed
            edge = None
            if ok:
                la = self._entry_leg(a, b.node)
                lb = self._entry_leg(b, a.node)
                if la is not None and lb is not None:
                    path = join_paths(la, self.pf.geometry(walk), reverse_path(lb))
                    if self._path_ok(path, allowed | frozenset(via)):
                        kind = "blockable" if via else "guaranteed"
                        edge = MotionEdge(a.node, b.node, kind, via, path)
            if edge is None:
                self.repairs += 1
                edge = self._direct(a.node, b.node)
                if edge is None and via:
                    edge = self._direct(a.node, b.node, allowed | frozenset(via), "blockable", via)
            if edge is not None:
                self._cand.append(edge)
            else:
                log.warning("no path for consecutive Lambda pair %d-%d", a.node, b.node)

    # ----------------------------------------------------------- blockable
    def _incident(self, prev_h: int, at_end: bool, area_owner: int):
        """Incident positions at a free-chain endpoint and the F* component used."""
        ca = self.ca
        arr = self.arr
        tag = arr.htag(prev_h)
        if not tag or tag[0] != "aura":
            return set(), None
        pid = tag[1]
        if pid in ca.S:
            return {pid}, None
        if pid != area_owner:
            return set(), None
        tw = prev_h ^ 1
        f = arr.h_face[tw]
        j = ca.face_fstar.get(f)
        if j is None:
            starts = ca.f_aura[f] & ca.S if ca.f_inF[f] else frozenset()
            return set(starts), None
        lam = self.lambdas[j]
        cyc, _ = self._cycle(j)
        if cyc is None or tw not in cyc.index:
            return set(), j
        if not lam.entries:
            return set(), j
        k = cyc.index[tw]
        # x sits at the start of tw (chain start) or its end (chain end)
        pos = cyc.cum[k + 1] if at_end else cyc.cum[k]
        ens = lam.entries
        before = [en for en in ens if en.pos <= pos]
        pred = before[-1] if before else ens[-1]
        after = [en for en in ens if en.pos > pos]
        succ = after[0] if after else ens[0]
        return {pred.node, succ.node}, j

    def _blockable(self):
        ca = self.ca
        arr = self.arr
        for ri, r in enumerate(ca.remotes):
            if not r.is_blocking:
                continue
            tb = r.owner
            for ch in r.free_boundary:
                # x: chain start, preceded by prev_h whose twin starts at x
                ix, jx = self._incident(ch.prev_h, False, tb)
                iy, jy = self._incident(ch.next_h, True, tb)
                for u in sorted(ix):
                    for v in sorted(iy):
                        if u == v:
                            continue
                        e = self._blockable_edge(u, v, tb, ch)
                        if e is not None:
                            self._cand.append(e)
                # empty-Lambda special case: hop over an empty F* component
                for side_inc, j_empty in ((iy, jx), (ix, jy)):
                    if j_empty is None or self.lambdas[j_empty].entries:
                        continue
                    for rb2, far in self._far_incidents(j_empty, ri):
                        for u in sorted(side_inc):
                            for v in sorted(far):
                                if u == v:
                                    continue
                                e = self._direct(u, v, allowed=(u, v, tb, ca.remotes[rb2].owner),
                                                 kind="blockable",
                                                 blockers=tuple(sorted({tb, ca.remotes[rb2].owner})))
                                if e is not None:
                                    self._cand.append(e)

    def _far_incidents(self, j: int, ri: int):
        """Blocking areas other than ``ri`` bordering empty F*_j, with far-side incidents."""
        ca = self.ca
        arr = self.arr
        out = []
        fs = ca.fstar[j]
        for rk, r2 in enumerate(ca.remotes):
            if rk == ri or not r2.is_blocking:
                continue
            for ch in r2.free_boundary:
                near_x = arr.h_face[ch.prev_h ^ 1] in fs
                near_y = arr.h_face[ch.next_h ^ 1] in fs
                if near_x and not near_y:
                    inc, _ = self._incident(ch.next_h, True, r2.owner)
                elif near_y and not near_x:
                    inc, _ = self._incident(ch.prev_h, False, r2.owner)
                else:
                    continue
                if inc:
                    out.append((rk, inc))
        return out

    def _blockable_edge(self, u: int, v: int, tb: int, ch) -> MotionEdge | None:
        ca = self.ca
        arr = self.arr
        pf = self.pf
        allowed = frozenset([u, v, tb])
        vx = arr.origin(ch.halfedges[0])
        vy = arr.dest(ch.halfedges[-1])
        try:
            p1 = pf.vertex_to_vertex(ca.pos_vertex[u], vx, allowed, self.ignore)
            p3 = pf.vertex_to_vertex(vy, ca.pos_vertex[v], allowed, self.ignore)
            mid = [(h, 0.0, 1.0) for h in ch.halfedges]
            pieces = p1 + mid + p3
            if (pf.pieces_label(pieces) - self.ignore) <= allowed and pf.pieces_in_free(pieces):
                return MotionEdge(u, v, "blockable", (tb,), pf.geometry(pieces))
        except NoPath:
            pass
        self.repairs += 1
        return self._direct(u, v, allowed=allowed, kind="blockable", blockers=(tb,))

    # ------------------------------------------------------------ finalize
    def _finalize(self):
        best: dict[tuple, MotionEdge] = {}
        for e in self._cand:
            if e.u == e.v:
                continue
            if e.u > e.v:
                e = MotionEdge(e.v, e.u, e.kind, e.blockers, reverse_path(e.path), e.detour)
            key = (e.u, e.v, e.kind, e.blockers)
            cur = best.get(key)
            if cur is None or e.length < cur.length - 1e-12:
                best[key] = e
        guaranteed_pairs = {(k[0], k[1]) for k in best if k[2] == "guaranteed"}
        edges = [e for k, e in sorted(best.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2], kv[0][3]))
                 if not (k[2] == "blockable" and (k[0], k[1]) in guaranteed_pairs)]
        self.edges = edges
        self.adj: dict[int, list[tuple[int, int]]] = {n: [] for n in self.nodes}
        for k, e in enumerate(edges):
            self.adj[e.u].append((e.v, k))
            self.adj[e.v].append((e.u, k))
        for n in self.adj:
            self.adj[n].sort()

    # ---------------------------------------------------------------- query
    def is_connected(self) -> bool:
        ids = sorted(self.nodes)
        if not ids:
            return True
        seen = {ids[0]}
        dq = deque([ids[0]])
        while dq:
            a = dq.popleft()
            for b, _ in self.adj[a]:
                if b not in seen:
                    seen.add(b)
                    dq.append(b)
        return len(seen) == len(ids)


def graph_path(G: MotionGraph, src, dst, usable=None) -> list[int]:
    """BFS path from ``src`` to ``dst`` as a list of edge indices.

    ``src`` may be a node or a collection of nodes. ``usable(edge)`` filters
    edges; by default only guaranteed edges are used.
    """
    if usable is None:
        usable = lambda e: e.kind == "guaranteed"  # noqa: E731
    srcs = [src] if isinstance(src, int) else sorted(src)
    if dst in srcs:
        return []
    prev: dict[int, tuple[int, int]] = {s: (-1, -1) for s in srcs}
    dq = deque(srcs)
    while dq:
        a = dq.popleft()
        for b, k in G.adj[a]:
            if b in prev or not usable(G.edges[k]):
                continue
            prev[b] = (a, k)
            if b == dst:
                out = []
                while prev[b][0] != -1:
                    out.append(prev[b][1])
                    b = prev[b][0]
                return out[::-1]
            dq.append(b)
    raise NoPath
