"""Independent checks of instances and motion plans, plus a grid oracle.

Plan checking uses only the geometry primitives: robots move one at a time, so
a mover against the parked robots reduces to exact path clearance queries.
"""
from __future__ import annotations

import math
import os
from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .geom.intersect import intersect
from .geom.primitives import Arc, Point, Segment, dist

DEFAULT_TAU = 1e-6


def tau() -> float:
    """Verification slack; the environment variable MRMP_EPS overrides it."""
    return float(os.environ.get("MRMP_EPS", DEFAULT_TAU))


@dataclass
class Violation:
    kind: str
    detail: dict
    message: str = ""

    def to_json(self) -> dict:
        return {"kind": self.kind, "detail": self.detail, "message": self.message}


# ------------------------------------------------------------- distances
def _poly_edges(vertices) -> list[Segment]:
    pts = [Point(float(x), float(y)) for x, y in vertices]
    return [Segment(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]


def _inside_polygon(vertices, p) -> bool:
    x, y = p
    inside = False
    n = len(vertices)
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            xi = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if xi > x:
                inside = not inside
    return inside


def element_segment_distance(e, s: Segment) -> float:
    """Exact minimum distance between a path element and a segment."""
    if intersect(e, s, 0.0):
        return 0.0
    cands = [s.distance_to(e.a), s.distance_to(e.b), e.distance_to(s.a), e.distance_to(s.b)]
    if isinstance(e, Arc):
        c = e.center
        foot = s.point_at(s.closest_param(c))
        phi = math.atan2(foot[1] - c[1], foot[0] - c[0])
        for ang in (phi, phi + math.pi):
            u = e.angle_param(ang)
            if u is not None:
                cands.append(s.distance_to(e.point_at(u)))
    return min(cands)


def obstacle_clearance(path, vertices) -> float:
    edges = _poly_edges(vertices)
    return min((element_segment_distance(e, s) for e in path for s in edges), default=math.inf)


# --------------------------------------------------------------- instance
def check_instance(inst) -> list[Violation]:
    """Polygon simplicity, positions in free space, separation and charge."""
    from .freespace import MalformedPolygon, compute_free_space, validate_polygon, EmptyFreeSpace

    out: list[Violation] = []
    try:
        W = validate_polygon(inst.workspace)
    except MalformedPolygon as exc:
        return [Violation("malformedPolygon", {"reason": str(exc)}, str(exc))]
    edges = _poly_edges(W)
    t = tau()
    for name, pts in (("starts", inst.starts), ("targets", inst.targets)):
        for i, p in enumerate(pts):
            clr = min(s.distance_to(p) for s in edges)
            if not _inside_polygon(W, p) or clr < 1.0 - t:
                out.append(Violation("outsideFreeSpace", {"set": name, "index": i, "clearance": clr},
                                     f"{name}[{i}] has clearance {clr:.6g} < 1"))
    for name, pts in (("starts", inst.starts), ("targets", inst.targets)):
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                d = dist(pts[i], pts[j])
                if d < 4.0 - t:
                    out.append(Violation("muViolation", {"set": name, "i": i, "j": j, "distance": d},
                                         f"{name}[{i}] and {name}[{j}] are {d:.9g} apart (< 4)"))
    try:
        fs = compute_free_space(W)
    except EmptyFreeSpace:
        if not out:
            out.append(Violation("outsideFreeSpace", {"reason": "empty free space"}, "free space is empty"))
        return out
    ncomp = len(fs.components)
    per, cs, ct = fs.partition(inst.starts, inst.targets)
    if ncomp >= 2:
        for i, s in enumerate(inst.starts):
            for j, g in enumerate(inst.targets):
                d = dist(s, g)
                if d < 3.0 - t:
                    out.append(Violation("betaViolation", {"start": i, "target": j, "distance": d},
                                         f"starts[{i}] and targets[{j}] are {d:.9g} apart (< 3)"))
    for cp in per:
        if cp.charge != 0:
            out.append(Violation("chargeViolation", {"component": cp.index, "charge": cp.charge},
                                 f"component {cp.index} has charge {cp.charge}"))
    if ncomp == 1 and len(inst.starts) != len(inst.targets) and not any(
            v.kind == "chargeViolation" for v in out):
        out.append(Violation("chargeViolation", {"component": 0,
                                                 "charge": len(inst.starts) - len(inst.targets)},
                             "start and target counts differ"))
    return out


# ------------------------------------------------------------------ plan
def _match(occ: list, p, t: float) -> int:
    best, bi = math.inf, -1
    for k, q in enumerate(occ):
        d = dist(p, q)
        if d < best:
            best, bi = d, k
    return bi if best <= t else -1


def check_plan(inst, plan) -> list[Violation]:
    """Simulate the moves from the start set and report every violation found."""
    t = tau()
    W = [Point(float(x), float(y)) for x, y in inst.workspace]
    occ = [Point(float(x), float(y)) for x, y in inst.starts]
    out: list[Violation] = []
    for mi, mv in enumerate(plan.moves):
        a, b, path = Point(*mv.start), Point(*mv.end), list(mv.path)
        k = _match(occ, a, t)
        if k < 0:
            out.append(Violation("wrongStartSet", {"move": mi, "from": list(a)},
                                 f"move {mi} starts where no robot rests"))
            continue
        parked = occ[:k] + occ[k + 1:]
        # continuity
        if path:
            gaps = [dist(a, path[0].a)] + [dist(path[i].b, path[i + 1].a) for i in range(len(path) - 1)] \
                + [dist(path[-1].b, b)]
            g = max(gaps)
            if g > t:
                out.append(Violation("discontinuity", {"move": mi, "gap": g},
                                     f"move {mi} has a gap of {g:.6g}"))
        elif dist(a, b) > t:
            out.append(Violation("discontinuity", {"move": mi, "gap": dist(a, b)},
                                 f"move {mi} has no path but moves {dist(a, b):.6g}"))
        probe = path
        # obstacles
        clr = min(obstacle_clearance(probe, W), min(s.distance_to(a) for s in _poly_edges(W)),
                  min(s.distance_to(b) for s in _poly_edges(W)))
        if clr < 1.0 - t or not _inside_polygon(W, a):
            out.append(Violation("pathObstacleCollision", {"move": mi, "clearance": clr},
                                 f"move {mi} passes at {clr:.6g} from an obstacle"))
        # parked robots
        for j, p in enumerate(parked):
            d = min([e.distance_to(p) for e in probe] + [dist(a, p), dist(b, p)])
            if d < 2.0 - t:
                out.append(Violation("pathRobotCollision", {"move": mi, "robot": list(p), "distance": d},
                                     f"move {mi} passes at {d:.6g} from a parked robot"))
        occ[k] = b
    # final set
    remaining = list(occ)
    missing = []
    for g in inst.targets:
        k = _match(remaining, Point(float(g[0]), float(g[1])), t)
        if k < 0:
            missing.append(list(g))
        else:
            remaining.pop(k)
    if missing or remaining:
        out.append(Violation("wrongFinalSet", {"unoccupiedTargets": missing,
                                               "strayRobots": [list(p) for p in remaining]},
                             f"{len(missing)} targets unoccupied at the end"))
    return out


# ----------------------------------------------------------------- oracle
class _Grid:
    """Grid free-space model at one clearance setting."""

    def __init__(self, inst, h: float, obst: float, robot: float, exact_links: bool):
        W = np.asarray(inst.workspace, dtype=float)
        self.W = [Point(*p) for p in W]
        self.edges = _poly_edges(self.W)
        self.h = h
        self.robot = robot
        self.exact = exact_links
        x0, y0 = W.min(axis=0)
        x1, y1 = W.max(axis=0)
        self.xs = np.arange(x0, x1 + h * 0.5, h)
        self.ys = np.arange(y0, y1 + h * 0.5, h)
        X, Y = np.meshgrid(self.xs, self.ys, indexing="ij")
        from .freespace import polygon_distance
        from matplotlib.path import Path
        inside = Path(W).contains_points(np.c_[X.ravel(), Y.ravel()]).reshape(X.shape)
        clr = polygon_distance(W, X, Y)
        self.X, self.Y = X, Y
        self.free = inside & (clr >= obst)
        self.positions = [Point(float(p[0]), float(p[1])) for p in list(inst.starts) + list(inst.targets)]
        self.links = [self._links(p) for p in self.positions]

    def _links(self, p) -> list[tuple[int, int]]:
        h = self.h
        i0 = int(math.floor((p.x - self.xs[0]) / h))
        j0 = int(math.floor((p.y - self.ys[0]) / h))
        out = []
        reach = 1 if not self.exact else 2
        for i in range(i0 - reach + 1, i0 + reach + 1):
            for j in range(j0 - reach + 1, j0 + reach + 1):
                if not (0 <= i < len(self.xs) and 0 <= j < len(self.ys)) or not self.free[i, j]:
                    continue
                q = Point(float(self.xs[i]), float(self.ys[j]))
                if self.exact:
                    seg = Segment(p, q)
                    if dist(p, q) > h * math.sqrt(2) + 1e-12:
                        continue
                    if obstacle_clearance([seg], self.W) < 1.0:
                        continue
                out.append((i, j))
        return out

    def labels(self, parked):
        """Component labels of the grid and of each position with a robot at ``parked``."""
        mask = self.free
        if parked is not None:
            d = np.hypot(self.X - parked[0], self.Y - parked[1])
            mask = mask & (d >= self.robot)
        lab, _ = ndimage.label(mask, structure=np.ones((3, 3), dtype=int))
        plab = []
        for p, links in zip(self.positions, self.links):
            ok = parked is None or dist(p, parked) >= (2.0 if self.exact else self.robot)
            got = 0
            if ok:
                for i, j in links:
                    if lab[i, j] == 0:
                        continue
                    if parked is not None and self.exact and \
                            Segment(p, Point(float(self.xs[i]), float(self.ys[j]))).distance_to(parked) < 2.0:
                        continue
                    got = int(lab[i, j])
                    break
            plab.append(got)
        return lab, plab


def _solvable(grid: _Grid, inst, max_nodes: int) -> bool | None:
    m = len(inst.starts)
    if m == 0:
        return True
    if m == 1:
        _, pl = grid.labels(None)
        return pl[0] != 0 and pl[0] == pl[1]
    # m == 2: state is (parked node, label of the mover's component)
    nodes = [("g", i, j) for i, j in zip(*np.nonzero(grid.free))]
    if len(nodes) > max_nodes:
        return None
    pos_nodes = [("p", k) for k in range(4)]
    allnodes = pos_nodes + nodes
    index = {n: k for k, n in enumerate(allnodes)}

    def point(n):
        if n[0] == "p":
            return grid.positions[n[1]]
        return Point(float(grid.xs[n[1]]), float(grid.ys[n[2]]))

    cache: dict = {}

    def lab_of(n):
        if n not in cache:
            cache[n] = grid.labels(point(n))
        return cache[n]

    def label_of_node(labs, n):
        lab, pl = labs
        return pl[n[1]] if n[0] == "p" else int(lab[n[1], n[2]])

    # starts are positions 0,1; targets 2,3
    seen = set()
    dq = deque()
    for parked, mover in ((0, 1), (1, 0)):
        c = lab_of(("p", parked))[1][mover]
        if c:
            st = (("p", parked), c)
            seen.add(st)
            dq.append(st)
    goal_pairs = ((2, 3), (3, 2))
    grid_idx = np.array([[n[1], n[2]] for n in nodes]) if nodes else np.zeros((0, 2), int)
    while dq:
        p, c = dq.popleft()
        labs = lab_of(p)
        for a, b in goal_pairs:
            if p == ("p", a) and labs[1][b] == c:
                return True
        lab, pl = labs
        cand = [("p", k) for k in range(4) if pl[k] == c]
        if len(grid_idx):
            sel = lab[grid_idx[:, 0], grid_idx[:, 1]] == c
            cand += [nodes[k] for k in np.nonzero(sel)[0]]
        for q in cand:
            if q == p:
                continue
            c2 = label_of_node(lab_of(q), p)
            if not c2:
                continue
            st = (q, c2)
            if st not in seen:
                seen.add(st)
                dq.append(st)
        # drop label grids that are no longer needed to bound memory
        if len(cache) > 4 * max_nodes:
            cache.clear()
    return False


def brute_force_oracle(inst, grid_step: float = 0.25, max_nodes: int = 6000) -> str:
    """Grid BFS sandwich: "solvable", "unsolvable" or "unknown".

    The conservative grid keeps clearance 1 + h to obstacles and 2 + h to
    robots; the optimistic grid only 1 - h*sqrt(2)/2 and 2 - h*sqrt(2).
    """
    m = len(inst.starts)
    if m > 2 or len(inst.targets) != m:
        return "unknown"
    h = grid_step
    cons = _Grid(inst, h, 1.0 + h, 2.0 + h, exact_links=True)
    r = _solvable(cons, inst, max_nodes)
    if r:
        return "solvable"
    opt = _Grid(inst, h, 1.0 - h * math.sqrt(2) / 2, 2.0 - h * math.sqrt(2), exact_links=False)
    r2 = _solvable(opt, inst, max_nodes)
    if r2 is False:
        return "unsolvable"
    return "unknown"
