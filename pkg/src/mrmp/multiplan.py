"""Several free-space components: interference, solving order and detours.

Components are solved one at a time. A position whose aura cuts another
component's boundary into two or more pieces (a remote blocker) forces an
order; the resulting directed forest is sorted topologically. While one
component is solved, robots elsewhere rest on their start or target positions
and every path keeps out of their auras.
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass

from .freespace import AURA, compute_free_space
from .geom.arrangement import Arrangement
from .geom.primitives import Point, circle, dist
from .geom.region import boundary_components_in_disc, path_clearance, region_distance
from .planner import ComponentPlanner, Move, MotionPlan
from .verifier import Violation, check_instance

log = logging.getLogger(__name__)


class PreconditionViolation(ValueError):
    def __init__(self, violations: list[Violation]):
        super().__init__("; ".join(v.message for v in violations))
        self.violations = violations


class CycleDetected(PreconditionViolation):
    pass


class DetourImpossible(RuntimeError):
    pass


@dataclass(frozen=True)
class InterferenceRecord:
    source: tuple  # ("start" | "target", index)
    point: Point
    source_component: int
    target_component: int
    is_remote_blocker: bool


def interference_sets(fs, starts, targets) -> list[InterferenceRecord]:
    """Cross-component records: positions whose aura reaches another component."""
    _, cs, ct = fs.partition(starts, targets)
    out = []
    items = [(("start", i), Point(*p), c) for i, (p, c) in enumerate(zip(starts, cs))] + \
            [(("target", i), Point(*p), c) for i, (p, c) in enumerate(zip(targets, ct))]
    for src, p, c in items:
        for k, comp in enumerate(fs.components):
            if k == c:
                continue
            if region_distance(comp, p) >= AURA:
                continue
            chains = boundary_components_in_disc(comp, p, AURA)
            out.append(InterferenceRecord(src, p, c, k, len(chains) >= 2))
    return out


def forest_edges(records) -> set[tuple[int, int]]:
    edges = set()
    for r in records:
        if not r.is_remote_blocker:
            continue
        if r.source[0] == "start":
            edges.add((r.source_component, r.target_component))
        else:
            edges.add((r.target_component, r.source_component))
    return edges


def build_order(records, n_components: int) -> list[int]:
    """Topological order of the interference forest, lowest index first."""
    edges = forest_edges(records)
    indeg = [0] * n_components
    succ: dict[int, list[int]] = {i: [] for i in range(n_components)}
    for a, b in sorted(edges):
        succ[a].append(b)
        indeg[b] += 1
    heap = [i for i in range(n_components) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        a = heapq.heappop(heap)
        order.append(a)
        for b in succ[a]:
            indeg[b] -= 1
            if indeg[b] == 0:
                heapq.heappush(heap, b)
    if len(order) != n_components:
        stuck = sorted(set(range(n_components)) - set(order))
        raise CycleDetected([Violation("interferenceCycle", {"components": stuck},
                                       f"remote blockers form a cycle among components {stuck}")])
    return order


# ---------------------------------------------------------------- detours
def detour_around_auras(move: Move, parked, region) -> Move:
    """Reroute ``move`` so that it keeps distance 2 from every parked position.

    The path, the region boundary and the parked aura circles are overlaid;
    the shortest route through the overlay prefers the original path and runs
    along aura circles where it has to leave it.
    """
    parked = [Point(*p) for p in parked]
    path = list(move.path)
    bad = [p for p in parked if path_clearance(path, p) < AURA - 1e-9]
    if not bad:
        return move
    n_path = len(path)
    curves = list(path) + list(region.elements) + [circle(p, AURA) for p in bad]
    arr = Arrangement(curves, points=[move.start, move.end])
    edge_ok = []
    for e in range(arr.n_edges):
        g = arr.e_geom[e]
        mid = g.point_at(0.5)
        ok = all(dist(mid, p) >= AURA - 1e-9 for p in parked)
        if ok:
            ok = all(path_clearance([g], p) >= AURA - 1e-9 for p in parked)
        if ok:
            ok = bool(region.contains([mid[0]], [mid[1]])[0]) or region_distance(region, mid) <= 1e-9
        edge_ok.append(ok)
    adj: dict[int, list] = {}
    for e in range(arr.n_edges):
        if not edge_ok[e]:
            continue
        w = arr.e_len[e] * (1e-3 if arr.e_curve[e] < n_path else 1.0)
        adj.setdefault(arr.e_v0[e], []).append((arr.e_v1[e], 2 * e, w))
        adj.setdefault(arr.e_v1[e], []).append((arr.e_v0[e], 2 * e + 1, w))
    s, t = arr.point_vertex[0], arr.point_vertex[1]
    best = {s: 0.0}
    prev: dict[int, tuple] = {}
    heap = [(0.0, s)]
    done = set()
    while heap:
        c, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        if v == t:
            break
        for w, h, cost in adj.get(v, ()):
            nc = c + cost
            if nc < best.get(w, float("inf")) - 1e-15:
                best[w] = nc
                prev[w] = (v, h)
                heapq.heappush(heap, (nc, w))
    if t not in done:
        raise DetourImpossible(f"no detour from {tuple(move.start)} to {tuple(move.end)}")
    hs = []
    v = t
    while v != s:
        u, h = prev[v]
        hs.append(h)
        v = u
    geom = [arr.hgeom(h) for h in reversed(hs)]
    return Move(move.start, move.end, tuple(geom))


# ---------------------------------------------------------------- solving
def solve_all(inst, check: bool = True) -> MotionPlan:
    """Plan for every component in interference order."""
    if check:
        v = check_instance(inst)
        if v:
            raise PreconditionViolation(v)
    W = inst.workspace
    fs = compute_free_space(W)
    starts = [Point(float(x), float(y)) for x, y in inst.starts]
    targets = [Point(float(x), float(y)) for x, y in inst.targets]
    per, cs, ct = fs.partition(starts, targets)
    nc = len(fs.components)
    if nc == 1:
        order = [0]
    else:
        order = build_order(interference_sets(fs, starts, targets), nc)
    rank = {c: k for k, c in enumerate(order)}
    moves: list[Move] = []
    occ = list(starts)
    for c in order:
        cp = per[c]
        if not cp.starts and not cp.targets:
            continue
        S = [starts[i] for i in cp.starts]
        T = [targets[j] for j in cp.targets]
        parked = [starts[i] for i, k in enumerate(cs) if k != c and rank[k] > rank[c]] + \
                 [targets[j] for j, k in enumerate(ct) if k != c and rank[k] < rank[c]]
        planner = ComponentPlanner(fs.components[c], S, T, parked)
        for mv in planner.solve():
            others = _others(occ, mv.start)
            if any(path_clearance(list(mv.path), p) < AURA - 1e-9 for p in others):
                mv = detour_around_auras(mv, others, fs.components[c])
            moves.append(mv)
            _apply(occ, mv)
    return MotionPlan(moves, order)


def _others(occ, p):
    k = min(range(len(occ)), key=lambda i: dist(occ[i], p))
    return occ[:k] + occ[k + 1:]


def _apply(occ, mv):
    k = min(range(len(occ)), key=lambda i: dist(occ[i], mv.start))
    occ[k] = Point(*mv.end)
