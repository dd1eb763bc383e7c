"""Single-component planner: divide and conquer over the residual tree.

Zero-charge tree edges are cut first; otherwise a sink (all charge-oriented
edges inward) is solved by filling its targets, first from its own starts and
then by importing robots across each inbound blocking area. Start-target pairs
closer than 2 are merged into one node and settled at the very end.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field

from .freespace import AURA, ComponentAnalysis
from .geom.primitives import Point, Segment, dist
from .geom.intersect import intersect
from .geom.region import path_clearance, point_in_region
from .motiongraph import MotionGraph
from .paths import NoPath, join_paths
from .verifier import Violation

log = logging.getLogger(__name__)

MU = 4.0


class PlanningError(RuntimeError):
    """Internal failure: a required motion-graph path is missing."""


@dataclass(frozen=True)
class Move:
    start: Point  # "from" in the file format
    end: Point
    path: tuple

    @property
    def length(self) -> float:
        return sum(e.length for e in self.path)


@dataclass
class MotionPlan:
    moves: list = field(default_factory=list)
    order: list = field(default_factory=list)  # components in solving order

    @property
    def total_length(self) -> float:
        return sum(m.length for m in self.moves)


# ----------------------------------------------------------------- validation
def validate_single_component(starts, targets, region=None) -> list[Violation]:
    """mu >= 4 within S and within T, zero charge, and positions inside ``region``."""
    out = []
    for name, pts in (("starts", starts), ("targets", targets)):
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                d = dist(pts[i], pts[j])
                if d < MU - 1e-9:
                    out.append(Violation("muViolation", {"set": name, "i": i, "j": j, "distance": d},
                                         f"{name} {i} and {j} are {d:.6g} apart"))
    if len(starts) != len(targets):
        out.append(Violation("chargeViolation", {"component": 0, "charge": len(starts) - len(targets)},
                             "start and target counts differ"))
    if region is not None:
        for name, pts in (("starts", starts), ("targets", targets)):
            for i, p in enumerate(pts):
                if point_in_region(p, region) == "outside":
                    out.append(Violation("outsideFreeSpace", {"set": name, "index": i},
                                         f"{name} {i} lies outside the component"))
    return out


def merge_close_pairs(starts, targets) -> dict[int, int]:
    """Map start index -> target index for every pair closer than 2."""
    pairs: dict[int, int] = {}
    used = set()
    for i, s in enumerate(starts):
        close = [j for j, t in enumerate(targets) if dist(s, t) < AURA]
        if len(close) > 1:
            raise AssertionError(f"start {i} has {len(close)} targets within distance 2")
        if close:
            j = close[0]
            if j in used:
                raise AssertionError(f"target {j} has two starts within distance 2")
            used.add(j)
            pairs[i] = j
    return pairs


# ---------------------------------------------------------------- tree logic
def _tree_parts(nodes: set, edges: list, removed: set) -> list[set]:
    adj = {n: [] for n in nodes}
    for k, (a, b) in enumerate(edges):
        if k in removed or a not in nodes or b not in nodes:
            continue
        adj[a].append(b)
        adj[b].append(a)
    seen = set()
    parts = []
    for n in sorted(nodes):
        if n in seen:
            continue
        comp = {n}
        dq = deque([n])
        seen.add(n)
        while dq:
            a = dq.popleft()
            for b in adj[a]:
                if b not in seen:
                    seen.add(b)
                    comp.add(b)
                    dq.append(b)
        parts.append(comp)
    return parts


def _side(nodes: set, edges: list, k: int, root: int) -> set:
    """Nodes reachable from ``root`` without using edge ``k``."""
    return next(p for p in _tree_parts(nodes, edges, {k}) if root in p)


def cut_zero_charge_edges(nodes, edges, charge) -> list[set]:
    """Split the tree on ``nodes`` at every edge that separates two zero-charge parts.

    ``edges`` is a list of node pairs; ``charge`` maps node -> charge.
    """
    nodes = set(nodes)
    cut = set()
    for k, (a, b) in enumerate(edges):
        if a not in nodes or b not in nodes:
            continue
        side = _side(nodes, edges, k, a)
        if sum(charge[n] for n in side) == 0 and sum(charge[n] for n in nodes - side) == 0:
            cut.add(k)
    return _tree_parts(nodes, edges, cut)


def find_sink(nodes, edges, charge):
    """Lowest-index node whose incident edges all point inward (by subtree charge)."""
    nodes = set(nodes)
    out_deg = {n: 0 for n in nodes}
    for k, (a, b) in enumerate(edges):
        if a not in nodes or b not in nodes:
            continue
        qa = sum(charge[n] for n in _side(nodes, edges, k, a))
        if qa > 0:
            out_deg[a] += 1
        elif qa < 0:
            out_deg[b] += 1
        else:
            raise ValueError("zero-charge edge left in tree")
    for n in sorted(nodes):
        if out_deg[n] == 0:
            return n
    raise ValueError("no sink found")


# ------------------------------------------------------------------ planner
class ComponentPlanner:
    """Plans one free-space component.

    Parameters
    ----------
    region : GeneralizedRegion
        The component.
    starts, targets : list of Point
    parked : list of Point
        Positions of robots resting in other components.
    """

    def __init__(self, region, starts, targets, parked=()):
        self.starts = [Point(float(p[0]), float(p[1])) for p in starts]
        self.targets = [Point(float(p[0]), float(p[1])) for p in targets]
        self.pairs = merge_close_pairs(self.starts, self.targets)
        self.ca = ComponentAnalysis(region, self.starts, self.targets, parked,
                                    ignore_targets=sorted(self.pairs.values()))
        ns = len(self.starts)
        self.G = MotionGraph(self.ca, {s: ns + t for s, t in self.pairs.items()})
        ca = self.ca
        # goal nodes: active targets plus merged starts
        self.goal = set(ca.active_targets) | set(self.pairs)
        self.occ = set(ca.start_ids)
        self.blocker_ids = {r.owner for r in ca.remotes if r.is_blocking}
        self.moves: list[Move] = []
        self.h_of = dict(ca.pos_residual)

    # ------------------------------------------------------------- charges
    def _charge(self) -> dict[int, int]:
        q = {n: 0 for n in range(len(self.ca.residual))}
        for pid in self.G.nodes:
            node = self.h_of.get(pid)
            if node is None:
                continue
            if pid in self.goal:
                if pid not in self.occ:
                    q[node] -= 1
            elif pid in self.occ:
                q[node] += 1
        return q

    # --------------------------------------------------------- graph search
    def _usable(self, guaranteed_only: bool):
        occ = self.occ

        def ok(e):
            if e.kind == "guaranteed":
                return True
            if guaranteed_only:
                return False
            return not (set(e.blockers) & occ)
        return ok

    def _bfs(self, sources, usable, allowed_nodes=None):
        """Hop distances and parent edges from ``sources``."""
        G = self.G
        prev = {s: None for s in sources}
        hops = {s: 0 for s in sources}
        dq = deque(sorted(sources))
        while dq:
            a = dq.popleft()
            for b, k in G.adj[a]:
                if b in prev or not usable(G.edges[k]):
                    continue
                if allowed_nodes is not None and b not in allowed_nodes:
                    continue
                prev[b] = (a, k)
                hops[b] = hops[a] + 1
                dq.append(b)
        return hops, prev

    @staticmethod
    def _unwind(prev, b) -> list[tuple[int, int, int]]:
        out = []
        while prev[b] is not None:
            a, k = prev[b]
            out.append((a, b, k))
            b = a
        return out[::-1]

    # ------------------------------------------------------------- moves
    def chain_move(self, hops: list[tuple[int, int, int]]) -> list[Move]:
        """Shift robots along a node path so that its first node is freed and its last filled.

        Hops of one robot through free nodes are merged into a single move.
        """
        if not hops:
            return []
        G = self.G
        nodes = [hops[0][0]] + [b for _, b, _ in hops]
        if nodes[0] not in self.occ or nodes[-1] in self.occ:
            raise PlanningError("chain move needs an occupied source and a free destination")
        occ_idx = [i for i, n in enumerate(nodes[:-1]) if n in self.occ]
        out = []
        dest = len(nodes) - 1
        for i in reversed(occ_idx):
            path = []
            for k in range(i, dest):
                e = G.edges[hops[k][2]]
                blocked = set(e.blockers) & (self.occ - {nodes[i]})
                if blocked:
                    raise PlanningError(f"blockable edge used while blockers {sorted(blocked)} occupied")
                path.extend(e.oriented_path(nodes[k]))
            a, b = nodes[i], nodes[dest]
            mv = Move(self.ca.pts[a], self.ca.pts[b], tuple(join_paths(path)))
            self.occ.discard(a)
            self.occ.add(b)
            out.append(mv)
            dest = i
        self.moves.extend(out)
        return out

    def _fill(self, sources, targets, guaranteed_first=True, avoid_last=()):
        """Move one robot from some occupied source to some free target."""
        targets = set(targets) - self.occ
        sources = set(sources) & self.occ
        if not targets or not sources:
            raise PlanningError("nothing to fill")
        for g_only in ((True, False) if guaranteed_first else (False,)):
            hops, prev = self._bfs(sources, self._usable(g_only))
            cands = [t for t in targets if t in hops]
            if cands:
                t = min(cands, key=lambda t: (t in avoid_last, hops[t], t))
                self.chain_move(self._unwind(prev, t))
                return t
        raise NoPath

    # -------------------------------------------------------------- sinks
    def solve_sink(self, sigma: int, nodes: set, edges: list, H_edges: list):
        ca = self.ca
        in_sigma = [p for p in sorted(self.G.nodes) if self.h_of.get(p) == sigma]
        sig_goal = [p for p in in_sigma if p in self.goal]
        sig_starts = [p for p in in_sigma if p not in self.goal]
        blockers_here = {tb for (z, w, ri, tb) in H_edges if tb in sig_goal}
        # phase 1: own starts into own targets
        for s in sig_starts:
            if s not in self.occ:
                continue
            if not set(sig_goal) - self.occ:
                break
            self._fill([s], sig_goal, True, blockers_here)
        # phase 2: imports across inbound edges
        q = self._charge()
        for k, (a, b) in sorted(enumerate(edges), key=lambda kv: (sum(kv[1]) - sigma, kv[0])):
            if sigma not in (a, b) or a not in nodes or b not in nodes:
                continue
            other = b if a == sigma else a
            behind = _side(nodes, edges, k, other)
            need = sum(q[n] for n in behind)
            tb = H_edges[k][3]
            for _ in range(max(0, need)):
                srcs = [p for p in self.occ if self.h_of.get(p) in behind and p not in self.goal]
                try:
                    self._fill(srcs, sig_goal, False, blockers_here)
                except NoPath:
                    if tb in self.occ and tb in sig_goal:
                        self._fill([tb], [g for g in sig_goal if g != tb], True, blockers_here)
                        self._fill(srcs, sig_goal, False, blockers_here)
                    else:
                        raise
            q = self._charge()
        left = [p for p in sig_goal if p not in self.occ]
        if left:
            raise PlanningError(f"sink {sigma} has unfilled targets {left}")

    def solve(self) -> list[Move]:
        ca = self.ca
        H = ca.H
        H_edges = list(H.edges)
        edges = [(z, w) for (z, w, _, _) in H_edges]
        all_nodes = set(range(len(ca.residual)))
        work = [all_nodes]
        while work:
            nodes = work.pop(0)
            q = self._charge()
            parts = cut_zero_charge_edges(nodes, edges, q)
            if len(parts) > 1:
                work = parts + work
                continue
            if len(nodes) == 1:
                (sigma,) = nodes
            else:
                sigma = find_sink(nodes, edges, q)
            self.solve_sink(sigma, nodes, edges, H_edges)
            rest = nodes - {sigma}
            if rest:
                work = _tree_parts(rest, edges, set()) + work
        self._settle()
        return self.moves

    # ---------------------------------------------------------- settlement
    def _settle(self):
        ca = self.ca
        ns = len(self.starts)
        for s, j in sorted(self.pairs.items()):
            t = ns + j
            a, b = ca.pts[s], ca.pts[t]
            if s not in self.occ:
                raise PlanningError(f"merged start {s} not occupied before settlement")
            others = [ca.pts[p] for p in self.occ if p != s] + [ca.pts[p] for p in ca.parked_ids]
            if dist(a, b) <= 1e-12:  # robot already on its target
                self.occ.discard(s)
                self.occ.add(t)
                continue
            seg = [Segment(a, b)]
            if self._segment_free(seg[0]) and all(path_clearance(seg, p) >= AURA - 1e-9 for p in others):
                path = seg
            else:
                pf = self.G.pf
                forbidden = (set(self.occ) - {s}) | set(ca.parked_ids)
                allowed = frozenset(p for p in range(len(ca.pts)) if p not in forbidden)
                try:
                    pieces = pf.vertex_to_vertex(ca.pos_vertex[s], ca.pos_vertex[t], allowed, frozenset())
                except NoPath as exc:
                    raise PlanningError(f"no settlement path for start {s}") from exc
                path = pf.geometry(pieces)
            self.moves.append(Move(a, b, tuple(path)))
            self.occ.discard(s)
            self.occ.add(t)

    def _segment_free(self, seg: Segment) -> bool:
        return segment_in_region(seg, self.ca.region)


def segment_in_region(seg: Segment, region) -> bool:
    """True when the closed segment lies in the closed region."""
    us = {0.0, 1.0}
    for e in region.elements:
        for u, _, _ in intersect(seg, e):
            us.add(min(1.0, max(0.0, u)))
    us = sorted(us)
    for u0, u1 in zip(us, us[1:]):
        if u1 - u0 < 1e-12:
            continue
        if point_in_region(seg.point_at(0.5 * (u0 + u1)), region) == "outside":
            return False
    return True


def solve_component(region, starts, targets, parked=()) -> MotionPlan:
    """Plan for one component. Raises ValueError on precondition violations."""
    v = validate_single_component(starts, targets)
    if v:
        raise ValueError("; ".join(x.message for x in v))
    planner = ComponentPlanner(region, starts, targets, parked)
    return MotionPlan(planner.solve())
