"""Constrained shortest paths on the cell complex of a component.

An arrangement edge is usable when it lies in the free space and every aura
containing it (both sides) belongs to the ``allowed`` position set, after
dropping ``ignore``. Paths are lists of half-edge pieces ``(h, t0, t1)``.
"""
from __future__ import annotations

import heapq
import math

from .geom.primitives import Point, Segment, dist


class NoPath(Exception):
    pass


class PathFinder:
    def __init__(self, ca):
        self.ca = ca
        arr = ca.arr
        self.arr = arr
        adj: list[list[tuple[int, int]]] = [[] for _ in arr.V]
        for e in range(arr.n_edges):
            if not ca.e_inF[e]:
                continue
            adj[arr.e_v0[e]].append((arr.e_v1[e], 2 * e))
            adj[arr.e_v1[e]].append((arr.e_v0[e], 2 * e + 1))
        for a in adj:
            a.sort(key=lambda x: x[1])
        self.adj = adj
        self._trees: dict = {}

    def usable(self, e: int, allowed: frozenset, ignore: frozenset) -> bool:
        if not self.ca.e_inF[e]:
            return False
        lab = self.ca.e_label[e]
        if not lab:
            return True
        return (lab - ignore) <= allowed

    def _run(self, seeds: list[tuple[float, int, tuple]], allowed, ignore, stop=None):
        """Dijkstra from weighted seeds ``(cost, vertex, prefix_pieces)``."""
        arr = self.arr
        elen = arr.e_len
        dist_: dict[int, float] = {}
        parent: dict[int, tuple] = {}
        heap = []
        for c, v, pre in seeds:
            heapq.heappush(heap, (c, v, -1, pre))
        ok_cache: dict[int, bool] = {}
        while heap:
            c, v, h, pre = heapq.heappop(heap)
            if v in dist_:
                continue
            dist_[v] = c
            parent[v] = (h, pre)
            if stop is not None and stop(v):
                break
            for w, hh in self.adj[v]:
                if w in dist_:
                    continue
                e = hh >> 1
                ok = ok_cache.get(e)
                if ok is None:
                    ok = self.usable(e, allowed, ignore)
                    ok_cache[e] = ok
                if ok:
                    heapq.heappush(heap, (c + elen[e], w, hh, None))
        return dist_, parent

    def _unwind(self, parent, v) -> list:
        pieces = []
        while True:
            h, pre = parent[v]
            if h < 0:
                pieces.extend(reversed(pre))
                break
            pieces.append((h, 0.0, 1.0))
            v = self.arr.origin(h)
        pieces.reverse()
        return pieces

    def tree(self, v: int, allowed: frozenset, ignore: frozenset):
        key = (v, allowed, ignore)
        t = self._trees.get(key)
        if t is None:
            t = self._run([(0.0, v, ())], allowed, ignore)
            self._trees[key] = t
        return t

    # ---------------------------------------------------------- queries
    def vertex_to_vertex(self, a: int, b: int, allowed, ignore) -> list:
        if a == b:
            return []
        d, par = self.tree(a, allowed, ignore)
        if b not in d:
            raise NoPath
        return self._unwind(par, b)

    def _edge_targets(self, h: int, t: float, allowed, ignore):
        """Ways to finish at point (h, t): (vertex, extra cost, final piece)."""
        e = h >> 1
        if not self.usable(e, allowed, ignore):
            return []
        L = self.arr.e_len[e]
        return [(self.arr.origin(h), t * L, (h, 0.0, t)),
                (self.arr.dest(h), (1.0 - t) * L, (h ^ 1, 0.0, 1.0 - t))]

    def vertex_to_point(self, a: int, h: int, t: float, allowed, ignore) -> list:
        """Path from vertex ``a`` to the point at parameter ``t`` of half-edge ``h``."""
        if t <= 0.0 and self.arr.origin(h) == a:
            return []
        if t >= 1.0 and self.arr.dest(h) == a:
            return []
        d, par = self.tree(a, allowed, ignore)
        best = None
        for v, extra, piece in self._edge_targets(h, t, allowed, ignore):
            if v in d and (best is None or d[v] + extra < best[0] - 1e-12):
                best = (d[v] + extra, v, piece)
        if best is None:
            raise NoPath
        _, v, piece = best
        out = self._unwind(par, v)
        if piece[2] - piece[1] > 0:
            out.append(piece)
        return out

    def point_to_vertex(self, h: int, t: float, b: int, allowed, ignore) -> list:
        return reverse_pieces(self.vertex_to_point(b, h, t, allowed, ignore))

    # ---------------------------------------------------------- geometry
    def geometry(self, pieces) -> list:
        arr = self.arr
        out = []
        for h, t0, t1 in pieces:
            if t1 - t0 <= 0.0:
                continue
            if t0 == 0.0 and t1 == 1.0:
                out.append(arr.hgeom(h))
            else:
                out.append(arr.hpart(h, t0, t1))
        return out

    def pieces_label(self, pieces) -> frozenset:
        lab = frozenset()
        for h, t0, t1 in pieces:
            lab |= self.ca.e_label[h >> 1]
        return lab

    def pieces_in_free(self, pieces) -> bool:
        return all(self.ca.e_inF[h >> 1] for h, _, _ in pieces)


def reverse_pieces(pieces) -> list:
    return [(h ^ 1, 1.0 - t1, 1.0 - t0) for h, t0, t1 in reversed(pieces)]


def reverse_path(path) -> list:
    return [e.reversed() for e in reversed(path)]


def join_paths(*parts) -> list:
    out = []
    for p in parts:
        out.extend(p)
    return [e for e in out if e.length > 1e-12]
