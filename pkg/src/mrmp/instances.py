"""Instance files, a seeded random generator and figure fixtures."""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .geom.primitives import Point, dist

FORMAT_VERSION = 1
EXTENSION = ".mrmp.json"


class ParseError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
        self.message = message


class GenerationFailed(RuntimeError):
    pass


@dataclass
class Instance:
    workspace: list
    starts: list
    targets: list
    name: str | None = None
    expected: str | None = None  # "solvable" or "preconditionViolation"
    extra: dict = field(default_factory=dict)

    @property
    def m(self) -> int:
        return len(self.starts)


# ------------------------------------------------------------------- I/O
def _num(v, path: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(path, "expected a number")
    x = float(v)
    if not math.isfinite(x):
        raise ParseError(path, "expected a finite number")
    return x


def _points(v, path: str) -> list[Point]:
    if not isinstance(v, list):
        raise ParseError(path, "expected a list of [x, y] pairs")
    out = []
    for i, p in enumerate(v):
        if not isinstance(p, list) or len(p) != 2:
            raise ParseError(f"{path}[{i}]", "expected an [x, y] pair")
        out.append(Point(_num(p[0], f"{path}[{i}][0]"), _num(p[1], f"{path}[{i}][1]")))
    return out


def from_dict(d) -> Instance:
    if not isinstance(d, dict):
        raise ParseError("", "top level must be an object")
    for key in ("version", "workspace", "starts", "targets"):
        if key not in d:
            raise ParseError(key, "missing field")
    if d["version"] != FORMAT_VERSION:
        raise ParseError("version", f"unsupported version {d['version']!r}")
    ws = _points(d["workspace"], "workspace")
    if len(ws) < 3:
        raise ParseError("workspace", f"needs at least 3 vertices, got {len(ws)}")
    starts = _points(d["starts"], "starts")
    targets = _points(d["targets"], "targets")
    meta = d.get("metadata", {})
    if not isinstance(meta, dict):
        raise ParseError("metadata", "expected an object")
    name = meta.get("name")
    expected = meta.get("expected")
    if expected not in (None, "solvable", "preconditionViolation"):
        raise ParseError("metadata.expected", f"unknown value {expected!r}")
    extra = {k: v for k, v in meta.items() if k not in ("name", "expected")}
    return Instance(ws, starts, targets, name, expected, extra)


def parse(text: str) -> Instance:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}", exc.msg) from exc
    return from_dict(d)


def to_dict(inst: Instance) -> dict:
    d = {
        "version": FORMAT_VERSION,
        "workspace": [[float(x), float(y)] for x, y in inst.workspace],
        "starts": [[float(x), float(y)] for x, y in inst.starts],
        "targets": [[float(x), float(y)] for x, y in inst.targets],
    }
    meta = {}
    if inst.name is not None:
        meta["name"] = inst.name
    if inst.expected is not None:
        meta["expected"] = inst.expected
    meta.update(inst.extra)
    if meta:
        d["metadata"] = meta
    return d


def dumps_compact(d, indent: int = 0) -> str:
    """JSON with one [x, y] pair per line; floats use the shortest round-trip repr."""
    pad = " " * indent
    if isinstance(d, dict):
        if not d:
            return "{}"
        items = [f'{pad}  {json.dumps(k)}: {dumps_compact(v, indent + 2)}' for k, v in d.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(d, list) and d and all(isinstance(x, (list, dict)) for x in d):
        items = [pad + "  " + dumps_compact(x, indent + 2) for x in d]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(d)


def serialize(inst: Instance) -> str:
    return dumps_compact(to_dict(inst)) + "\n"


def load(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def save(inst: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(inst))


# -------------------------------------------------------------- generator
# blocking gadget, relative to the spike tip: thin spike, a corridor of free
# width GADGET_WP right of it, a ceiling GADGET_CEIL above the tip, and a
# start/target pair whose remote component spans the corridor
GADGET_TH = 0.02
GADGET_WP = 0.2
GADGET_CEIL = 3.4
GADGET_S = (0.5, 2.3)
GADGET_T = (-GADGET_TH / 2 + 1.02 * math.cos(math.radians(135)), 1.02 * math.sin(math.radians(135)))


def _comb_polygon(rng, n_target: int, multi: bool, gadget_p: float = 0.0):
    """Comb-shaped simple polygon: a base corridor with teeth above and below.

    Returns the vertices and the (start, target) pairs of blocking gadgets.
    """
    hb = float(rng.uniform(2.6, 5.0))
    budget = max(0, (n_target - 4) // 4)
    teeth = []
    spikes = []
    pairs = []
    x = float(rng.uniform(0.5, 2.0))
    for _ in range(budget):
        used = sum(t["cost"] for t in teeth)
        if gadget_p and rng.random() < gadget_p and used + 8 <= n_target - 4:
            wl = float(rng.uniform(2.3, 4.0))
            xs = x + wl
            hs = hb + float(rng.uniform(1.0, 3.0))
            x1 = xs + GADGET_TH / 2 + 2 + GADGET_WP
            teeth.append({"x0": x, "x1": x1, "h": hs + GADGET_CEIL - hb, "up": True, "neck": False,
                          "cost": 8, "slant": 0.0, "lean": 0.0, "slit": None})
            spikes.append((xs, hs))
            pairs.append((Point(round(xs + GADGET_S[0], 6), round(hs + GADGET_S[1], 6)),
                          Point(round(xs + GADGET_T[0], 6), round(hs + GADGET_T[1], 6))))
            x = x1 + float(rng.uniform(0.4, 2.5))
            continue
        neck = multi and rng.random() < 0.5
        cost = 8 if neck else 4
        if sum(t["cost"] for t in teeth) + cost > n_target - 4:
            if neck:
                neck = False
                cost = 4
            if sum(t["cost"] for t in teeth) + cost > n_target - 4:
                break
        w = float(rng.uniform(2.3, 6.0))
        h = float(rng.uniform(2.5, 8.0))
        up = bool(rng.random() < 0.6)
        tooth = {"x0": x, "x1": x + w, "h": h, "up": up, "neck": neck, "cost": cost,
                 "slant": float(rng.uniform(-0.6, 0.6)), "lean": float(rng.uniform(-0.4, 0.4)),
                 "slit": None}
        used = sum(t["cost"] for t in teeth) + cost
        if rng.random() < 0.5 and used + 4 <= n_target - 4:
            # thin wall hanging from the tooth top: a hairpin corridor
            w = float(rng.uniform(4.3, 6.5))
            tooth["x1"] = x + w
            h = max(h, 4.0)
            tooth["h"] = h
            tooth["slit"] = (float(rng.uniform(0.4, 0.6)), float(rng.uniform(0.45, 0.85)) * h,
                             float(rng.uniform(0.02, 0.3)))
            tooth["cost"] += 4
        if neck:
            nw = float(rng.uniform(1.3, 1.9))
            c = x + w / 2 + float(rng.uniform(-(w - nw) / 2, (w - nw) / 2)) * 0.5
            tooth["n0"], tooth["n1"] = c - nw / 2, c + nw / 2
            tooth["nl"] = float(rng.uniform(0.3, 1.2))
        teeth.append(tooth)
        x += w + float(rng.uniform(0.4, 2.5))
    L = x + float(rng.uniform(0.5, 2.0))
    if multi and not any(t["neck"] for t in teeth) and teeth:
        t = teeth[int(rng.integers(len(teeth)))]
        w = t["x1"] - t["x0"]
        nw = 1.6
        t["neck"], t["n0"], t["n1"], t["nl"] = True, t["x0"] + (w - nw) / 2, t["x0"] + (w + nw) / 2, 0.6

    def tooth_path(t, base_y, sgn):
        # vertices of a tooth listed from its x1 side to its x0 side
        out = []
        y = base_y
        if t["neck"]:
            out += [(t["n1"], y), (t["n1"], y + sgn * t["nl"])]
            y += sgn * t["nl"]
        ytop = y + sgn * t["h"]
        tr = (t["x1"] + t["lean"], ytop + sgn * t["slant"])
        tl = (t["x0"] + t["lean"], ytop - sgn * t["slant"])
        out += [(t["x1"], y), tr]
        if t["slit"] is not None:
            f, depth, thick = t["slit"]
            half = 0.5 * thick / (tr[0] - tl[0])
            pr = (tr[0] + (tl[0] - tr[0]) * (f - half), tr[1] + (tl[1] - tr[1]) * (f - half))
            pl = (tr[0] + (tl[0] - tr[0]) * (f + half), tr[1] + (tl[1] - tr[1]) * (f + half))
            yb = min(pr[1], pl[1]) - depth if sgn > 0 else max(pr[1], pl[1]) + depth
            out += [pr, (pr[0], yb), (pl[0], yb), pl]
        out += [tl, (t["x0"], y)]
        if t["neck"]:
            out += [(t["n0"], y), (t["n0"], base_y)]
        return out

    # ccw: bottom edge left to right, right wall, top edge right to left
    poly = [(0.0, 0.0)]
    bottom = [(t["x0"], list(reversed(tooth_path(t, 0.0, -1)))) for t in teeth if not t["up"]]
    h2 = GADGET_TH / 2
    bottom += [(xs, [(xs - h2, 0.0), (xs - h2, hs), (xs + h2, hs), (xs + h2, 0.0)]) for xs, hs in spikes]
    for _, pts in sorted(bottom, key=lambda b: b[0]):
        poly += pts
    poly += [(L, 0.0), (L, hb)]
    for t in sorted([t for t in teeth if t["up"]], key=lambda t: -t["x0"]):
        poly += tooth_path(t, hb, 1)
    poly += [(0.0, hb)]
    # drop duplicates from neck joins
    clean = []
    for p in poly:
        if not clean or dist(p, clean[-1]) > 1e-9:
            clean.append(p)
    if dist(clean[0], clean[-1]) <= 1e-9:
        clean.pop()
    return [Point(round(x, 6), round(y, 6)) for x, y in clean], pairs


def random_polygon(seed: int, n: int = 20, multi: bool = False) -> list[Point]:
    """Random comb polygon alone (no robots); it may have empty free space."""
    from .freespace import validate_polygon
    poly, _ = _comb_polygon(np.random.default_rng(seed), n, multi)
    return validate_polygon(poly)


def _candidates(poly, fs, rng, k: int = 4000):
    from .freespace import polygon_distance
    from matplotlib.path import Path
    xs = np.array([p.x for p in poly])
    ys = np.array([p.y for p in poly])
    px = rng.uniform(xs.min(), xs.max(), k)
    py = rng.uniform(ys.min(), ys.max(), k)
    # extra candidates hugging reflex vertices, where remote components arise
    n = len(poly)
    hot = []
    for i in range(n):
        a, b, c = poly[i - 1], poly[i], poly[(i + 1) % n]
        cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x)
        if cross < 0:
            hot.append(b)
    if hot:
        kh = k // 2
        hv = np.array(hot)[rng.integers(len(hot), size=kh)]
        r = rng.uniform(1.0, 1.5, kh)
        th = rng.uniform(0, 2 * np.pi, kh)
        px = np.r_[px, hv[:, 0] + r * np.cos(th)]
        py = np.r_[py, hv[:, 1] + r * np.sin(th)]
    inside = Path(np.c_[xs, ys]).contains_points(np.c_[px, py])
    clr = polygon_distance(np.c_[xs, ys], px, py)
    ok = inside & (clr >= 1.0 + 1e-6)
    px, py = px[ok], py[ok]
    comp = np.full(len(px), -1)
    for i, c in enumerate(fs.components):
        sel = c.contains(px, py) & (comp < 0)
        comp[sel] = i
    keep = comp >= 0
    return [Point(round(float(x), 6), round(float(y), 6)) for x, y in zip(px[keep], py[keep])], comp[keep]


def _pick(cands, rng, count, taken_same, taken_other, beta_min, avoid=()):
    order = rng.permutation(len(cands))
    out = []
    for k in order:
        p = cands[k]
        if any(dist(p, q) < 4.0 for q in taken_same + out):
            continue
        if any(dist(p, q) < beta_min for q in taken_other):
            continue
        if any(dist(p, q) < 1e-9 for q in avoid):
            continue
        out.append(p)
        if len(out) == count:
            break
    return out


def gen_random(seed: int, n: int = 20, m: int = 4, multi: bool = False, close_pairs: int = 0,
               beta_min: float | None = None, tight: float = 0.5, gadget_p: float = 0.0,
               max_tries: int = 200) -> Instance:
    """Deterministic random instance on a comb-shaped polygon.

    ``close_pairs`` targets are placed within distance 2 of a start (single
    component only). A fraction ``tight`` of the remaining targets is drawn
    close to their start, just outside its aura. ``beta_min`` defaults to 3 for multi-component instances
    and 0 otherwise. Each tooth becomes a blocking gadget with probability
    ``gadget_p`` (single component only); its start/target pair is placed first.
    """
    from .freespace import EmptyFreeSpace, MalformedPolygon, compute_free_space, validate_polygon
    if n < 4 or m < 1:
        raise ValueError("need n >= 4 and m >= 1")
    rng = np.random.default_rng(seed)
    fails: Counter = Counter()
    if beta_min is None:
        beta_min = 3.0 if multi else 0.0
    for _ in range(max_tries):
        poly, gadgets = _comb_polygon(rng, n, multi, 0.0 if multi else gadget_p)
        try:
            poly = validate_polygon(poly)
            fs = compute_free_space(poly)
        except (MalformedPolygon, EmptyFreeSpace):
            fails["polygon"] += 1
            continue
        nc = len(fs.components)
        if multi and nc < 2:
            fails["components"] += 1
            continue
        if not multi and nc != 1:
            fails["components"] += 1
            continue
        cands, comp = _candidates(poly, fs, rng)
        # robots per component, round robin over components with room
        counts = [0] * nc
        order = list(rng.permutation(nc))
        starts: list = []
        targets: list = []
        ok = True
        per_comp = {i: [c for c, k in zip(cands, comp) if k == i] for i in range(nc)}
        placed = 0
        stalled = 0
        for s0, t0 in gadgets:
            if placed >= m:
                break
            if any(dist(s0, q) < 4.0 for q in starts) or any(dist(t0, q) < 4.0 for q in targets):
                continue
            starts.append(s0)
            targets.append(t0)
            counts[0] += 1
            placed += 1
        while placed < m and stalled < nc:
            i = int(order[placed % nc] if stalled == 0 else order[(placed + stalled) % nc])
            s = _pick(per_comp[i], rng, 1, starts, targets, beta_min)
            if not s:
                stalled += 1
                continue
            near = []
            lo = beta_min
            if close_pairs and placed < close_pairs:
                near = [c for c in per_comp[i] if 0.05 < dist(c, s[0]) < 1.9]
                lo = 0.0
            elif rng.random() < tight:
                # overlapping auras are what create remote components
                lo = max(2.0, beta_min)
                near = [c for c in per_comp[i] if lo <= dist(c, s[0]) < lo + 1.5]
            t = _pick(near, rng, 1, targets, starts + s, lo, avoid=s) if near else []
            if not t:
                t = _pick(per_comp[i], rng, 1, targets, starts + s, beta_min, avoid=s)
            if not t:
                stalled += 1
                continue
            starts += s
            targets += t
            counts[i] += 1
            placed += 1
            stalled = 0
        if placed < m:
            fails["positions"] += 1
            ok = False
        if multi and sum(1 for c in counts if c) < 2:
            fails["components"] += 1
            ok = False
        if not ok:
            continue
        tgt_order = rng.permutation(len(targets))
        targets = [targets[k] for k in tgt_order]
        inst = Instance(list(poly), starts, targets,
                        name=f"random-{seed}-n{n}-m{m}{'-multi' if multi else ''}", expected="solvable")
        from .verifier import check_instance
        v = check_instance(inst)
        if v:
            fails[v[0].kind] += 1
            continue
        return inst
    worst = fails.most_common(1)[0][0] if fails else "unknown"
    raise GenerationFailed(f"no instance after {max_tries} tries; most frequent failure: {worst}")


# ----------------------------------------------------------------- figures
FIGURES = ("fig2i", "fig2ii", "fig3ii", "fig6", "fig8", "fig9")


def gen_figure(which: str, epsilon: float = 0.1) -> Instance:
    from . import figures
    if which not in FIGURES:
        raise ValueError(f"unknown figure {which!r}; choose from {', '.join(FIGURES)}")
    if not (0 < epsilon <= 0.5):
        raise ValueError("epsilon must lie in (0, 0.5]")
    return getattr(figures, which)(epsilon)
