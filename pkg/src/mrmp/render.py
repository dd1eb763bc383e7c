"""Static SVG drawings of instances, free space, auras, blocking areas and plans.

Colours: green starts, purple targets, dashed aura circles, red blocking areas,
grey remote components that block nothing.
"""
from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Circle, PathPatch  # noqa: E402
from matplotlib.path import Path  # noqa: E402

from .freespace import AURA, ComponentAnalysis, compute_free_space  # noqa: E402
from .geom.primitives import sample_chain  # noqa: E402

LAYERS = ("freespace", "auras", "blocking", "motiongraph", "plan")
START_COLOR = "#2e9d3a"
TARGET_COLOR = "#8a3ab9"
BLOCK_COLOR = "#d62728"
STEP = 0.05


def _loop_path(loop):
    pts = sample_chain(list(loop.elements), STEP)
    return pts + [pts[0]]


def region_path(region) -> Path | None:
    verts, codes = [], []
    for loop in region.loops:
        pts = _loop_path(loop)
        verts += pts
        codes += [Path.MOVETO] + [Path.LINETO] * (len(pts) - 2) + [Path.CLOSEPOLY]
    return Path(verts, codes) if verts else None


def _add_region(ax, region, **kw):
    p = region_path(region)
    if p is not None:
        ax.add_patch(PathPatch(p, **kw))


def _line(ax, path, **kw):
    pts = sample_chain(list(path), STEP)
    if pts:
        ax.plot([p[0] for p in pts], [p[1] for p in pts], **kw)


def parse_layers(text: str | None) -> tuple[str, ...]:
    if not text:
        return ()
    out = tuple(s.strip() for s in text.split(",") if s.strip())
    bad = [s for s in out if s not in LAYERS]
    if bad:
        raise ValueError(f"unknown layers {bad}; choose from {', '.join(LAYERS)}")
    return out


def render_svg(inst, plan=None, layers=("freespace",)) -> str:
    """Deterministic SVG text for ``inst`` and, with the plan layer, ``plan``."""
    layers = set(layers)
    with matplotlib.rc_context({"svg.hashsalt": "mrmp", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(8, 8))
        try:
            _draw(ax, inst, plan, layers)
            buf = io.StringIO()
            fig.savefig(buf, format="svg", metadata={"Date": None}, bbox_inches="tight")
        finally:
            plt.close(fig)
    return buf.getvalue()


def _draw(ax, inst, plan, layers):
    W = [(float(x), float(y)) for x, y in inst.workspace]
    ax.add_patch(PathPatch(Path(W + [W[0]], closed=True), facecolor="#f4f4f4",
                           edgecolor="black", linewidth=1.2))
    needs_fs = layers & {"freespace", "blocking", "motiongraph"}
    fs = compute_free_space(W) if needs_fs else None
    if "freespace" in layers:
        shades = ["#cfe3f5", "#f5e6c8", "#d9f0d3", "#f2d4e0"]
        for k, comp in enumerate(fs.components):
            _add_region(ax, comp, facecolor=shades[k % len(shades)], edgecolor="#4a78a8", linewidth=0.6)
    if layers & {"blocking", "motiongraph"}:
        per, _, _ = fs.partition(inst.starts, inst.targets)
        for c, cp in enumerate(per):
            S = [inst.starts[i] for i in cp.starts]
            T = [inst.targets[j] for j in cp.targets]
            if not S and not T:
                continue
            ca = ComponentAnalysis(fs.components[c], S, T)
            if "blocking" in layers:
                for r in ca.remotes:
                    color = BLOCK_COLOR if r.is_blocking else "#9a9a9a"
                    _add_region(ax, ca.remote_region(r), facecolor=color, alpha=0.55, edgecolor=color,
                                linewidth=0.5)
            if "motiongraph" in layers and len(S) == len(T):
                from .planner import ComponentPlanner
                for e in ComponentPlanner(fs.components[c], S, T).G.edges:
                    style = "-" if e.kind == "guaranteed" else "--"
                    _line(ax, e.path, color="#555555", linestyle=style, linewidth=0.8)
    if "auras" in layers:
        for p in list(inst.starts) + list(inst.targets):
            ax.add_patch(Circle(p, AURA, fill=False, linestyle="--", linewidth=0.6, edgecolor="#444444"))
    if "plan" in layers and plan is not None:
        for k, mv in enumerate(plan.moves):
            _line(ax, mv.path, color="#1f5fbf", linewidth=1.0)
            pts = sample_chain(list(mv.path), STEP) or [mv.start]
            mid = pts[len(pts) // 2]
            ax.annotate(str(k + 1), mid, fontsize=7, color="#1f5fbf")
    for pts, color in ((inst.starts, START_COLOR), (inst.targets, TARGET_COLOR)):
        for p in pts:
            ax.add_patch(Circle(p, 1.0, facecolor=color, alpha=0.45, edgecolor=color))
    ax.set_aspect("equal")
    ax.autoscale_view()
    ax.axis("off")
