"""Plan files: moves with exact segment and arc records, plus summary stats."""
from __future__ import annotations

import json

from .geom.primitives import Arc, Point, Segment
from .instances import ParseError, _num, dumps_compact, from_dict, to_dict
from .planner import MotionPlan, Move

PLAN_VERSION = 1


def _pair(p) -> list[float]:
    return [float(p[0]), float(p[1])]


def element_to_dict(e) -> dict:
    if isinstance(e, Segment):
        return {"type": "segment", "from": _pair(e.a), "to": _pair(e.b)}
    return {"type": "arc", "center": _pair(e.center), "radius": float(e.radius),
            "startAngle": float(e.start), "sweep": float(e.sweep)}


def plan_to_dict(plan: MotionPlan, inst=None, instance_ref: str | None = None,
                 millis: float | None = None) -> dict:
    d: dict = {"version": PLAN_VERSION}
    if inst is not None:
        d["instance"] = to_dict(inst)
    elif instance_ref is not None:
        d["instance"] = instance_ref
    d["moves"] = [{"from": _pair(m.start), "to": _pair(m.end),
                   "path": [element_to_dict(e) for e in m.path]} for m in plan.moves]
    d["stats"] = {"moveCount": len(plan.moves), "totalPathLength": float(plan.total_length),
                  "planningMillis": millis}
    if plan.order:
        d["componentOrder"] = [int(c) for c in plan.order]
    return d


def serialize_plan(plan: MotionPlan, **kw) -> str:
    return dumps_compact(plan_to_dict(plan, **kw)) + "\n"


def _point(v, path: str) -> Point:
    if not isinstance(v, list) or len(v) != 2:
        raise ParseError(path, "expected an [x, y] pair")
    return Point(_num(v[0], f"{path}[0]"), _num(v[1], f"{path}[1]"))


def _element(d, path: str):
    if not isinstance(d, dict):
        raise ParseError(path, "expected an object")
    kind = d.get("type")
    if kind == "segment":
        return Segment(_point(d.get("from"), f"{path}.from"), _point(d.get("to"), f"{path}.to"))
    if kind == "arc":
        return Arc(_point(d.get("center"), f"{path}.center"), _num(d.get("radius"), f"{path}.radius"),
                   _num(d.get("startAngle"), f"{path}.startAngle"), _num(d.get("sweep"), f"{path}.sweep"))
    raise ParseError(f"{path}.type", f"unknown element type {kind!r}")


def plan_from_dict(d) -> tuple[MotionPlan, object]:
    """Plan plus the inline instance (an Instance), a reference string, or None."""
    if not isinstance(d, dict):
        raise ParseError("", "top level must be an object")
    if d.get("version") != PLAN_VERSION:
        raise ParseError("version", f"unsupported version {d.get('version')!r}")
    if not isinstance(d.get("moves"), list):
        raise ParseError("moves", "expected a list")
    moves = []
    for i, m in enumerate(d["moves"]):
        p = f"moves[{i}]"
        if not isinstance(m, dict):
            raise ParseError(p, "expected an object")
        if not isinstance(m.get("path"), list):
            raise ParseError(f"{p}.path", "expected a list")
        path = tuple(_element(e, f"{p}.path[{k}]") for k, e in enumerate(m["path"]))
        moves.append(Move(_point(m.get("from"), f"{p}.from"), _point(m.get("to"), f"{p}.to"), path))
    ref = d.get("instance")
    if isinstance(ref, dict):
        ref = from_dict(ref)
    return MotionPlan(moves, list(d.get("componentOrder", []))), ref


def parse_plan(text: str) -> tuple[MotionPlan, object]:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}", exc.msg) from exc
    return plan_from_dict(d)
