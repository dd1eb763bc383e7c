"""Seeded instance suites shared by the acceptance and integration tests."""
from __future__ import annotations

import functools
import time
from dataclasses import dataclass, field

from mrmp.freespace import compute_free_space
from mrmp.geom.region import path_clearance
from mrmp.instances import gen_random
from mrmp.multiplan import interference_sets, solve_all
from mrmp.planner import ComponentPlanner

STRUCT_TOL = 1e-6
ACCEPTANCE: dict[int, tuple[bool, str]] = {}  # criterion -> (passed, detail)


def random_specs(count: int = 200) -> list[dict]:
    """Single-component (beta from 0, some blocking gadgets) alternating with multi-component."""
    out = []
    for k in range(count):
        seed = 1000 + k
        if k % 2 == 0:
            out.append(dict(seed=seed, n=20 + 10 * (k % 5), m=3 + k % 6,
                            gadget_p=0.3 if k % 4 == 0 else 0.0, close_pairs=1 if k % 8 == 2 else 0))
        else:
            m = 4 + k % 9
            out.append(dict(seed=seed, n=min(60, 24 + 3 * m + 4 * (k % 3)), m=m, multi=True))
    return out


def beta0_specs(count: int = 50) -> list[dict]:
    return [dict(seed=5000 + k, n=20 + 8 * (k % 4), m=2 + k % 5, close_pairs=1 + k % 2) for k in range(count)]


@dataclass
class Structure:
    h_tree: bool = True
    g_connected: bool = True
    min_guaranteed_clearance: float = float("inf")
    simply_connected: bool = True
    forest_edges: set = field(default_factory=set)
    both_kinds: list = field(default_factory=list)  # component pairs with start and target blockers


def structure(inst) -> Structure:
    """Structural invariants of every component of ``inst``."""
    st = Structure()
    fs = compute_free_space(inst.workspace)
    for comp in fs.components:
        if len(comp.faces) != 1 or comp.faces[0].holes:
            st.simply_connected = False
    per, cs, ct = fs.partition(inst.starts, inst.targets)
    for c, cp in enumerate(per):
        S = [inst.starts[i] for i in cp.starts]
        T = [inst.targets[j] for j in cp.targets]
        if not S:
            continue
        P = ComponentPlanner(fs.components[c], S, T)
        st.h_tree &= P.ca.H.is_tree()
        st.g_connected &= P.G.is_connected()
        ns = len(S)
        partner = {s: ns + t for s, t in P.pairs.items()}
        for e in P.G.edges:
            if e.kind != "guaranteed":
                continue
            skip = {e.u, e.v} | {partner[x] for x in (e.u, e.v) if x in partner}
            for pid in P.ca.structural:
                if pid not in skip:
                    st.min_guaranteed_clearance = min(st.min_guaranteed_clearance,
                                                      path_clearance(e.path, P.ca.pts[pid]))
    if len(fs.components) > 1:
        recs = interference_sets(fs, inst.starts, inst.targets)
        kinds: dict = {}
        for r in recs:
            if r.is_remote_blocker:
                kinds.setdefault(frozenset((r.source_component, r.target_component)), set()).add(r.source[0])
                if r.source[0] == "start":
                    st.forest_edges.add((r.source_component, r.target_component))
                else:
                    st.forest_edges.add((r.target_component, r.source_component))
        st.both_kinds = [tuple(sorted(k)) for k, v in kinds.items() if v == {"start", "target"}]
    return st


@dataclass
class Outcome:
    spec: dict
    inst: object
    plan: object = None
    error: str | None = None
    seconds: float = 0.0


def run(spec: dict) -> Outcome:
    inst = gen_random(**spec)
    t0 = time.perf_counter()
    try:
        plan = solve_all(inst)
    except Exception as exc:  # reported by the caller
        return Outcome(spec, inst, None, repr(exc), time.perf_counter() - t0)
    return Outcome(spec, inst, plan, None, time.perf_counter() - t0)


@functools.lru_cache(maxsize=None)
def random_outcomes() -> tuple[Outcome, ...]:
    return tuple(run(s) for s in random_specs())


@functools.lru_cache(maxsize=None)
def beta0_outcomes() -> tuple[Outcome, ...]:
    return tuple(run(s) for s in beta0_specs())
