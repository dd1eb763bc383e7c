"""Command-line front end.

Exit codes: 0 ok, 1 input/output error, 2 domain violation, 3 internal failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from .instances import FIGURES, GenerationFailed, ParseError, gen_figure, gen_random, load, serialize
from .multiplan import PreconditionViolation, solve_all
from .planfile import parse_plan, serialize_plan
from .verifier import check_instance, check_plan

EXIT_OK, EXIT_IO, EXIT_DOMAIN, EXIT_BUG = 0, 1, 2, 3


class _IOFailure(Exception):
    pass


def _load_instance(path):
    try:
        return load(path)
    except (OSError, UnicodeDecodeError) as exc:
        raise _IOFailure(f"cannot read {path}: {exc}") from exc
    except ParseError as exc:
        raise _IOFailure(f"{path}: {exc}") from exc


def _load_plan(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_plan(fh.read())
    except (OSError, UnicodeDecodeError) as exc:
        raise _IOFailure(f"cannot read {path}: {exc}") from exc
    except ParseError as exc:
        raise _IOFailure(f"{path}: {exc}") from exc


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IOFailure(f"cannot write {out}: {exc}") from exc


def _report(violations) -> str:
    return json.dumps({"violations": [v.to_json() for v in violations]}, indent=2) + "\n"


# -------------------------------------------------------------- commands
def cmd_plan(args) -> int:
    inst = _load_instance(args.instance)
    t0 = time.perf_counter()
    try:
        plan = solve_all(inst)
    except PreconditionViolation as exc:
        sys.stdout.write(_report(exc.violations))
        return EXIT_DOMAIN
    millis = (time.perf_counter() - t0) * 1000.0 if args.timing else None
    bad = check_plan(inst, plan)
    if bad:
        sys.stderr.write("plan failed its own check\n" + _report(bad))
        return EXIT_BUG
    _write(serialize_plan(plan, inst=inst, millis=millis), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _load_instance(args.instance)
    plan, _ = _load_plan(args.plan)
    bad = check_plan(inst, plan)
    sys.stdout.write(_report(bad))
    return EXIT_DOMAIN if bad else EXIT_OK


def cmd_check(args) -> int:
    inst = _load_instance(args.instance)
    bad = check_instance(inst)
    _write(_report(bad), args.out)
    return EXIT_DOMAIN if bad else EXIT_OK


def cmd_gen(args) -> int:
    if args.fig is not None:
        try:
            inst = gen_figure(args.fig, args.epsilon)
        except ValueError as exc:
            sys.stderr.write(f"{exc}\n")
            return EXIT_DOMAIN
    else:
        try:
            inst = gen_random(args.seed, n=args.n, m=args.m, multi=args.multi)
        except (GenerationFailed, ValueError) as exc:
            sys.stderr.write(f"{exc}\n")
            return EXIT_DOMAIN
    _write(serialize(inst), args.out)
    return EXIT_OK


def cmd_render(args) -> int:
    from .render import parse_layers, render_svg
    inst = _load_instance(args.instance)
    plan = _load_plan(args.plan)[0] if args.plan else None
    try:
        layers = parse_layers(args.layers)
    except ValueError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_DOMAIN
    if plan is not None and "plan" not in layers:
        layers += ("plan",)
    _write(render_svg(inst, plan, layers), args.out)
    return EXIT_OK


# ------------------------------------------------------------------ main
def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mrmp", description="Unlabeled motion planning for unit discs in a polygon.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("plan", help="plan an instance and write a plan file")
    sp.add_argument("instance")
    sp.add_argument("--out", help="plan file (default: stdout)")
    sp.add_argument("--timing", action="store_true", help="record planningMillis")
    sp.set_defaults(func=cmd_plan)

    sp = sub.add_parser("verify", help="check a plan against its instance")
    sp.add_argument("instance")
    sp.add_argument("plan")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("check", help="report precondition violations of an instance")
    sp.add_argument("instance")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("gen", help="generate a random instance or a figure fixture")
    sp.add_argument("--fig", choices=FIGURES)
    sp.add_argument("--epsilon", type=float, default=0.1)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--n", type=int, default=20, help="target vertex count")
    sp.add_argument("--m", type=int, default=4, help="robot count")
    sp.add_argument("--multi", action="store_true", help="several free-space components")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("render", help="draw an instance and optionally a plan as SVG")
    sp.add_argument("instance")
    sp.add_argument("--plan")
    sp.add_argument("--layers", default="freespace",
                    help="comma list of freespace,auras,blocking,motiongraph,plan")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except _IOFailure as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_IO
    except Exception as exc:  # any other failure is a bug in the planner
        logging.getLogger(__name__).exception("internal failure")
        sys.stderr.write(f"internal error: {exc}\n")
        return EXIT_BUG


if __name__ == "__main__":
    sys.exit(main())
