"""Command line surface: validate, extremal, enumerate, lo2, commcheck,
decompose, generate.

Exit codes: 0 for success / a positive verdict, 1 for a negative domain
verdict, 2 for unreadable or malformed input.  All output is deterministic
given the inputs and flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .core import (
    Behavior,
    Scenario,
    behavior_from_json,
    behavior_from_text,
    behavior_to_json_obj,
    behavior_to_text,
    format_rational,
    functional_to_json_obj,
    validate,
)
from .boxes import FIXTURES, Eq1Spec, NsddSpec, eq1_box, local_deterministic_boxes, nsdd_box
from .comm import comm_visibility, diagonal_box, min_dit
from .lo import build_exclusivity_graph, find_violating_clique, format_event
from .polytope import decompose_into_vertices, extremality_certificate
from .relabel import classify
from .vertexenum import EnumerationGuardError, GuardLimits, enumerate_vertices

FORMAT_VERSION = 1


def _read_behavior(path: str) -> Behavior:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SystemExit(_fail(f"cannot read {path}: {exc}"))
    try:
        if path.endswith(".json"):
            return behavior_from_json(text)
        return behavior_from_text(text)
    except ValueError as exc:
        raise SystemExit(_fail(f"cannot parse {path}: {exc}"))


def _fail(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return 2


def _write_behavior(b: Behavior, path: str) -> None:
    if path.endswith(".json"):
        Path(path).write_text(json.dumps(behavior_to_json_obj(b)) + "\n", encoding="utf-8")
    else:
        Path(path).write_text(behavior_to_text(b), encoding="utf-8")


def cmd_validate(args: argparse.Namespace) -> int:
    b = _read_behavior(args.path)
    report = validate(b)
    if report.ok:
        print(f"ok: valid behavior in scenario {b.scenario}")
        return 0
    print(f"invalid behavior in scenario {b.scenario}:")
    for v in report.violations:
        print(f"  {v}")
    return 1


def cmd_extremal(args: argparse.Namespace) -> int:
    b = _read_behavior(args.path)
    report = validate(b)
    if not report.ok:
        return _fail(f"behavior is not a valid NS point: {report.violations[0]}")
    cert = extremality_certificate(b)
    print(cert.verdict)
    if not cert.extremal:
        out = args.perturbation_out or (args.path + ".perturbation")
        lines = [" ".join(format_rational(v) for v in cert.perturbation)]
        Path(out).write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"perturbation written to {out}")
        return 1
    return 0


def cmd_enumerate(args: argparse.Namespace) -> int:
    s = Scenario(*args.scenario)
    seeds = [_read_behavior(p) for p in args.seeds or []]
    limits = GuardLimits(max_dimension=args.max_dimension, max_rays=args.max_rays)
    try:
        vertices = enumerate_vertices(s, seeds, limits)
    except EnumerationGuardError as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return 1
    classes = classify(vertices)
    db = {
        "format": FORMAT_VERSION,
        "scenario": [s.X, s.Y, s.A, s.B],
        "vertex_count": len(vertices),
        "vertices": [[format_rational(v) for v in b.table] for b in vertices],
        "classes": [
            {
                "representative": [format_rational(v) for v in c.representative.table],
                "size": c.size,
                "nonlocal": not c.representative.is_deterministic(),
                "full_output": c.representative.is_full_output(),
            }
            for c in classes
        ],
    }
    Path(args.out).write_text(json.dumps(db, indent=1) + "\n", encoding="utf-8")
    nonlocal_classes = sum(1 for c in classes if not c.representative.is_deterministic())
    print(f"scenario {s}: {len(vertices)} vertices, {len(classes)} classes "
          f"({nonlocal_classes} nonlocal)")
    print(f"database written to {args.out}")
    return 0


def cmd_lo2(args: argparse.Namespace) -> int:
    b = _read_behavior(args.path)
    report = validate(b)
    if not report.ok:
        return _fail(f"behavior is not a valid NS point: {report.violations[0]}")
    g = build_exclusivity_graph(b, args.copies, allow_large=args.copies > 2)
    res = find_violating_clique(g)
    print(f"copies={args.copies} events={len(g.events)} "
          f"max_clique_weight={format_rational(res.max_weight)}")
    if res.witness is None:
        print("no violation: every exclusive event set has total weight <= 1")
        return 1
    print(f"violation: clique of size {res.witness.size} with total weight "
          f"{format_rational(res.witness.total_weight)} > 1")
    for e in res.witness.events:
        print(f"  {format_event(e)}  weight {format_rational(e.weight)}")
    if args.json_out:
        obj = {
            "format": FORMAT_VERSION,
            "copies": args.copies,
            "events": [format_event(e) for e in res.witness.events],
            "weights": [format_rational(e.weight) for e in res.witness.events],
            "total_weight": format_rational(res.witness.total_weight),
            "violation": True,
        }
        Path(args.json_out).write_text(json.dumps(obj, indent=1) + "\n", encoding="utf-8")
        print(f"witness written to {args.json_out}")
    return 0


def cmd_commcheck(args: argparse.Namespace) -> int:
    b = _read_behavior(args.path)
    report = validate(b)
    if not report.ok:
        return _fail(f"behavior is not a valid NS point: {report.violations[0]}")
    res = min_dit(b, args.d_max)
    for dm in res.memberships:
        if dm.result.inside:
            print(f"d={dm.d}: inside (visibility 1)")
        else:
            vis = comm_visibility(b, dm.d)
            print(f"d={dm.d}: outside, visibility {format_rational(vis)}")
            if args.functional_out:
                obj = functional_to_json_obj(dm.result.functional, dm.result.bound)
                obj["format"] = FORMAT_VERSION
                obj["d"] = dm.d
                path = f"{args.functional_out}.d{dm.d}.json"
                Path(path).write_text(json.dumps(obj, indent=1) + "\n", encoding="utf-8")
                print(f"  separating functional written to {path}")
    if res.min_d is None:
        print(f"min_dit: exceeds cap {res.cap}")
        return 1
    print(f"min_dit: {res.min_d}")
    return 0


def cmd_decompose(args: argparse.Namespace) -> int:
    b = _read_behavior(args.path)
    report = validate(b)
    if not report.ok:
        return _fail(f"behavior is not a valid NS point: {report.violations[0]}")
    deco = decompose_into_vertices(b)
    obj = {
        "format": FORMAT_VERSION,
        "scenario": [b.scenario.X, b.scenario.Y, b.scenario.A, b.scenario.B],
        "terms": [
            {"weight": format_rational(w), "vertex": behavior_to_json_obj(v)}
            for w, v in deco.terms
        ],
    }
    Path(args.out).write_text(json.dumps(obj, indent=1) + "\n", encoding="utf-8")
    print(f"{len(deco.terms)} extremal terms written to {args.out}")
    return 0


def _parse_offsets(text: str, g: int, h: int) -> tuple[tuple[int, ...], ...]:
    rows = [r for r in text.split(";") if r]
    if len(rows) != g - 1:
        raise ValueError(f"expected {g - 1} offset rows, got {len(rows)}")
    out = []
    for r in rows:
        vals = tuple(int(v) for v in r.split(","))
        if len(vals) != h - 1:
            raise ValueError(f"expected {h - 1} offsets per row, got {len(vals)}")
        out.append(vals)
    return tuple(out)


def _parse_perms(text: str, nx: int, ny: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    rows = [r for r in text.split(";") if r]
    if len(rows) != nx:
        raise ValueError(f"expected {nx} permutation rows, got {len(rows)}")
    out = []
    for r in rows:
        perms = tuple(tuple(int(ch) for ch in token) for token in r.split(","))
        if len(perms) != ny:
            raise ValueError(f"expected {ny} permutations per row, got {len(perms)}")
        out.append(perms)
    return tuple(out)


def cmd_generate(args: argparse.Namespace) -> int:
    kind = args.kind
    try:
        if kind in FIXTURES:
            b = FIXTURES[kind]()
        elif kind == "eq1":
            s = Scenario(*args.scenario)
            offsets = _parse_offsets(args.offsets, args.g, args.h)
            b = eq1_box(Eq1Spec(s, args.g, args.h, offsets))
        elif kind == "nsdd":
            s = Scenario(*args.scenario)
            perms = _parse_perms(args.perms, s.X - 1, s.Y - 1)
            from .boxes import _perm_order

            b = nsdd_box(NsddSpec(s, _perm_order(perms[0][0]), perms))
        elif kind == "diagonal":
            b = diagonal_box(args.m)
        elif kind == "uniform":
            from .core import uniform_box

            b = uniform_box(Scenario(*args.scenario))
        else:
            return _fail(f"unknown generator {kind!r}")
    except (ValueError, TypeError) as exc:
        return _fail(str(exc))
    if args.out:
        _write_behavior(b, args.out)
        print(f"behavior written to {args.out}")
    else:
        sys.stdout.write(behavior_to_text(b))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ensbox", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", help="check a behavior file for NS validity")
    sp.add_argument("path")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("extremal", help="certify extremality of a behavior")
    sp.add_argument("path")
    sp.add_argument("--perturbation-out", default=None)
    sp.set_defaults(func=cmd_extremal)

    sp = sub.add_parser("enumerate", help="enumerate all NS vertices of a scenario")
    sp.add_argument("--scenario", nargs=4, type=int, required=True, metavar=("X", "Y", "A", "B"))
    sp.add_argument("--seeds", nargs="*", default=None, help="behavior files used as seeds")
    sp.add_argument("--out", required=True)
    sp.add_argument("--max-rays", type=int, default=GuardLimits.max_rays)
    sp.add_argument("--max-dimension", type=int, default=GuardLimits.max_dimension)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("lo2", help="search for an orthogonality-violating clique")
    sp.add_argument("path")
    sp.add_argument("--copies", type=int, default=2)
    sp.add_argument("--json-out", default=None)
    sp.set_defaults(func=cmd_lo2)

    sp = sub.add_parser("commcheck", help="minimal message size needed to simulate a behavior")
    sp.add_argument("path")
    sp.add_argument("--d-max", type=int, default=5)
    sp.add_argument("--functional-out", default=None)
    sp.set_defaults(func=cmd_commcheck)

    sp = sub.add_parser("decompose", help="decompose a behavior into extremal boxes")
    sp.add_argument("path")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("generate", help="emit a named or parametric behavior")
    sp.add_argument("kind", help=f"one of {sorted(FIXTURES)} or eq1|nsdd|diagonal|uniform")
    sp.add_argument("--scenario", nargs=4, type=int, default=None, metavar=("X", "Y", "A", "B"))
    sp.add_argument("--g", type=int, default=None)
    sp.add_argument("--h", type=int, default=None)
    sp.add_argument("--offsets", default="", help="semicolon-separated rows of comma-separated shifts")
    sp.add_argument("--perms", default="", help="rows like 120,012;201,102 (one digit string per block)")
    sp.add_argument("--m", type=int, default=None, help="inputs per side for the diagonal family")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_generate)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2


if __name__ == "__main__":
    sys.exit(main())
