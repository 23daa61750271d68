"""Command-line interface: `heartfan compute|query|verify|render`."""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from .category import load_dataset, semistable
from .cones import RatCone
from .errors import HeartfanError
from .families import FamilySpec, family_fan
from .fans import check_fan, support_query
from .hearts import (
    distinguished_kernel_pair,
    heart_cofan,
    heart_fan,
    hearts_containing,
    is_complete,
    phase_slice,
    stability_fan,
    stability_space,
    virtual_gfan,
    walls_and_chambers,
)
from .io import cofan_document, fan_document, parse, serialize, to_fan
from .render import load_style, render_svg


class UsageError(Exception):
    pass


def parse_vector(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"cannot parse vector {text!r}: {e}") from e


def parse_charge_flag(text: str):
    rows = text.split(";")
    if len(rows) != 2:
        raise UsageError("--charge needs two rows separated by ';'")
    return [parse_vector(r) for r in rows]


def _cone_json(c: RatCone | None):
    if c is None:
        return None
    return {"rays": [list(r) for r in c.rays], "lineality": [list(v) for v in c.lineality]}


def _q(v) -> str:
    return "[" + ",".join(str(a) for a in v) + "]"


def _emit(args, payload) -> None:
    if isinstance(payload, bytes):
        text = payload.decode("ascii")
    elif isinstance(payload, str):
        text = payload
    else:
        text = json.dumps(payload, indent=1, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _document(fan, kind: str):
    doc = fan_document(fan)
    doc.metadata = {**doc.metadata, "kind": kind}
    return doc


def _need_dataset(args):
    if not args.dataset:
        raise UsageError("--dataset is required")
    return load_dataset(args.dataset)


def _family_spec(args) -> FamilySpec:
    if not args.kind:
        raise UsageError("--kind is required for family computations")
    return FamilySpec(args.kind, args.depth, args.arrows, args.bound)


def cmd_compute(args) -> int:
    what = args.what
    if what == "family":
        _emit(args, serialize(_document(family_fan(_family_spec(args)), "family")))
        return 0
    m = _need_dataset(args)
    if what == "heartfan":
        fan = heart_fan(m)
    elif what == "gfan":
        fan = virtual_gfan(m)
    elif what == "stabilityfan":
        fan = stability_fan(m)
    elif what == "cofan":
        _emit(args, cofan_document(heart_cofan(m)))
        return 0
    else:
        rep = walls_and_chambers(m, samples=args.samples, seed=args.seed)
        _emit(
            args,
            {
                "dataset": m.name,
                "walls": [{"object": x, "cone": _cone_json(d), "codim": cd} for x, d, cd in rep.walls],
                "geometric_walls": [_cone_json(d) for d in rep.geometric_walls],
                "other_stability_spaces": [{"object": x, "cone": _cone_json(d), "codim": cd} for x, d, cd in rep.other_spaces],
                "chambers": [{"heart": h.label, "cone": _cone_json(c)} for h, c in rep.chambers],
                "stability_support": rep.stability_support,
                "truncated": rep.truncated,
            },
        )
        return 0
    _emit(args, serialize(_document(fan, what)))
    return 0


def cmd_query(args) -> int:
    what = args.what
    if what in ("support", "semistable", "dkp", "hearts") and args.v is None:
        raise UsageError("--v is required")
    if what == "support" and args.kind and not args.dataset:
        fan = family_fan(_family_spec(args))
        label = args.kind
    else:
        m = _need_dataset(args)
        label = m.name
        if what == "support":
            fan = heart_fan(m)
    if what == "support":
        v = parse_vector(args.v)
        hit = support_query(fan, v)
        hearts = [fan.tag(c).get("heart") for c in fan.sorted() if c.contains(v) and fan.tag(c).get("heart")]
        _emit(
            args,
            {
                "source": label,
                "query": _q(hit.query),
                "cone": _cone_json(hit.cone),
                "in_support": hit.hit,
                "minimal": hit.minimal,
                "truncated": hit.truncated,
                "heart_cones_containing": hearts,
            },
        )
        return 0 if hit.hit else 1
    if what == "semistable":
        res = semistable(m, parse_vector(args.v))
        _emit(args, {"dataset": label, "v": args.v, "semistable": [{"object": x, "stable": res.stable[x]} for x in res.subcat]})
        return 0
    if what == "dkp":
        kp = distinguished_kernel_pair(m, parse_vector(args.v))
        _emit(args, {"dataset": label, "v": args.v, "heart": kp.heart.label, "kernel": list(kp.kernel)})
        return 0
    if what == "hearts":
        hs = hearts_containing(m, parse_vector(args.v))
        _emit(args, {"dataset": label, "v": args.v, "hearts": [h.label for h in hs], "count": len(hs)})
        return 0
    if what == "slice":
        if not args.charge:
            raise UsageError("--charge is required")
        ps = phase_slice(m, parse_charge_flag(args.charge), orientation=args.orientation)
        _emit(
            args,
            {
                "dataset": label,
                "orientation": ps.orientation,
                "phases": [
                    {"phase": e.phase_text, "direction": [str(a) for a in e.direction], "objects": list(e.subcat), "witness": _q(e.witness)}
                    for e in ps.entries
                ],
            },
        )
        return 0
    if not args.object:
        raise UsageError("--object is required")
    if args.object not in m.classes:
        raise UsageError(f"unknown object {args.object!r}")
    d = stability_space(m, args.object)
    _emit(args, {"dataset": label, "object": args.object, "stability_space": _cone_json(d), "codim": m.rank - d.dim})
    return 0


def verify_document(doc, samples: int = 200, seed: int = 0) -> dict:
    fan = to_fan(doc)
    report = check_fan(fan)
    violations = list(report.violations)
    recomputed = [list(e) for e in fan.face_edges()]
    if sorted(map(tuple, doc.faces)) != sorted(map(tuple, recomputed)):
        violations.append("face edges differ from the recomputed face relation")
    truncated = bool(doc.metadata.get("truncated", False))
    checks = {"fan_axioms": "pass" if report.ok else "fail"}
    if doc.metadata.get("kind") == "heartfan" and not truncated:
        complete = is_complete(fan)
        rng = random.Random(seed)
        misses = 0
        for _ in range(samples):
            v = [Fraction(rng.randint(-1000, 1000), rng.randint(1, 50)) for _ in range(doc.rank)]
            if support_query(fan, v).cone is None:
                misses += 1
        checks["completeness"] = "pass" if complete and misses == 0 else "fail"
        if checks["completeness"] == "fail":
            violations.append(f"heart fan is not complete ({misses} of {samples} samples missed)")
    else:
        checks["completeness"] = "skipped"
    return {"ok": not violations, "checks": checks, "violations": violations, "cones": len(doc.cones)}


def cmd_verify(args) -> int:
    doc = parse(Path(args.path).read_text())
    rep = verify_document(doc, samples=args.samples, seed=args.seed)
    _emit(args, rep)
    return 0 if rep["ok"] else 1


def cmd_render(args) -> int:
    text = sys.stdin.read() if args.path == "-" else Path(args.path).read_text()
    doc = parse(text)
    _emit(args, render_svg(doc, load_style(args.style)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="heartfan", description="Heart fans of finite category models and families.")
    p.add_argument("--seed", type=int, default=0, help="seed for sampling checks (default 0)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--dataset", help="dataset name (searched in $HEARTFAN_DATA, then built-ins) or JSON path")
        sp.add_argument("--kind", help="family kind: projective_line, kronecker, tube_rank2, semisimple_Z, elliptic_rational")
        sp.add_argument("--arrows", type=int, default=2, help="number of Kronecker arrows")
        sp.add_argument("--depth", type=int, default=3, help="family truncation depth")
        sp.add_argument("--bound", type=int, default=None, help="slope bound for the elliptic family")
        sp.add_argument("--samples", type=int, default=200)
        sp.add_argument("--out", help="write output here instead of stdout")

    c = sub.add_parser("compute", help="compute a fan, cofan or wall report")
    c.add_argument("what", choices=["heartfan", "cofan", "gfan", "stabilityfan", "walls", "family"])
    common(c)
    c.set_defaults(func=cmd_compute)

    q = sub.add_parser("query", help="pointwise queries")
    q.add_argument("what", choices=["support", "semistable", "dkp", "hearts", "slice", "stabspace"])
    common(q)
    q.add_argument("--v", help='dual vector, e.g. --v="-1,1/2"')
    q.add_argument("--charge", help='charge rows, e.g. --charge="-1,0;0,1"')
    q.add_argument("--object", help="indecomposable id")
    q.add_argument("--orientation", choices=["clockwise", "counterclockwise"], default="clockwise")
    q.set_defaults(func=cmd_query)

    v = sub.add_parser("verify", help="check a fan document")
    v.add_argument("path")
    v.add_argument("--samples", type=int, default=200)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("render", help="draw a rank-2 fan document as SVG")
    r.add_argument("path", help="fan document, or - for stdin")
    r.add_argument("--style", help="JSON style file")
    r.add_argument("--out")
    r.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"heartfan: usage error: {e}", file=sys.stderr)
        return 2
    except HeartfanError as e:
        print(f"heartfan: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as e:
        print(f"heartfan: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
