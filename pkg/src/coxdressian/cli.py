"""Command line interface: ``coxdressian <command> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .coxeter import InvalidPairError, MinusculePair, MinusculeQuotient, build_quotient, quotient_from_json, quotient_to_json
from .equations import equations_up_to, strong_exchange_system
from .fans import ScaleGuardError, fan_to_json, prevariety_fan, prevariety_fan_by_refinement, secondary_fan
from .linalg import as_fraction
from .subdivision import classify, regular_subdivision, subdivision_to_json, subdivision_to_off
from .tropical import HeightFunction, heights_from_json, heights_to_json, is_member, tropical
from . import verify

DEFAULT_PARABOLIC = {"B": None, "C": 1, "D": 1, "E6": 1, "E7": 7}


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _emit(text: str, path: str | None = None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _pair(args) -> MinusculePair:
    if args.type is None or args.rank is None:
        raise UsageError("--type and --rank are required")
    t = args.type.upper()
    if t == "E":
        t = f"E{args.rank}"
    r = args.parabolic
    if r is None:
        if t == "A":
            raise UsageError("type A needs --parabolic")
        r = DEFAULT_PARABOLIC.get(t)
        if r is None:
            r = args.rank
    return MinusculePair(t, args.rank, r)


def _quotient(args) -> MinusculeQuotient:
    return build_quotient(_pair(args))


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _load_heights(args) -> tuple[MinusculeQuotient, HeightFunction]:
    data = _read_json(args.heights)
    if isinstance(data, list):
        q = _quotient(args)
        if len(data) != len(q.points):
            raise UsageError(f"{len(data)} heights for {len(q.points)} vertices")
        return q, HeightFunction(tuple(tropical(v) for v in data), q)
    if not isinstance(data, dict) or "heights" not in data:
        raise UsageError(f"{args.heights}: expected a list or an object with a 'heights' field")
    if args.type is not None:
        q = _quotient(args)
        if "type" in data:
            given = MinusculePair(data["type"], int(data["rank"]), int(data["parabolic"]))
            if given != q.pair:
                raise UsageError(f"height file is for {given.name}, command asks for {q.pair.name}")
        return heights_from_json(data, q, missing_inf=args.missing_inf)
    if "type" not in data:
        raise UsageError("height file has no type; pass --type/--rank")
    return heights_from_json(data, missing_inf=args.missing_inf)


def format_provenance(q: MinusculeQuotient, prov: tuple) -> str:
    """Human-readable origin of an equation, e.g. ``f^B with provenance (∅,{1,2,3})``."""

    def fmt(s):
        return "∅" if not s else (str(s[0]) if len(s) == 1 else "{" + ",".join(map(str, s)) + "}")

    tag = prov[0]
    if tag in ("A", "B", "D"):
        return f"f^{tag} with provenance ({fmt(prov[1])},{fmt(prov[2])})"
    if tag == "D1":
        return "f^D on the cross polytope"
    if tag == "face":
        return f"f^{q.pair.lie_type} for the pair ({q.labels[prov[1]]},{q.labels[prov[2]]})"
    if tag == "global":
        return f"f^{q.pair.lie_type} on all antipodal pairs"
    return repr(prov)


# -- commands -------------------------------------------------------------------------


def cmd_build(args) -> int:
    q = _quotient(args)
    data = quotient_to_json(q)
    if args.json or args.output:
        _emit(_dump(data), args.output)
    else:
        print(f"{q.pair.name}: {len(q.points)} vertices, dimension {q.dimension}, {len(q.edges)} edges, {len(q.roots)} roots")
    return 0


def cmd_equations(args) -> int:
    q = _quotient(args)
    s = strong_exchange_system(q) if args.max_symdiff is None else equations_up_to(q, args.max_symdiff)
    if args.json or args.output:
        data = {
            "type": q.pair.lie_type,
            "rank": q.pair.rank,
            "parabolic": q.pair.parabolic,
            "count": len(s),
            "equations": [
                {
                    "provenance": format_provenance(q, f.provenance),
                    "monomials": [[str(q.labels[i]), str(q.labels[j])] for i, j in f.monomials],
                }
                for f in s
            ],
        }
        _emit(_dump(data), args.output)
    else:
        print(f"{len(s)} equations")
        for f in s:
            terms = " + ".join(f"x{q.labels[i]}x{q.labels[j]}" for i, j in f.monomials)
            print(f"  {format_provenance(q, f.provenance)}: {terms}")
    return 0


def cmd_member(args) -> int:
    q, mu = _load_heights(args)
    ok, f = is_member(mu, strong_exchange_system(q))
    if args.json:
        out = {"member": ok, "failed": None}
        if f is not None:
            out["failed"] = {
                "provenance": format_provenance(q, f.provenance),
                "monomials": [[str(q.labels[i]), str(q.labels[j])] for i, j in f.monomials],
            }
        print(_dump(out))
    elif ok:
        print("member")
    else:
        print(f"NOT a member; fails {format_provenance(q, f.provenance)}")
    return 0


def cmd_subdivide(args) -> int:
    q, mu = _load_heights(args)
    sub = regular_subdivision(q, mu)
    reports, summary = classify(q, mu, sub)
    if args.off:
        _emit(subdivision_to_off(q, sub).rstrip("\n"), args.off)
    if args.json:
        print(_dump(subdivision_to_json(q, reports, summary)))
        return 0
    strong = sum(r.is_strong_matroid for r in reports)
    print(f"{len(reports)} cells, {strong} strong, summary: {summary}")
    for r in reports:
        labels = " ".join(str(q.labels[i]) for i in sorted(r.cell.vertices))
        kind = "strong" if r.is_strong_matroid else ("matroid" if r.is_coxeter_matroid else "neither")
        print(f"  dim {r.cell.dimension} [{kind}] {labels}")
    return 0


def _fan_summary(fan, name: str) -> None:
    print(f"{name}: f-vector {fan.f_vector}, lineality dimension {fan.lineality_dim}, {len(fan.maximal_cones())} maximal cones")


def cmd_fan(args) -> int:
    q = _quotient(args)
    s = strong_exchange_system(q) if args.max_symdiff is None else equations_up_to(q, args.max_symdiff)
    build = prevariety_fan_by_refinement if args.method == "refinement" else prevariety_fan
    fan = build(s, max_cones=args.max_cones, allow_large=args.allow_large)
    if args.json or args.output:
        _emit(_dump(fan_to_json(fan)), args.output)
    else:
        _fan_summary(fan, f"Dr({q.pair.name})")
    return 0


def cmd_secondary(args) -> int:
    if args.points:
        data = _read_json(args.points)
        try:
            pts = [tuple(as_fraction(x) for x in p) for p in data]
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"{args.points}: expected a list of coordinate lists") from exc
        name = args.points
    else:
        q = _quotient(args)
        pts, name = q.points, q.pair.name
    fan = secondary_fan(pts, max_points=args.max_points, allow_large=args.allow_large, seed=args.seed)
    if args.json or args.output:
        _emit(_dump(fan_to_json(fan)), args.output)
    else:
        _fan_summary(fan, f"secondary fan of {name}")
    return 0


def cmd_verify(args) -> int:
    names = args.name or None
    if names:
        unknown = [n for n in names if n not in verify.REGISTRY]
        if unknown:
            raise UsageError(f"unknown check(s): {', '.join(unknown)}; known: {', '.join(verify.REGISTRY)}")
    workers = max(1, min(args.threads, os.cpu_count() or 1))
    results = verify.run_checks(names, args.seed, args.samples, workers, args.exhaustive)
    failed = False
    for r in results:
        path = verify.write_reproducer(r, args.reproducers, args.seed)
        if r.status == "fail" and r.gating:
            failed = True
        if not args.json:
            gate = "" if r.gating else " (non-gating)"
            print(f"{r.status.upper():4} {r.name}{gate}")
            if r.status == "fail":
                print(f"     {r.counterexample.get('reason', '')}")
                if path:
                    print(f"     reproducer: {path}")
    if args.json:
        print(_dump([r.to_json() for r in results]))
    return 1 if failed else 0


def cmd_export(args) -> int:
    data = _read_json(args.input)
    if isinstance(data, dict) and "vertices" in data:
        q = quotient_from_json(data)
        if args.to != "quotient":
            raise UsageError("a quotient file can only be exported as a quotient")
        _emit(_dump(quotient_to_json(q)), args.output)
        return 0
    if not (isinstance(data, dict) and "heights" in data):
        raise UsageError(f"{args.input}: neither a quotient file nor a height file")
    q, mu = heights_from_json(data, missing_inf=args.missing_inf)
    if args.to == "quotient":
        _emit(_dump(quotient_to_json(q)), args.output)
    elif args.to == "heights":
        _emit(_dump(heights_to_json(q, mu)), args.output)
    elif args.to == "subdivision":
        reports, summary = classify(q, mu)
        _emit(_dump(subdivision_to_json(q, reports, summary)), args.output)
    else:
        _emit(subdivision_to_off(q, regular_subdivision(q, mu)).rstrip("\n"), args.output)
    return 0


# -- parser -----------------------------------------------------------------------------


def _selectors(p, required: bool = False) -> None:
    p.add_argument("--type", required=required, help="A, B, C, D, E6 or E7")
    p.add_argument("--rank", type=int, required=required)
    p.add_argument("--parabolic", type=int, help="index r of the maximal parabolic P_r (defaults per type)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coxdressian", description="Coxeter Dressians of minuscule type")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="vertices, labels, roots and edges of a quotient")
    _selectors(p, True)
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("equations", help="strong exchange equations")
    _selectors(p, True)
    p.add_argument("--max-symdiff", type=int, help="type B: keep |I symdiff J| <= k")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_equations)

    for name, func, text in (
        ("member", cmd_member, "Dressian membership of a height file"),
        ("subdivide", cmd_subdivide, "regular subdivision and cell classification"),
    ):
        p = sub.add_parser(name, help=text)
        _selectors(p)
        p.add_argument("--heights", required=True, help="height file (JSON object or list)")
        p.add_argument("--missing-inf", action="store_true", help="unlisted labels get height inf")
        p.add_argument("--json", action="store_true")
        if name == "subdivide":
            p.add_argument("--off", help="write an OFF mesh of the cells (3-dimensional quotients)")
        p.set_defaults(func=func)

    p = sub.add_parser("fan", help="fan structure of the Dressian (finite heights)")
    _selectors(p, True)
    p.add_argument("--method", choices=("patterns", "refinement"), default="patterns")
    p.add_argument("--max-symdiff", type=int, help="type B: fan of the |I symdiff J| <= k subsystem")
    p.add_argument("--max-cones", type=int, help="scale guard (default from COXDRESSIAN_MAX_CONES)")
    p.add_argument("--allow-large", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_fan)

    p = sub.add_parser("secondary", help="secondary fan of a quotient or of a point file")
    _selectors(p)
    p.add_argument("--points", help="JSON list of points")
    p.add_argument("--seed", type=int, default=0, help="seed of the starting generic height")
    p.add_argument("--max-points", type=int, help="scale guard (default from COXDRESSIAN_MAX_POINTS)")
    p.add_argument("--allow-large", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_secondary)

    p = sub.add_parser("verify", help="run the named checks")
    p.add_argument("--name", action="append", help="check to run (repeatable; default all)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, help="override each check's sample count")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--exhaustive", action="store_true", help="long-running: also enumerate all small E7 Coxeter matroids")
    p.add_argument("--reproducers", default="reproducers", help="directory for counterexample files")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="convert quotient and height files")
    p.add_argument("--input", required=True)
    p.add_argument("--to", choices=("quotient", "heights", "subdivision", "off"), default="quotient")
    p.add_argument("--missing-inf", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (UsageError, InvalidPairError, ScaleGuardError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
