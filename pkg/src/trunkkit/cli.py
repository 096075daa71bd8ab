"""Command-line front end.

Exit status: 0 success or consistent, 1 a violation or contradiction was
found, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import bounds
from .arrangement import (
    check_lambda_bound,
    canonical_form,
    deconstruct,
    enumerate_arrangements,
    extremal_sequence,
    lambda_count,
    parse_arrangement,
    piece_count,
    random_build,
    replay,
    validate,
)
from .arrangement.tree import format_path
from .arrangement.configuration import absorb, parse_configuration, parity_check
from .arrangement.enumerate import BudgetExceeded
from .morse import connected_sum, level_profile, parse_morse, serialize
from .pattern import cable, parse_tangle, presentation_wrapping, satellite, winding_number
from .render import render

OK, VIOLATION, USAGE = 0, 1, 2


class _Usage(Exception):
    pass


def _read(path: str) -> str:
    p = Path(path)
    if p.exists():
        return p.read_text(encoding="utf-8")
    shipped = resources.files("trunkkit").joinpath("data", path)
    if shipped.is_file():
        return shipped.read_text(encoding="utf-8")
    raise _Usage(f"no such file: {path}")


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def _fmt(v) -> str:
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(_fmt(x) for x in v) + "]"
    return str(v)


def _is_summary(v) -> bool:
    if isinstance(v, (bool, int, Fraction)):
        return True
    if isinstance(v, str):
        return "\n" not in v
    if isinstance(v, list):
        return all(isinstance(x, (int, Fraction)) for x in v)
    return v is None


def _summary(fields: dict) -> str:
    """``key=value`` line for every scalar field, mirroring the JSON report."""
    return " ".join(f"{k}={_fmt(v)}" for k, v in fields.items() if _is_summary(v))


def _profile_fields(p) -> dict:
    prof = level_profile(p)
    return {"width": prof.width, "trunk": prof.trunk, "profile": list(prof.widths)}


def cmd_invariants(args):
    p = parse_morse(_read(args.file))
    return _profile_fields(p), "", OK


def cmd_connect(args):
    s = connected_sum(parse_morse(_read(args.first)), parse_morse(_read(args.second)))
    fields = {"word": serialize(s).splitlines(), **_profile_fields(s)}
    return fields, serialize(s).rstrip("\n"), OK


def cmd_cable(args):
    c = cable(parse_morse(_read(args.file)), args.n)
    fields = {"word": serialize(c).splitlines(), **_profile_fields(c), "components": c.component_count()}
    return fields, serialize(c).rstrip("\n"), OK


def _build_satellite(companion: str, tangle: str, level: int):
    comp = parse_morse(_read(companion))
    t = parse_tangle(_read(tangle))
    return comp, t, satellite(comp, t, level)


def cmd_satellite(args):
    _, t, s = _build_satellite(args.companion, args.tangle, args.level)
    fields = {
        "word": serialize(s).splitlines(),
        **_profile_fields(s),
        "winding": winding_number(t),
        "wrapping_bound": presentation_wrapping(t),
    }
    return fields, serialize(s).rstrip("\n"), OK


def _violations(bad):
    fields = {"valid": False, "violations": [str(v) for v in bad], "count": len(bad)}
    return fields, "\n".join(str(v) for v in bad), VIOLATION


def cmd_arr_verify(args):
    A = parse_arrangement(_read(args.file))
    bad = validate(A, args.a)
    if bad:
        return _violations(bad)
    return {"valid": True, "a": args.a, "pieces": piece_count(A)}, "", OK


def cmd_arr_lambda(args):
    A = parse_arrangement(_read(args.file))
    bad = validate(A, args.a)
    if bad:
        return _violations(bad)
    r = check_lambda_bound(A, args.a)
    fields = {"x": r.x, "y": r.y, "ratio": r.ratio, "bound": r.bound, "pass": r.passed}
    return fields, "", OK if r.passed else VIOLATION


def cmd_arr_enumerate(args):
    found = enumerate_arrangements(args.max, args.a, threads=args.threads)
    fields = {"arrangements": found, "n_max": args.max, "a": args.a, "count": len(found)}
    code = OK
    if args.check_lambda:
        ratios = [check_lambda_bound(parse_arrangement(c), args.a) for c in found]
        bad = [c for c, r in zip(found, ratios) if not r.passed]
        fields.update(
            bound=Fraction(args.a, args.a + 1),
            min_ratio=min(r.ratio for r in ratios),
            violations=len(bad),
            failing=bad,
        )
        code = OK if not bad else VIOLATION
    lines = [] if args.quiet else list(found)
    if args.check_lambda:
        verdict = f"all {fields['violations']} violations" if code == OK else f"{fields['violations']} VIOLATIONS"
        lines.append(f"lambda ratio > {fields['bound']}: {verdict}")
    return fields, "\n".join(lines), code


def cmd_arr_deconstruct(args):
    if args.random is not None:
        rng = random.Random(args.seed)
        A = random_build(rng, args.random, args.a).final()
    elif args.file:
        A = parse_arrangement(_read(args.file))
    else:
        raise _Usage("arr-deconstruct needs FILE or --random N")
    bad = validate(A, args.a)
    if bad:
        return _violations(bad)
    trace = deconstruct(A, args.a)
    round_trip = canonical_form(replay(trace)) == canonical_form(A)
    fields = {
        "arrangement": str(A),
        "moves": [str(m) for m in trace.steps],
        "steps": len(trace),
        "x": trace.xs,
        "y": trace.ys,
        "round_trip": round_trip,
    }
    return fields, str(trace), OK if round_trip else VIOLATION


def cmd_arr_extremal(args):
    seq = extremal_sequence(args.a, args.steps)
    inf = Fraction(args.a, args.a + 1)
    fields = {"a": args.a, "values": list(seq), "infimum": inf}
    return fields, ", ".join(str(v) for v in seq) + f" \u2192 inf {inf}", OK


def cmd_arr_absorb(args):
    conf = parse_configuration(_read(args.file))
    problems = parity_check(conf)
    if problems:
        return {"parity": False, "violations": problems, "count": len(problems)}, "\n".join(problems), VIOLATION
    result = absorb(conf)
    fields = {
        "correspondence": [
            {"source": format_path(q), "target": format_path(p), "essential": e, "boundaries": s}
            for q, p, e, s in result.correspondence
        ],
        "excluded_pieces": [format_path(q) for q in result.excluded],
        "parity": True,
        "arrangement": str(result.arrangement),
        "lambda": lambda_count(result.arrangement),
        "pieces": piece_count(result.arrangement),
        "excluded": len(result.excluded),
    }
    return fields, str(result), OK


def cmd_audit(args):
    data = bounds.load_certified(args.data) if args.data else bounds.shipped_data()
    if args.datum not in data:
        raise _Usage(f"unknown datum {args.datum!r}; known: {', '.join(sorted(data))}")
    d = data[args.datum]
    if args.file:
        sat = parse_morse(_read(args.file))
    elif args.companion and args.tangle:
        _, _, sat = _build_satellite(args.companion, args.tangle, args.level)
    else:
        raise _Usage("audit needs a satellite FILE or --companion and --tangle")
    reports = [bounds.audit_winding(sat, d), bounds.audit_wrapping(sat, d)]
    mu = Fraction(args.mu) if args.mu is not None else d.mu_limit()
    if mu is not None:
        reports.append(bounds.audit_combined(sat, d, mu))
    bad = sum(1 for r in reports if not r.consistent)
    fields = {
        "reports": [_kv_dict(r.to_kv()) for r in reports],
        "datum": d.name,
        "audits": len(reports),
        "contradictions": bad,
    }
    return fields, "".join(r.to_table() for r in reports).rstrip("\n"), OK if bad == 0 else VIOLATION


def _kv_dict(text: str) -> dict:
    out: dict = {}
    for line in text.splitlines():
        k, v = line.split("=", 1)
        if k in out:
            out[k] = (out[k] if isinstance(out[k], list) else [out[k]]) + [v]
        else:
            out[k] = v
    return out


def cmd_render(args):
    p = parse_morse(_read(args.file))
    out = render(p, args.format)
    return {"diagram": out, "format": args.format}, out.rstrip("\n"), OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trunkkit", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized generation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="width, trunk and level profile of a .morse word")
    p.add_argument("file")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("connect", help="connected sum of two knots")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_connect)

    p = sub.add_parser("cable", help="n-fold blackboard cable")
    p.add_argument("file")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_cable)

    p = sub.add_parser("satellite", help="satellite of a companion by a .tangle pattern")
    p.add_argument("companion")
    p.add_argument("tangle")
    p.add_argument("--level", type=int, default=0)
    p.set_defaults(func=cmd_satellite)

    for name, func, help_ in (
        ("arr-verify", cmd_arr_verify, "check arrangement validity"),
        ("arr-lambda", cmd_arr_lambda, "count pieces and check the lambda bound"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("file")
        p.add_argument("--a", type=int, default=1)
        p.set_defaults(func=func)

    p = sub.add_parser("arr-enumerate", help="all arrangements up to a piece budget")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--check-lambda", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--quiet", action="store_true", help="print only the summary")
    p.set_defaults(func=cmd_arr_enumerate)

    p = sub.add_parser("arr-deconstruct", help="reduce an arrangement to two disks")
    p.add_argument("file", nargs="?")
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--random", type=int, metavar="PIECES", help="deconstruct a seeded random build")
    p.set_defaults(func=cmd_arr_deconstruct)

    p = sub.add_parser("arr-extremal", help="extremal ratio sequence")
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--steps", type=int, required=True)
    p.set_defaults(func=cmd_arr_extremal)

    p = sub.add_parser("arr-absorb", help="parity check and absorb a flagged configuration")
    p.add_argument("file")
    p.set_defaults(func=cmd_arr_absorb)

    p = sub.add_parser("audit", help="audit trunk lower bounds for a satellite")
    p.add_argument("file", nargs="?")
    p.add_argument("--datum", required=True)
    p.add_argument("--data", help="certified-data file (default: shipped data)")
    p.add_argument("--mu", help="mu value for the combined bound (rational)")
    p.add_argument("--companion")
    p.add_argument("--tangle")
    p.add_argument("--level", type=int, default=0)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("render", help="draw a .morse word")
    p.add_argument("file")
    p.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    p.set_defaults(func=cmd_render)
    return parser


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        fields, text, code = args.func(args)
    except (_Usage, ValueError, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if isinstance(exc, _Usage):
            parser.print_usage(sys.stderr)
        return USAGE
    if args.json:
        out.write(json.dumps(_jsonable(fields), sort_keys=True, ensure_ascii=False) + "\n")
    else:
        summary = _summary(fields)
        out.write("\n".join(part for part in (text, summary) if part) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
