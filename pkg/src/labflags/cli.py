"""Command line front end: ``labflags build|flags|verify|appendix|report``."""
from __future__ import annotations

import argparse
import json
import sys

from .campaign import (
    CHECKS, GENERATORS, CampaignConfig, appendix, exit_code, report_csv, report_json,
    run_campaign,
)
from .errors import ParseError
from .flags import count_flags, enumerate_flags
from .fan import flag_sign, sign_order
from .graphs import Graph
from .hanner import build_hanner, clique_polytope
from .polytope import Polytope, hull


def _load_json(path: str):
    with open(path) as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: {e.msg}", e.lineno, e.colno) from None


def _load_polytope(path: str) -> Polytope:
    data = _load_json(path)
    if isinstance(data, list):
        return hull(data)
    return Polytope.from_json(data)


def parse_dims(text: str) -> tuple[int, ...]:
    """'3', '1-4' or '3,4'."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"no dimensions in {text!r}")
    return tuple(out)


def parse_checks(text: str) -> tuple[str, ...]:
    if text == "all":
        return CHECKS
    names = tuple(c.strip() for c in text.split(",") if c.strip())
    bad = [c for c in names if c not in CHECKS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown checks {bad}; choose from {', '.join(CHECKS)}")
    return names


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _serialize(report: dict, fmt: str) -> str:
    return report_csv(report) if fmt == "csv" else report_json(report)


def cmd_build(args) -> int:
    if args.expr is not None:
        P = build_hanner(args.expr)
    elif args.graph is not None:
        P = clique_polytope(Graph.from_json(_load_json(args.graph)))
    else:
        P = _load_polytope(args.vertices)
    _emit(json.dumps(P.to_json()) + "\n", args.out)
    return 0


def cmd_flags(args) -> int:
    P = _load_polytope(args.polytope)
    flags = enumerate_flags(P)
    total = count_flags(P)
    if total != len(flags):
        print(f"error: chain count {total} disagrees with enumeration {len(flags)}", file=sys.stderr)
        return 2
    out = {"count": total}
    if args.by_sign:
        table = {}
        for F in flags:
            key = str(flag_sign(P, F))
            table[key] = table.get(key, 0) + 1
        out["by_sign"] = {k: table[k] for k in sorted(table, key=sign_order)}
        if sum(table.values()) != total:
            print("error: signed counts do not sum to the total", file=sys.stderr)
            return 2
    if args.format == "json":
        _emit(json.dumps(out, indent=2) + "\n", args.out)
    else:
        lines = [f"flags {total}"]
        for k, v in out.get("by_sign", {}).items():
            lines.append(f"{k} {v}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    config = CampaignConfig(dims=args.dim, count=args.count, seed=args.seed,
                            generator=args.generator, checks=args.checks,
                            files=tuple(args.files), n_points=args.points, timing=args.timing)
    report = run_campaign(config, workers=args.workers)
    _emit(_serialize(report, args.format), args.out)
    if args.out:
        print(f"{report['aggregate']}: {len(report['instances'])} instances, "
              f"{report['failures']} failed checks", file=sys.stderr)
    return exit_code(report)


def cmd_appendix(args) -> int:
    report = appendix()
    if args.format == "json":
        _emit(report_json(report), args.out)
    else:
        lines = []
        for r in report["vertices"]:
            lines.append(f"vertex ({','.join(r['vertex'])}) dual facet flags {r['flags']} "
                         f"expected {r['expected']} {r['status']}")
        for c in report["checks"]:
            lines.append(f"{c['check']} {c.get('value', '')} {c['status']}".replace("  ", " "))
        lines.append(report["aggregate"])
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if report["aggregate"] == "pass" else 3


def cmd_report(args) -> int:
    report = _load_json(args.input)
    _emit(_serialize(report, args.format), args.out)
    return exit_code(report) if "instances" in report else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="labflags",
                                description="Exact flag counts and lemma checks for locally anti-blocking polytopes.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="write canonical polytope JSON")
    src = b.add_mutually_exclusive_group(required=True)
    src.add_argument("--expr", help="Hanner expression, e.g. 'polar(join(seg,seg))'")
    src.add_argument("--graph", help='graph JSON file {"n": k, "edges": [[i,j],...]} (1-based); builds C(G)')
    src.add_argument("--vertices", help="polytope JSON or a JSON list of points")
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    f = sub.add_parser("flags", help="count flags")
    f.add_argument("polytope")
    f.add_argument("--by-sign", action="store_true", help="per-orthant table")
    f.add_argument("--format", choices=("text", "json"), default="text")
    f.add_argument("--out")
    f.set_defaults(func=cmd_flags)

    v = sub.add_parser("verify", help="run a verification campaign")
    v.add_argument("--generator", choices=GENERATORS, default="unconditional")
    v.add_argument("--dim", type=parse_dims, default=(3,), help="'3', '1-4' or '3,4'")
    v.add_argument("--count", type=int, default=10)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--points", type=int, default=2, help="random points per unconditional instance")
    v.add_argument("--checks", type=parse_checks, default=CHECKS, help="comma list or 'all'")
    v.add_argument("--files", nargs="*", default=[], help="polytope files for --generator file")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.add_argument("--out")
    v.add_argument("--timing", action="store_true", help="add wall-clock times (breaks byte-identity)")
    v.add_argument("--workers", type=int, default=None, help="defaults to $LABFLAGS_WORKERS or 1")
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("appendix", help="reproduce the 448-flag computation")
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.add_argument("--out")
    a.set_defaults(func=cmd_appendix)

    r = sub.add_parser("report", help="re-serialize a saved JSON report")
    r.add_argument("input")
    r.add_argument("--format", choices=("json", "csv"), default="json")
    r.add_argument("--out")
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
