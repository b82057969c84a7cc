"""Figure rendering CLI: ``coupled-fv-plot <kind> <inputs...> -o out.png``."""

from __future__ import annotations

import argparse
import sys

from .figures import render_convergence, render_profile, render_roots
from .io import SchemaError

__all__ = ["main"]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="coupled-fv-plot",
        description="Render figures from coupled-fv output files",
    )
    sub = parser.add_subparsers(dest="kind", required=True)

    p = sub.add_parser("profile", help="cell profiles with optional exact-trace overlay")
    p.add_argument("profile_csv")
    p.add_argument("--errors", help="errors JSON with exact traces to overlay")
    p.add_argument("--title")
    p.add_argument("-o", "--out", required=True)

    r = sub.add_parser("roots", help="trace-cubic root branches over friction")
    r.add_argument("roots_json")
    r.add_argument("--title")
    r.add_argument("-o", "--out", required=True)

    c = sub.add_parser("convergence", help="log-log error plot from a sweep table")
    c.add_argument("sweep_json")
    c.add_argument("--title")
    c.add_argument("-o", "--out", required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.kind == "profile":
            out = render_profile(args.profile_csv, args.out, errors_path=args.errors,
                                 title=args.title)
        elif args.kind == "roots":
            out = render_roots(args.roots_json, args.out, title=args.title)
        else:
            out = render_convergence(args.sweep_json, args.out, title=args.title)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
