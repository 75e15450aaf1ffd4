"""Command-line front end.

Subcommands: stems, steenrod, dual, kernel, highdim, selftest.
Global flags: --table PATH (defaults to the shipped knowledge base),
--json for machine-readable reports, --local for stem locality, -v.

Exit codes: 0 success, 1 usage error, 2 table error, 3 incomplete-knowledge
degradation (a verdict stayed unknown because a table fact is missing).
"""

from __future__ import annotations

import argparse
import json
import sys

from .certificates import build_diagram
from .chase import ChaseError, chase_kernel, highdim_check
from .spectra import apply_attaching_facts, dualize, stunted_projective, wedge_split
from .steenrod import p_power_hits, sq_coefficient
from .stems import StemTable, StemTableError
from .selftest import run_selftest

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_TABLE = 2
EXIT_INCOMPLETE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_globals(parser, topmost):
    # Suppressed defaults on subparsers keep values parsed at the top level.
    def dflt(value):
        return value if topmost else argparse.SUPPRESS
    parser.add_argument("--table", metavar="PATH", default=dflt(None),
                        help="stems knowledge-base file (default: shipped)")
    parser.add_argument("--json", action="store_true", default=dflt(False),
                        help="machine-readable output")
    parser.add_argument("--local", metavar="{Z|2|3|p:N}", default=dflt("2"),
                        help="stem locality for table queries (default 2)")
    parser.add_argument("-v", "--verbose", action="count", default=dflt(0),
                        help="more detail in human output")


def _build_parser():
    parser = _Parser(
        prog="stemchase",
        description="certified kernel bounds for the bottom-cell map on "
                    "pi_0 of dualized stunted projective spectra")
    _add_globals(parser, topmost=True)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND",
                                parser_class=_Parser)

    p = sub.add_parser("stems", help="look up a stable stem entry")
    p.add_argument("dim", type=int)
    _add_globals(p, topmost=False)

    p = sub.add_parser("steenrod", help="cohomology-operation oracle")
    _add_globals(p, topmost=False)
    steen = p.add_subparsers(dest="op", metavar="OP", parser_class=_Parser)
    q = steen.add_parser("sq", help="Sq^{2j} coefficient on x^k")
    q.add_argument("j", type=int)
    q.add_argument("k", type=int)
    _add_globals(q, topmost=False)
    q = steen.add_parser("p1", help="P^1 detection on x^k at an odd prime")
    q.add_argument("p", type=int)
    q.add_argument("k", type=int)
    _add_globals(q, topmost=False)

    p = sub.add_parser("dual", help="render a dualized stunted diagram")
    p.add_argument("m", type=int)
    p.add_argument("--from", dest="base", type=int, default=0,
                   help="quotient base k of CP^m/CP^k (default 0)")
    _add_globals(p, topmost=False)

    p = sub.add_parser("kernel", help="chase kernel bounds for CP^m")
    p.add_argument("m", type=int)
    _add_globals(p, topmost=False)

    p = sub.add_parser("highdim", help="odd-primary high-dimensional check")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-t", type=int, required=True)
    p.add_argument("-r", type=int, required=True)
    _add_globals(p, topmost=False)

    p = sub.add_parser("selftest", help="replay every golden computation")
    _add_globals(p, topmost=False)
    return parser


def _load_table(args):
    if args.table is None:
        return StemTable.shipped()
    return StemTable.load(args.table)


def _cmd_stems(args, table):
    try:
        entry = table.group(args.dim, args.local)
    except StemTableError as exc:
        print(f"no entry: {exc}", file=sys.stderr)
        return EXIT_TABLE
    if args.json:
        print(json.dumps({"dim": entry.dim, "locality": entry.locality,
                          "orders": list(entry.group.factors),
                          "names": list(entry.group.names or ()),
                          "source": entry.source}, sort_keys=True))
    else:
        line = entry.render()
        if args.verbose:
            line += f"   [{entry.source}]"
        print(line)
    return EXIT_OK


def _cmd_steenrod(args, table):
    if args.op == "sq":
        bit = sq_coefficient(args.j, args.k)
        target = f"x^{args.k + args.j}" if bit else "0"
        if args.json:
            print(json.dumps({"j": args.j, "k": args.k, "coefficient": bit},
                             sort_keys=True))
        else:
            print(f"Sq^{2 * args.j}(x^{args.k}) = {target}")
        return EXIT_OK
    if args.op == "p1":
        try:
            hits = p_power_hits(args.p, args.k)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        target = f"x^{args.k + args.p - 1}" if hits else "0"
        if args.json:
            print(json.dumps({"p": args.p, "k": args.k, "hits": hits},
                             sort_keys=True))
        else:
            print(f"P^1(x^{args.k}) = {target}  (mod {args.p})")
        return EXIT_OK
    print("error: choose an operation: sq or p1", file=sys.stderr)
    return EXIT_USAGE


def _cmd_dual(args, table):
    try:
        X = dualize(stunted_projective(args.m, args.base))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    X = apply_attaching_facts(X, table.attaching_facts())
    if args.json:
        obj = {"name": X.name, "cells": list(X.cells),
               "attaching": {f"{u}->{l}": k.serialize()
                             for (u, l), k in X.attaching.items()}}
        print(json.dumps(obj, sort_keys=True))
    else:
        print(X.render())
        parts = wedge_split(X)
        if len(parts) > 1:
            print("splits as: " + " v ".join(p.name for p in parts))
    return EXIT_OK


def _cmd_kernel(args, table):
    try:
        report = chase_kernel(args.m, table)
    except ChaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TABLE
    if args.json:
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(report.render_text())
    return EXIT_INCOMPLETE if report.degraded else EXIT_OK


def _cmd_highdim(args, table):
    try:
        report = highdim_check(args.t, args.p, args.r)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(report.render_text())
    return EXIT_OK


def _cmd_selftest(args, table):
    ok, results = run_selftest(table)
    if args.json:
        print(json.dumps({"passed": ok, "checks": results}, sort_keys=True))
    else:
        for r in results:
            mark = "PASS" if r["passed"] else "FAIL"
            line = f"{mark}  {r['name']}"
            if args.verbose or not r["passed"]:
                line += f"  -- {r['detail']}"
            print(line)
        print(f"{'all checks passed' if ok else 'CHECKS FAILED'}")
    return EXIT_OK if ok else EXIT_INCOMPLETE


_COMMANDS = {
    "stems": _cmd_stems,
    "steenrod": _cmd_steenrod,
    "dual": _cmd_dual,
    "kernel": _cmd_kernel,
    "highdim": _cmd_highdim,
    "selftest": _cmd_selftest,
}


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_USAGE
    try:
        table = _load_table(args)
    except (StemTableError, OSError) as exc:
        print(f"table error: {exc}", file=sys.stderr)
        return EXIT_TABLE
    return _COMMANDS[args.command](args, table)


if __name__ == "__main__":
    sys.exit(main())
