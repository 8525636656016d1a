"""Command line interface: model construction, genus symbols, and the
verification pipeline over the packaged tables, proof cases, and subgroup
list."""

import argparse
import json
import sys
import time

from .dataset import DatasetError, load_dataset
from .discform import discriminant_form, genus_symbol, render_symbol
from .lattice import Lattice, LatticeError, short_vectors
from .niemeier import build_niemeier
from .permgroup import PermGroup, orbits, parse_cycles, index_label
from .verify import Verifier, summarize

REPORT_SCHEMA = 1

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_DATA = 3


def _build_parser():
    p = argparse.ArgumentParser(
        prog="nv",
        description="Exact verification of Niemeier lattice degenerations.")
    p.add_argument("--apply-corrections", action="store_true",
                   help="verify data-suspect cases with corrections applied "
                        "(their verdicts stay DATA-SUSPECT)")
    p.add_argument("--jobs", type=int, default=1, metavar="K",
                   help="parallel workers for case verification")
    p.add_argument("--oracle-bound", type=int, default=4096, metavar="B",
                   help="largest group order for the brute-force form oracle")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct a Niemeier model")
    b.add_argument("model", choices=["N21", "N22", "N23"])

    g = sub.add_parser("genus", help="canonical genus symbol of a Gram matrix")
    g.add_argument("gram", help="JSON file holding an integer Gram matrix")
    g.add_argument("--negative", action="store_true",
                   help="treat the matrix as the negative definite model")

    o = sub.add_parser("orbits", help="orbit partitions of a proof case file")
    o.add_argument("case", help="JSON file in the proof-case schema")

    v = sub.add_parser("verify", help="run verification checks")
    vsub = v.add_subparsers(dest="target", required=True)
    vt = vsub.add_parser("table", help="internal consistency of one table")
    vt.add_argument("number", type=int, choices=[1, 2, 3, 4])
    vc = vsub.add_parser("case", help="verify proof cases")
    vc.add_argument("which", help="case number 1-82, or 'all'")
    vs = vsub.add_parser("subgroups", help="verify the subgroup list")
    vs.add_argument("--search", action="store_true",
                    help="exhaustive subgroup search for containers of "
                         "order <= 64")

    r = sub.add_parser("report", help="run everything and emit a report")
    r.add_argument("--format", choices=["json", "text"], default="text")
    r.add_argument("--search", action="store_true",
                   help="include subgroup search mode")
    return p


def _print_reports(reports, verbose=True):
    for rep in sorted(reports, key=lambda r: r.id):
        print("%-12s %s (%.1fs)" % (rep.verdict(), rep.id, rep.seconds))
        if verbose:
            for name, expected, computed, verdict in rep.checks:
                if verdict == "PASS":
                    continue
                print("    %-12s %s: expected %s, computed %s"
                      % (verdict, name, expected, computed))
    counts = summarize(reports)
    print("summary: %d PASS, %d FAIL, %d SKIP, %d DATA-SUSPECT"
          % (counts["PASS"], counts["FAIL"], counts["SKIP"],
             counts["DATA-SUSPECT"]))
    return counts


def _exit_code(reports):
    return EXIT_FAIL if any(r.verdict() == "FAIL" for r in reports) else EXIT_OK


def _cmd_build(args):
    model = build_niemeier(args.model)
    N = model.lattice
    print("model %s" % args.model)
    for row in N.gram():
        print(" ".join("%3d" % x for x in row))
    print("det %d" % N.det())
    print("roots %d" % (2 * len(short_vectors(N, 2))))
    return EXIT_OK


def _cmd_genus(args):
    try:
        with open(args.gram) as fh:
            G = json.load(fh)
    except (OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_DATA
    n = len(G)
    basis = [[int(i == j) for j in range(n)] for i in range(n)]
    try:
        L = Lattice(G, basis, 1, sign="neg" if args.negative else "pos")
        sym = genus_symbol(discriminant_form(L))
    except (LatticeError, Exception) as exc:
        if isinstance(exc, (LatticeError, ValueError)) or \
                type(exc).__name__ == "FormError":
            print("error: %s" % exc, file=sys.stderr)
            return EXIT_DATA
        raise
    print(render_symbol(sym))
    return EXIT_OK


def _cmd_orbits(args):
    try:
        with open(args.case) as fh:
            rec = json.load(fh)
    except (OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_DATA
    try:
        markings = rec["markings"]
    except (TypeError, KeyError):
        print("error: file is not in the proof-case schema", file=sys.stderr)
        return EXIT_DATA
    for mk in markings:
        model_id = mk["model"]
        gens = [parse_cycles(t, model_id) for t in mk["big"]["generators"]]
        G = PermGroup(gens, model_id)
        print("model %s, |G| = %d" % (model_id, G.order()))
        for orb in orbits(G):
            print("  {%s}" % ", ".join(index_label(i, model_id) for i in orb))
    return EXIT_OK


def _cmd_verify(args):
    verifier = Verifier(apply_corrections=args.apply_corrections,
                        oracle_bound=args.oracle_bound)
    if args.target == "table":
        reports = verifier.verify_table(args.number)
    elif args.target == "case":
        if args.which == "all":
            reports = verifier.run_all(tables=False, cases=True,
                                       subgroups=False, jobs=args.jobs)
        else:
            try:
                no = int(args.which)
            except ValueError:
                print("error: case must be a number or 'all'", file=sys.stderr)
                return EXIT_USAGE
            if no not in verifier.dataset.cases:
                print("error: no such case %d" % no, file=sys.stderr)
                return EXIT_DATA
            t0 = time.time()
            rep = verifier.verify_case(no)
            rep.seconds = time.time() - t0
            reports = [rep]
    else:
        reports = [verifier.verify_subgroup_entry(entry, args.search)
                   for entry in verifier.dataset.subgroups]
    _print_reports(reports)
    return _exit_code(reports)


def _cmd_report(args):
    verifier = Verifier(apply_corrections=args.apply_corrections,
                        oracle_bound=args.oracle_bound)
    reports = verifier.run_all(search=args.search, jobs=args.jobs)
    reports.sort(key=lambda r: r.id)
    if args.format == "json":
        payload = {
            "schema": REPORT_SCHEMA,
            "summary": summarize(reports),
            "reports": [r.to_json() for r in reports],
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        _print_reports(reports)
    return _exit_code(reports)


def cli_main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "build":
            return _cmd_build(args)
        if args.command == "genus":
            return _cmd_genus(args)
        if args.command == "orbits":
            return _cmd_orbits(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_report(args)
    except DatasetError as exc:
        print("data error: %s" % exc, file=sys.stderr)
        return EXIT_DATA


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
