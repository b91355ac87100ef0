"""Command-line front door: analyze | verify | search | lambda.

Exit codes: 0 pass, 1 mathematical failure, 2 input error, 3 internal error.
Diagnostics go to stderr; reports to stdout or the requested files.
"""

import argparse
import json
import sys

from . import curvefile, report, search
from .cache import NullCache, ResultCache
from .errors import CurveFileError, FrobtwistError
from .version import __version__


def _add_common(sp):
    sp.add_argument("input", help="curve file")
    sp.add_argument("--series-degree", type=int, default=None, metavar="N",
                    help="series truncation degree (default 2p^2+2)")
    sp.add_argument("--scan-degree-bound", type=int, default=6, metavar="B",
                    help="maximum place degree for the supersingular scan")
    sp.add_argument("--no-cache", action="store_true", help="disable the result cache")
    sp.add_argument("--cache-file", default=None, metavar="PATH",
                    help="cache path (default: INPUT.cache)")
    sp.add_argument("--timestamps", action="store_true",
                    help="include a generation timestamp in the report")
    sp.add_argument("--hbar-override", type=int, default=None, metavar="VALUE",
                    help="override the unramified-extension rank")
    sp.add_argument("--hbar-justification", default=None, metavar="TEXT",
                    help="required justification recorded with the override")
    sp.add_argument("--json", default=None, metavar="PATH",
                    help="also write the JSON report ('-' for stdout)")


def _options_from(args):
    if args.hbar_override is not None and not args.hbar_justification:
        raise CurveFileError("--hbar-override requires --hbar-justification")
    if args.no_cache:
        cache = NullCache()
    else:
        cache = ResultCache(args.cache_file or (args.input + ".cache"))
    override = None
    if args.hbar_override is not None:
        override = (args.hbar_override, args.hbar_justification)
    return report.AnalyzeOptions(
        series_degree=args.series_degree,
        scan_bound=args.scan_degree_bound,
        cache=cache,
        timestamps=args.timestamps,
        hbar_override=override,
    )


def _read_input(path):
    with open(path, "rb") as fh:
        return fh.read()


def _emit_json(rep, path):
    text = json.dumps(rep, sort_keys=True, separators=(",", ":")) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="frobtwist",
        description="Local and global invariants of elliptic curves over F_q(t) "
        "and their Frobenius twists, in exact arithmetic.",
    )
    ap.add_argument("--version", action="version", version=f"frobtwist {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("analyze", help="full report for every curve and lambda block")
    _add_common(sp)

    sp = sub.add_parser("verify", help="exit 0 only if every identity and check passes")
    _add_common(sp)

    sp = sub.add_parser("search", help="search for semistable ordinary example curves")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--degree-bound", type=int, default=2, metavar="D")
    sp.add_argument("--limit", type=int, default=5)
    sp.add_argument("--budget", type=int, default=search.DEFAULT_BUDGET,
                    help="maximum number of candidate models to examine")
    sp.add_argument("--output", default=None, metavar="PATH",
                    help="write the curves as a curve file (default stdout)")

    sp = sub.add_parser("lambda", help="lambda-module blocks only")
    _add_common(sp)

    args = ap.parse_args(argv)
    try:
        return _run(args)
    except CurveFileError as exc:
        print(f"frobtwist: input error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"frobtwist: i/o error: {exc}", file=sys.stderr)
        return 2
    except FrobtwistError as exc:
        print(f"frobtwist: internal error: {exc}", file=sys.stderr)
        return 3


def _run(args):
    if args.command == "search":
        res = search.find_semistable_ordinary_examples(
            args.q, args.p, args.degree_bound, args.limit, budget=args.budget
        )
        if not res.curves:
            print("frobtwist: no curves found within the bounds", file=sys.stderr)
        K = None
        if res.curves:
            K = res.curves[0].K
            named = [(f"c{i}", m) for i, m in enumerate(res.curves)]
            comment = (
                f"found by: frobtwist search --p {args.p} --q {args.q} "
                f"--degree-bound {args.degree_bound} --limit {args.limit}"
                + (" (budget exhausted: partial list)" if res.budget_exhausted else "")
            )
            text = curvefile.render_curve_file(K, named, comment=comment)
            if args.output:
                with open(args.output, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
        if res.budget_exhausted:
            print(
                f"frobtwist: search budget exhausted after {res.examined} models",
                file=sys.stderr,
            )
        return 0 if res.curves else 1

    cf = curvefile.parse(_read_input(args.input))
    opts = _options_from(args)

    if args.command == "lambda":
        cf.curves = []

    if args.command in ("analyze", "lambda"):
        rep = report.analyze(cf, opts)
        sys.stdout.write(report.render_text(rep))
        if args.json:
            _emit_json(rep, args.json)
        return 0

    # verify
    status, failures, rep = report.verify(cf, opts)
    if args.json:
        _emit_json(rep, args.json)
    for f in failures:
        print(f"frobtwist: FAIL: {f}", file=sys.stderr)
    if status == 0:
        print(f"frobtwist: all checks passed ({len(rep['curves'])} curve(s), "
              f"{len(rep['lambda_modules'])} lambda block(s))", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
