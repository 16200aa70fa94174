"""Command-line interface: ``nomiss clean | bench | gen | export``.

Exit codes: 0 success, 1 data error, 2 usage error, 3 time budget
expired without a solution.
"""

from __future__ import annotations

import argparse
import glob
import json
import logging
import os
import sys
from fractions import Fraction

from . import rowcol
from .bench import (ALGORITHMS, GAMMA0_ONLY, make_report, parse_gammas, run_bench, summarize,
                    timed_run, write_reports)
from .mask import (DEFAULT_MISSING_TOKENS, CleanConfig, MaskError, apply_selection, load_matrix)
from .maxcol import default_workers
from .synth import MaskSpec, generate, write_delimited

EXIT_OK, EXIT_DATA, EXIT_USAGE, EXIT_TIMEOUT = 0, 1, 2, 3

_DELIMS = {"comma": ",", "tab": "\t", "semicolon": ";"}


class UsageError(Exception):
    pass


def _fraction(text):
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0 <= q < 1:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1): {text!r}")
    return q


def _add_ingest(p):
    p.add_argument("--delimiter", default="comma",
                   help="comma, tab, semicolon or a single character (default: comma)")
    p.add_argument("--missing", action="append", metavar="TOKEN",
                   help="missing-value token, repeatable (default: NA, empty, ?)")
    p.add_argument("--header", action="store_true", help="first line holds column labels")
    p.add_argument("--row-ids", action="store_true", help="first field of each line is a label")


def _config(args, gamma=Fraction(0)) -> CleanConfig:
    delim = _DELIMS.get(args.delimiter, args.delimiter)
    if len(delim) != 1:
        raise UsageError(f"bad delimiter {args.delimiter!r}")
    tokens = tuple(args.missing) if args.missing else DEFAULT_MISSING_TOKENS
    return CleanConfig(gamma=gamma, missing_tokens=tokens, has_header=args.header,
                       has_row_ids=args.row_ids, delimiter=delim)


def _add_maxcol(p, budget):
    p.add_argument("--workers", type=int, default=None,
                   help="maxcol worker threads (default: $NOMISS_WORKERS or 1)")
    p.add_argument("--time-budget", type=float, default=budget,
                   help=f"maxcol time budget in seconds (default: {budget:g})")
    p.add_argument("--deterministic", action="store_true",
                   help="maxcol: ascending R on one worker")
    p.add_argument("--warm-start", choices=("combined", "nomiss", "mrclean", "none"),
                   default="combined")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nomiss", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("clean", help="clean one delimited file")
    p.add_argument("--input", required=True)
    p.add_argument("--gamma", type=_fraction, default=Fraction(0))
    p.add_argument("--algorithm", choices=ALGORITHMS, default="combined")
    p.add_argument("--tau", type=_fraction, default=None,
                   help="automiss overall missingness target (default: gamma)")
    p.add_argument("--output", help="cleaned file to write")
    p.add_argument("--report", help="JSON report path (default: stdout)")
    _add_ingest(p)
    _add_maxcol(p, 18000.0)

    p = sub.add_parser("bench", help="run algorithms over files and gammas")
    p.add_argument("--inputs", nargs="+", required=True,
                   help="files, directories or glob patterns")
    p.add_argument("--gammas", default="0,0.05,0.1")
    p.add_argument("--algorithms", default=",".join(ALGORITHMS))
    p.add_argument("--timeout", type=float, default=300.0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--csv", help="results table path")
    p.add_argument("--jsonl", help="JSON-lines report path")
    _add_ingest(p)

    p = sub.add_parser("gen", help="write a synthetic matrix with missing cells")
    p.add_argument("--mechanism", choices=("MCAR", "MAR", "MNAR"), default="MCAR")
    p.add_argument("--rate", type=float, default=0.05)
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--token", default="NA")
    p.add_argument("--output", required=True)

    p = sub.add_parser("export", help="write an integer program in LP format")
    p.add_argument("--input", required=True)
    p.add_argument("--model", choices=("rowcol", "element"), default="rowcol")
    p.add_argument("--gamma", type=_fraction, default=Fraction(0))
    p.add_argument("--output", required=True)
    _add_ingest(p)
    return parser


def _expand_inputs(items):
    paths = []
    for item in items:
        if os.path.isdir(item):
            paths += sorted(os.path.join(item, f) for f in os.listdir(item)
                            if os.path.isfile(os.path.join(item, f)))
        elif any(ch in item for ch in "*?["):
            paths += sorted(glob.glob(item))
        elif os.path.exists(item):
            paths.append(item)
    return paths


def cmd_clean(args) -> int:
    alg = args.algorithm
    if alg in GAMMA0_ONLY and args.gamma != 0:
        raise UsageError(f"--algorithm {alg} requires --gamma 0")
    config = _config(args, args.gamma)
    mask = load_matrix(args.input, config)
    workers = args.workers or default_workers()
    sel, secs, transposed = timed_run(alg, mask, args.gamma, workers=workers,
                                      time_budget=args.time_budget,
                                      deterministic=args.deterministic,
                                      warm_start=args.warm_start, tau=args.tau)
    if alg == "maxcol" and sel.optimal is False and sel.objective == 0:
        report = make_report(args.input, mask, None, alg, args.gamma, secs, transposed, "timeout")
        _emit(report.to_dict(), args.report)
        return EXIT_TIMEOUT
    report = make_report(args.input, mask, sel, alg, args.gamma, secs, transposed)
    if args.output:
        apply_selection(args.input, config, sel, args.output)
    _emit(report.to_dict(), args.report)
    return EXIT_OK


def _emit(obj, path):
    text = json.dumps(obj, indent=2)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_bench(args) -> int:
    paths = _expand_inputs(args.inputs)
    if not paths:
        raise UsageError("no input files found")
    algorithms = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    bad = [a for a in algorithms if a not in ALGORITHMS]
    if bad:
        raise UsageError(f"unknown algorithm(s): {', '.join(bad)}")
    try:
        gammas = parse_gammas(args.gammas)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc))
    config = _config(args)
    datasets = [(p, load_matrix(p, config)) for p in paths]
    reports = run_bench(datasets, gammas, algorithms, timeout=args.timeout,
                        workers=args.workers or default_workers())
    write_reports(reports, csv_path=args.csv, jsonl_path=args.jsonl)
    for line in summarize(reports):
        print(line)
    return EXIT_OK


def cmd_gen(args) -> int:
    if not 0 <= args.rate < 1:
        raise UsageError("--rate must lie in [0, 1)")
    if args.rows < 1 or args.cols < 1:
        raise UsageError("--rows and --cols must be positive")
    spec = MaskSpec(args.mechanism, args.rate, args.seed, args.rows, args.cols)
    values, valid = generate(spec)
    write_delimited(args.output, values, valid, token=args.token)
    return EXIT_OK


def cmd_export(args) -> int:
    mask = load_matrix(args.input, _config(args, args.gamma))
    fn = rowcol.export_rowcol_ip if args.model == "rowcol" else rowcol.export_element_ip
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(fn(mask, args.gamma))
    return EXIT_OK


_COMMANDS = {"clean": cmd_clean, "bench": cmd_bench, "gen": cmd_gen, "export": cmd_export}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"nomiss: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MaskError, OSError) as exc:
        print(f"nomiss: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
