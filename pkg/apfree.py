#!/usr/bin/env python3
"""
APFREE - Command Line
Construct, verify and compare large 3AP-free subsets of {1, ..., N}.

Exit codes:
    0  ok
    1  verification failed (a progression was found / oracle not proven optimal)
    2  usage or parse error
    3  internal invariant breach (a set that should be certified is not)
"""

import sys
import time
import logging
import argparse
from pathlib import Path
from typing import List, Optional

from core.config import config
from core.errors import CertificationError, ParameterError
from core.models import DeletionStrategy, RunReport, SelectionCriterion
from engine.apcore import count_3aps, first_3ap, verify_ap_free
from engine.behrend import behrend_construct
from engine.bounds import bound_report
from engine.elkin import construct_with_report, derive_params
from engine.oracle import exact_r3
from engine.reporting import (
    parse_n_list, read_set_file, render_report, sweep_csv, sweep_row, write_set_file,
)

logger = logging.getLogger("apfree")

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


# ============== HELPERS ==============

def _params_from_args(args, n: int):
    return derive_params(
        n,
        c_delta=args.c_delta,
        trials=args.trials,
        seed=args.seed,
        d_override=getattr(args, "d_override", None),
        threads=args.threads,
    )


def _build(args, n: int):
    params = _params_from_args(args, n)
    return construct_with_report(
        params,
        threads=args.threads,
        strategy=DeletionStrategy(args.strategy),
        selection=SelectionCriterion(args.selection),
        complete=args.complete,
    )


def _run_report(command: str, built, elapsed_ms: float, behrend_size: Optional[int] = None) -> RunReport:
    params = built.params
    bounds = bound_report(params.n_limit, len(built.result), behrend_size)
    return RunReport(
        command=command,
        n_limit=params.n_limit,
        d=params.d,
        delta=params.delta,
        r=params.r,
        seed=params.master_seed,
        trials=params.trials,
        c_delta=params.c_delta,
        size=len(built.result),
        ap_count=count_3aps(built.result),
        elapsed_ms=elapsed_ms,
        volume_mean=params.volume.mean if params.volume else None,
        volume_std_error=params.volume.std_error if params.volume else None,
        floor=built.floor,
        shape_term=built.shape_term,
        behrend_size=behrend_size,
        behrend_bound=bounds.behrend_value,
        elkin_bound=bounds.elkin_value,
    )


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ============== COMMANDS ==============

def cmd_construct(args) -> int:
    start = time.perf_counter()
    built = _build(args, args.n)
    if not verify_ap_free(built.result):
        raise CertificationError("constructed set failed verification")
    elapsed = (time.perf_counter() - start) * 1000.0

    if args.out:
        write_set_file(args.out, built.result)
        logger.info(f"💾 set written to {args.out}")
    report = _run_report("construct", built, elapsed)
    _emit(render_report(report, args.report), args.report_file)
    return EXIT_OK


def cmd_verify(args) -> int:
    s = read_set_file(args.path, args.n)
    if verify_ap_free(s):
        print(f"✅ {args.path}: {len(s)} elements, no 3-term progression")
        return EXIT_OK
    triple = first_3ap(s)
    print(f"❌ {args.path}: progression {triple.as_tuple()}")
    return EXIT_VERIFY_FAILED


def cmd_compare(args) -> int:
    start = time.perf_counter()
    built = _build(args, args.n)
    baseline = behrend_construct(args.n)
    elapsed = (time.perf_counter() - start) * 1000.0
    report = _run_report("compare", built, elapsed, behrend_size=len(baseline))
    bounds = bound_report(args.n, len(built.result), len(baseline))
    _emit(render_report(report, args.report, bounds), args.report_file)
    return EXIT_OK


def cmd_sweep(args) -> int:
    rows = []
    for n in parse_n_list(args.n_list):
        built = _build(args, n)
        baseline = behrend_construct(n)
        bounds = bound_report(n, len(built.result), len(baseline))
        rows.append(sweep_row(
            n, built.params.d, built.params.delta, built.params.r,
            len(built.result), len(baseline), bounds,
        ))
        logger.info(f"📈 N={n}: torus {len(built.result)} vs digit sphere {len(baseline)}")
    sys.stdout.write(sweep_csv(rows))
    return EXIT_OK


def cmd_oracle(args) -> int:
    result = exact_r3(args.n, args.budget)
    print(f"r3({args.n}) = {result.r3} [{result.status.value}, {result.nodes_explored} nodes]")
    print("witness: " + " ".join(str(x) for x in result.witness.elements))
    return EXIT_OK if result.is_optimal else EXIT_VERIFY_FAILED


# ============== CLI ==============

def _add_construction_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trials", type=int, default=config.elkin.trials, help="Number of (theta, alpha) trials")
    p.add_argument("--seed", type=int, default=config.elkin.master_seed, help="Master seed")
    p.add_argument("--c-delta", type=float, default=config.elkin.c_delta, help="Constant in delta = c sqrt(d) N^(-2/d)")
    p.add_argument("--threads", type=int, default=config.elkin.threads, help="Worker threads (output is thread-count independent)")
    p.add_argument("--strategy", default=config.ap.deletion_strategy, choices=[s.value for s in DeletionStrategy])
    p.add_argument("--selection", default=config.elkin.selection, choices=[s.value for s in SelectionCriterion])
    p.add_argument(
        "--complete", action="store_true",
        help="Extend each trial to a maximal 3AP-free set; needed at small N such as 30,"
             " where the annulus covers a few percent of the torus and raw preimages are tiny")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apfree",
        description="ApFree - large 3AP-free subsets of {1..N}",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python apfree.py construct --n 1000 --seed 7 --trials 64 --out s.txt
  python apfree.py construct --n 30 --trials 256 --complete   # small N: complete to maximal sets
  python apfree.py verify s.txt
  python apfree.py compare --n 100000 --report md
  python apfree.py sweep --n-list 1000,10000,100000 --trials 32
  python apfree.py oracle --n 30
        """,
    )
    parser.add_argument("--debug", "-d", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="Build a certified set and write it")
    p.add_argument("--n", type=int, required=True, help="Upper end N of {1..N}")
    _add_construction_flags(p)
    p.add_argument("--d-override", type=int, default=None, help="Use this dimension instead of ceil(sqrt(2 log2 N))")
    p.add_argument("--out", help="Set file to write")
    p.add_argument("--report", default="json", choices=config.output.report_formats)
    p.add_argument("--report-file", help="Write the report here instead of stdout")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="Check a set file for 3-term progressions")
    p.add_argument("path", help="Set file")
    p.add_argument("--n", type=int, default=None, help="Range to enforce (defaults to the file's N header)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compare", help="Torus construction vs digit sphere at one N")
    p.add_argument("--n", type=int, required=True)
    _add_construction_flags(p)
    p.add_argument("--report", default="md", choices=config.output.report_formats)
    p.add_argument("--report-file")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="CSV of sizes and bounds over several N")
    p.add_argument("--n-list", required=True, help="Comma-separated N values")
    _add_construction_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="Exact r3(N) by branch and bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int, default=config.oracle.node_budget)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config.debug_mode = args.debug

    logging.basicConfig(
        level=logging.DEBUG if config.debug_mode else logging.INFO,
        format="%(asctime)s [%(levelname)s] %(message)s",
        stream=sys.stderr,
    )

    try:
        return args.func(args)
    except CertificationError as e:
        logger.critical(f"💀 internal invariant breach: {e}")
        return EXIT_INTERNAL
    except ParameterError as e:
        print(f"error: {e}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
