"""
Command-line front end.

Every command prints one JSON document on standard output. Exit codes:
0 success, 1 usage or solver error, 2 unreadable document, 3 verification
mismatch.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time
from fractions import Fraction

from .cut import solve_fixed_lambda
from .documents import (dump_path, encode_scalar, instance_document, load_path,
                        parse_instance, path_csv_rows)
from .errors import FusedPathError, ParseError
from .fusing import lambda_max
from .oracle import sweep, verify_path
from .path import eval_path, inverse_query, solve_full_path

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_MISMATCH = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(doc, out=None) -> None:
    text = json.dumps(doc, indent=1)
    if out is None:
        print(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _scalars(x) -> list:
    return [encode_scalar(v) for v in x]


def _interval(iv) -> list:
    return [iv.lo, iv.hi]


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.instance))
    x = solve_fixed_lambda(inst, args.lam)
    _emit({"lambda": args.lam, "solution": _scalars(x)})
    return EXIT_OK


def cmd_path(args) -> int:
    inst = parse_instance(_read(args.instance))
    path = solve_full_path(inst)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(dump_path(path) + "\n")
    else:
        print(dump_path(path))
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["node", "lambda_lo", "lambda_hi", "value"])
            writer.writerows(path_csv_rows(path))
    return EXIT_OK


def cmd_eval(args) -> int:
    path = load_path(_read(args.path))
    _emit({"lambda": args.lam, "solution": _scalars(eval_path(path, args.lam))})
    return EXIT_OK


def cmd_inverse(args) -> int:
    path = load_path(_read(args.path))
    try:
        res = inverse_query(path, args.i_from, args.i_to, args.value_index)
    except IndexError as exc:
        raise UsageError(str(exc)) from None
    value = path.inst.events[args.value_index].value
    _emit({
        "from": args.i_from, "to": args.i_to, "value_index": args.value_index,
        "value": encode_scalar(value),
        "intervals": None if res is None else [_interval(iv) for iv in res],
    })
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = parse_instance(_read(args.instance))
    path = solve_full_path(inst)
    report = verify_path(path, sweep(inst, args.max_lambda, args.mode))
    n_bad = len(report.mismatches)
    _emit({
        "max_lambda": args.max_lambda,
        "mode": args.mode,
        "fusing_values": path.lambdas,
        "mismatches": [str(m) for m in report.mismatches],
        "summary": f"{n_bad} mismatches",
    })
    return EXIT_OK if n_bad == 0 else EXIT_MISMATCH


def run_bench(inst, queries: int, seed: int = 0) -> dict:
    """Time ``queries`` lookups on a freshly built path against as many direct solves."""
    rng = random.Random(seed)
    hi = lambda_max(inst) + 3
    lams = [rng.randint(0, hi) for _ in range(queries)]

    t0 = time.perf_counter()
    path = solve_full_path(inst)
    t1 = time.perf_counter()
    via_path = [eval_path(path, lam) for lam in lams]
    t2 = time.perf_counter()
    direct = [solve_fixed_lambda(inst, lam) for lam in lams]
    t3 = time.perf_counter()

    path_total = t2 - t0
    return {
        "n": inst.n, "q": inst.q, "queries": queries,
        "build_seconds": t1 - t0,
        "query_seconds": t2 - t1,
        "path_seconds": path_total,
        "direct_seconds": t3 - t2,
        "ratio": (t3 - t2) / path_total if path_total > 0 else float("inf"),
        "agree": via_path == direct,
        "fusing_solves": path.schedule.n_solves,
    }


def cmd_bench(args) -> int:
    inst = parse_instance(_read(args.instance))
    report = run_bench(inst, args.queries, args.seed)
    _emit(report)
    return EXIT_OK if report["agree"] else EXIT_MISMATCH


def cmd_linearize(args) -> int:
    inst = parse_instance(_read(args.instance))
    _emit(instance_document(inst).to_json())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fusedpath", description="Integer-lambda solution paths of the fused lasso "
                "with convex piecewise-linear losses.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="solve for one lambda")
    s.add_argument("instance")
    s.add_argument("--lambda", dest="lam", type=_nonneg_int, required=True)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("path", help="compute the full solution path")
    s.add_argument("instance")
    s.add_argument("-o", "--output", help="write the path document here instead of stdout")
    s.add_argument("--csv", help="also write a (node, lambda_lo, lambda_hi, value) step table")
    s.set_defaults(func=cmd_path)

    s = sub.add_parser("eval", help="read the solution at one lambda off a path document")
    s.add_argument("--path", required=True)
    s.add_argument("--lambda", dest="lam", type=_nonneg_int, required=True)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("inverse", help="lambdas where nodes FROM..TO all equal breakpoint K's value")
    s.add_argument("--path", required=True)
    s.add_argument("--from", dest="i_from", type=int, required=True, help="first node (0-based)")
    s.add_argument("--to", dest="i_to", type=int, required=True, help="last node (0-based)")
    s.add_argument("--value-index", type=int, required=True,
                   help="index into the sorted breakpoint list (0-based)")
    s.set_defaults(func=cmd_inverse)

    s = sub.add_parser("verify", help="compare the path with brute force for lambda 0..H")
    s.add_argument("instance")
    s.add_argument("--max-lambda", type=_nonneg_int, required=True)
    s.add_argument("--mode", choices=("maximal", "full", "objective"), default="maximal")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("bench", help="path lookups versus independent solves")
    s.add_argument("instance")
    s.add_argument("--queries", type=_nonneg_int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("linearize", help="print the instance with every loss as explicit pwl")
    s.add_argument("instance")
    s.set_defaults(func=cmd_linearize)
    return p


def _nonneg_int(text: str) -> int:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v.denominator != 1 or v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return int(v)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FusedPathError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
