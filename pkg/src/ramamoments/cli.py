"""``ramamoments`` command-line front end.

Exit status: 0 on success, 2 on argument/budget errors, 1 when a
verification fails (a JSON diagnostic goes to stdout).
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import random
import sys
import time
from typing import Any, Callable

from . import _accel
from .arith import DEFAULT_MAX_MEMORY, build_sieves
from .checks import run_selfcheck
from .dirichlet import verify_factorization, verify_remark_local
from .errors import ArgumentError, ConfigurationError, RamaError, ResourceError, VerificationError
from .moments import MOMENT_Y_BUDGET, enumeration_budget, fit_log_poly, moment, sample_t_average, t_average
from .multivar import f_direct, f_multiplicative, nonnegativity_scan
from .ramanujan import cohen_sum, column_sum, growth_csv, rh_growth_report

JSON_SAFE_INT = 2**53

def jsonable(value: Any) -> Any:
    """Integers beyond 2**53 become decimal strings."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value) if abs(value) > JSON_SAFE_INT else value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def int_tuple(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"tuple entries must be positive: {text!r}")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "csv", "json"), default=None,
                        help="output format (default: text; json for fit)")
    common.add_argument("--workers", type=positive_int, default=1, help="worker threads for kernels")
    common.add_argument("--budget", type=positive_int, default=None,
                        help="cap on enumeration counts (overrides RAMA_BUDGET)")
    common.add_argument("--max-memory", type=positive_int, default=DEFAULT_MAX_MEMORY,
                        help="sieve memory ceiling in bytes")

    parser = argparse.ArgumentParser(
        prog="ramamoments",
        description="Ramanujan sums, their moments and the multiplicative function behind them.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_)

    p = add("csum", "sum over q <= x of c_q^beta(n)")
    p.add_argument("--x", type=positive_int, required=True)
    p.add_argument("--n", type=positive_int, required=True)
    p.add_argument("--beta", type=positive_int, default=1)

    p = add("cohen", "Cohen-Ramanujan sum c_q^beta(n)")
    p.add_argument("--q", type=positive_int, required=True)
    p.add_argument("--n", type=positive_int, required=True)
    p.add_argument("--beta", type=positive_int, default=1)

    p = add("f", "evaluate f_beta(n_1, ..., n_k)")
    p.add_argument("--tuple", type=int_tuple, required=True, dest="values")
    p.add_argument("--beta", type=positive_int, default=1)
    p.add_argument("--method", choices=("multiplicative", "direct"), default="multiplicative")

    p = add("moment", "S_k(x, y)")
    p.add_argument("--x", type=positive_int, required=True)
    p.add_argument("--y", type=positive_int, required=True)
    p.add_argument("--k", type=positive_int, required=True)
    p.add_argument("--beta", type=positive_int, default=1)
    p.add_argument("--route", choices=("direct", "identity"), default="direct")

    p = add("tavg", "box sum T_k(x) of f")
    p.add_argument("--x", type=positive_int, required=True)
    p.add_argument("--k", type=positive_int, required=True)
    p.add_argument("--beta", type=positive_int, default=1)

    p = add("fit", "fit T_k(x)/x^k by a polynomial in log x")
    p.add_argument("--k", type=positive_int, required=True)
    p.add_argument("--xmin", type=positive_int, required=True)
    p.add_argument("--xmax", type=positive_int, required=True)
    p.add_argument("--points", type=positive_int, default=10)
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--samples", default=None, help="also write the samples as CSV to this path")

    p = add("verify-factorization", "check F = prod zeta factors * E on a truncation box")
    p.add_argument("--k", type=positive_int, required=True)
    p.add_argument("--bound", type=positive_int, required=True)

    p = add("verify-local", "check the explicit local Euler factor of E")
    p.add_argument("--p", type=positive_int, required=True)
    p.add_argument("--k", type=positive_int, required=True)
    p.add_argument("--degree", type=positive_int, required=True)

    p = add("verify-nonneg", "scan f_beta for negative values")
    p.add_argument("--k", type=positive_int, required=True)
    p.add_argument("--max", type=positive_int, required=True, dest="limit")
    p.add_argument("--beta", type=positive_int, default=1)
    p.add_argument("--random", type=positive_int, default=None,
                   help="sample this many random tuples instead of the full box")
    p.add_argument("--seed", type=int, default=0)

    p = add("rh-report", "growth of sum_{q<=x} c_q(n) against x^(1/2+eps)")
    p.add_argument("--n", type=positive_int, required=True)
    p.add_argument("--x-max", type=positive_int, required=True)
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--points", type=positive_int, default=20)

    add("selfcheck", "run every verification suite at reduced scale")
    return parser


def _sieve_limit(args: argparse.Namespace) -> int:
    cmd = args.command
    if cmd in ("csum", "moment", "tavg"):
        return args.x
    if cmd == "cohen":
        return args.q
    if cmd == "f":
        return max(args.values)
    if cmd == "fit":
        return args.xmax
    if cmd == "verify-factorization":
        return args.bound
    if cmd == "verify-nonneg":
        return args.limit
    if cmd == "rh-report":
        return args.x_max
    return 1


def _validate(args: argparse.Namespace) -> None:
    """Reject bad parameters before any sieve or enumeration starts."""
    budget = enumeration_budget()
    cmd = args.command
    if cmd == "moment":
        if args.y > MOMENT_Y_BUDGET:
            raise ResourceError(f"y={args.y} exceeds the moment budget {MOMENT_Y_BUDGET}")
        if args.route == "identity" and args.x**args.k > budget:
            raise ResourceError(f"x^k = {args.x**args.k} exceeds budget {budget}")
    if cmd == "tavg" and args.x**args.k > budget:
        raise ResourceError(f"x^k = {args.x**args.k} exceeds budget {budget}")
    if cmd == "fit":
        if args.xmin < 2 or args.xmax <= args.xmin:
            raise ArgumentError("fit needs 2 <= xmin < xmax")
        if args.degree < 0:
            raise ArgumentError("degree must be non-negative")
    if cmd == "verify-local" and not (1 <= args.k <= 4):
        raise ArgumentError("verify-local supports 1 <= k <= 4")
    if cmd == "rh-report" and not (0 < args.epsilon <= 0.5):
        raise ArgumentError("epsilon must lie in (0, 1/2]")
    if cmd == "verify-nonneg" and args.random is None and args.limit**args.k > budget:
        raise ResourceError(f"box of {args.limit**args.k} tuples exceeds budget {budget}")


def _rows_csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


class _Output:
    def __init__(self, command: str, params: dict, fmt: str, write: Callable[[str], None]):
        self.command = command
        self.params = params
        self.fmt = fmt
        self.write = write
        self.start = time.perf_counter()

    def emit(self, result: Any, text: str | None = None, csv_text: str | None = None) -> None:
        if self.fmt == "json":
            payload = {
                "command": self.command,
                "params": jsonable(self.params),
                "result": jsonable(result),
                "elapsed_ms": round((time.perf_counter() - self.start) * 1000, 3),
            }
            self.write(json.dumps(payload, sort_keys=True) + "\n")
        elif self.fmt == "csv" and csv_text is not None:
            self.write(csv_text)
        else:
            self.write((text if text is not None else str(result)) + "\n")


def _run(args: argparse.Namespace, out: _Output) -> int:
    cmd = args.command
    if cmd == "selfcheck":
        ok = run_selfcheck(lambda line: out.write(line + "\n"))
        return 0 if ok else 1

    tables = build_sieves(max(2, _sieve_limit(args)), args.max_memory)

    if cmd == "csum":
        out.emit(column_sum(args.x, args.n, tables, args.beta))
    elif cmd == "cohen":
        out.emit(cohen_sum(args.q, args.n, args.beta, tables))
    elif cmd == "f":
        if args.method == "direct":
            value = f_direct(args.values, args.beta, tables)
        else:
            value = f_multiplicative(args.values, args.beta, tables)
        out.emit(value)
    elif cmd == "moment":
        res = moment(args.x, args.y, args.k, args.beta, tables, args.route)
        out.emit(res.value)
    elif cmd == "tavg":
        out.emit(t_average(args.x, args.k, args.beta, tables, args.workers))
    elif cmd == "fit":
        samples = sample_t_average(args.k, args.xmin, args.xmax, args.points, tables, args.workers)
        report = fit_log_poly(samples, args.k, args.degree)
        rows = [(x, f"{v:.15g}") for x, v in report.sample_points]
        csv_text = _rows_csv(["x", "normalized"], rows)
        if args.samples:
            with open(args.samples, "w", newline="") as fh:
                fh.write(csv_text)
        result = report.to_dict()
        result["raw_values"] = [[x, v] for x, v in samples]
        text = json.dumps(jsonable(result), sort_keys=True)
        out.emit(result, text=text, csv_text=csv_text)
    elif cmd == "verify-factorization":
        report = verify_factorization(args.k, args.bound, tables)
        out.emit(report, text=json.dumps(jsonable(report), sort_keys=True))
    elif cmd == "verify-local":
        report = verify_remark_local(args.p, args.k, args.degree)
        out.emit(report, text=json.dumps(jsonable(report), sort_keys=True))
    elif cmd == "verify-nonneg":
        if args.random is None:
            tuples = itertools.product(range(1, args.limit + 1), repeat=args.k)
            count = args.limit**args.k
        else:
            rng = random.Random(args.seed)
            tuples = [tuple(rng.randint(1, args.limit) for _ in range(args.k)) for _ in range(args.random)]
            count = args.random
        bad = nonnegativity_scan(tuples, args.beta, tables)
        report = {"checked": count, "violations": len(bad), "examples": [[list(t), v] for t, v in bad[:10]]}
        if bad and args.beta == 1:
            raise VerificationError("negative f value", report)
        out.emit(report, text=json.dumps(jsonable(report), sort_keys=True))
    elif cmd == "rh-report":
        rows = rh_growth_report(args.n, args.x_max, args.epsilon, tables, args.points)
        text = growth_csv(rows).rstrip("\n")
        out.emit([[r.x, r.sum, r.normalized] for r in rows], text=text, csv_text=growth_csv(rows))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    saved_budget = os.environ.get("RAMA_BUDGET")
    if args.budget is not None:
        os.environ["RAMA_BUDGET"] = str(args.budget)
    try:
        return _main(parser, args)
    finally:
        if saved_budget is None:
            os.environ.pop("RAMA_BUDGET", None)
        else:
            os.environ["RAMA_BUDGET"] = saved_budget


def _main(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    _accel.set_workers(args.workers)
    fmt = args.format or ("json" if args.command == "fit" else "text")
    params = {k: v for k, v in vars(args).items() if k not in ("command", "format")}
    out = _Output(args.command, params, fmt, sys.stdout.write)
    try:
        _validate(args)
        return _run(args, out)
    except VerificationError as exc:
        diag = {"command": args.command, "error": str(exc), "report": jsonable(exc.report)}
        sys.stdout.write(json.dumps(diag, sort_keys=True) + "\n")
        return 1
    except (ArgumentError, ConfigurationError, ResourceError) as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"ramamoments: error: {exc}\n")
        return 2
    except RamaError as exc:
        sys.stderr.write(f"ramamoments: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
