"""Batch front end: emit tables, run verifications, serialize certificates.

Exit codes: 0 all requested checks passed, 1 a check ran and was falsified,
2 usage error, 3 resource or time budget exhausted.  The distinction matters
in CI: "the conjectured relation broke" and "a flag was mistyped" must not
look the same.

Outputs are byte-identical for identical configuration and seed: every
serialization path sorts its keys and the sample points are derived from
(seed, index) only.  QONSAGER_WORKERS > 1 fans independent sub-checks out to
a process pool without changing any output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .coeffs import (
    CoefficientSystemError,
    PIPELINES,
    ShapeError,
    c_closed,
    c_from_polynomial,
    c_recursive,
    c_solve,
)
from .repcheck import (
    CalibrationError,
    MatrixReport,
    RepConstructionError,
    matrix_point,
    spectral_polynomial_check,
)
from .reducer import kernel_backend
from .verify import perturbed_table, verify_relation

EXIT_PASS = 0
EXIT_FALSIFIED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

_BOUNDS = {
    "coeffs": 32,
    "coeffs_solve": 7,
    "verify": 6,
    "verify_extended": 7,
    "cross_check": 16,
    "cross_check_solve": 7,
    "repcheck_default": 5,
    "spectral": 10,
}


class TimeBudgetExceeded(Exception):
    """Raised between work units when --time-budget has run out."""


class _Budget:
    def __init__(self, seconds: float | None):
        self.deadline = None if seconds is None else time.monotonic() + seconds

    def check(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise TimeBudgetExceeded


def _workers() -> int:
    raw = os.environ.get("QONSAGER_WORKERS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise SystemExit(
            f"qonsager: error: QONSAGER_WORKERS must be an integer, got {raw!r}"
        ) from exc
    return max(1, n)


def _pmap(fn, items):
    """Map preserving order, using a process pool when workers > 1."""
    n = _workers()
    if n <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _usage(message: str) -> int:
    print(f"qonsager: error: {message}", file=sys.stderr)
    return EXIT_USAGE


# ---------------------------------------------------------------------------
# coeffs
# ---------------------------------------------------------------------------


def _cmd_coeffs(args) -> int:
    limit = _BOUNDS["coeffs_solve"] if args.pipeline == "solve" else _BOUNDS["coeffs"]
    if not 1 <= args.r <= limit:
        return _usage(f"coeffs --r must be in 1..{limit} for pipeline {args.pipeline}")
    table = PIPELINES[args.pipeline](args.r)
    if args.format == "json":
        _emit(args, _json_dump(table.to_json_obj()))
    elif args.format == "csv":
        _emit(args, "\n".join(table.to_csv_rows()))
    else:
        lines = [f"# rank {table.r} coefficient table ({table.pipeline} pipeline)"]
        for (p, k) in sorted(table.entries):
            lines.append(f"c[{table.r},{p},{k}] = {table.entries[(p, k)]}")
        _emit(args, "\n".join(lines))
    return EXIT_PASS


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _verify_one(task) -> dict:
    r, pipeline, rho_zero, mutate = task
    table = PIPELINES[pipeline](r)
    if mutate is not None:
        table = perturbed_table(table, *mutate)
    cert = verify_relation(r, table=table, rho_zero=rho_zero)
    return cert.to_json_obj()


def _cmd_verify(args) -> int:
    bound = _BOUNDS["verify_extended"] if args.extended else _BOUNDS["verify"]
    if args.r is not None and args.max_r is not None:
        return _usage("verify takes --r or --max-r, not both")
    if args.r is None and args.max_r is None:
        return _usage("verify needs --r or --max-r")
    ranks = [args.r] if args.r is not None else list(range(1, args.max_r + 1))
    if any(not 1 <= r <= bound for r in ranks):
        hint = "" if args.extended else " (use --extended for 7)"
        return _usage(f"verify ranks must be in 1..{bound}{hint}")
    mutate = None
    if args.mutate:
        try:
            p, k = (int(x) for x in args.mutate.split(","))
            mutate = (p, k)
        except ValueError:
            return _usage("--mutate expects 'p,k' with integers")
    budget = _Budget(args.time_budget)
    results = []
    try:
        for r in ranks:
            budget.check()
            results.append(_verify_one((r, args.pipeline, args.rho_zero, mutate)))
    except TimeBudgetExceeded:
        _emit(args, _json_dump({"error": "time budget exceeded", "completed": results}))
        return EXIT_RESOURCE
    ok = all(item["zero"] for item in results)
    if args.format == "json":
        _emit(args, _json_dump(results if len(results) > 1 else results[0]))
    else:
        lines = [
            "r={r} pipeline={pipeline} zero={zero} residual_terms={residual_terms} "
            "peak_terms={peak_terms} ms={ms}".format(**item)
            for item in results
        ]
        lines.append(f"verified: {sum(1 for i in results if i['zero'])}/{len(results)}")
        _emit(args, "\n".join(lines))
    return EXIT_PASS if ok else EXIT_FALSIFIED


# ---------------------------------------------------------------------------
# cross-check
# ---------------------------------------------------------------------------


def _cross_check_one(task) -> tuple[int, bool]:
    r, with_solve = task
    tables = [c_recursive(r), c_closed(r), c_from_polynomial(r)]
    if with_solve:
        tables.append(c_solve(r))
    return r, all(t == tables[0] for t in tables[1:])


def _cmd_cross_check(args) -> int:
    if not 1 <= args.max_r <= _BOUNDS["cross_check"]:
        return _usage(f"cross-check --max-r must be in 1..{_BOUNDS['cross_check']}")
    if not 0 <= args.solve_max_r <= _BOUNDS["cross_check_solve"]:
        return _usage(f"--solve-max-r must be in 0..{_BOUNDS['cross_check_solve']}")
    budget = _Budget(args.time_budget)
    tasks = [(r, r <= args.solve_max_r) for r in range(1, args.max_r + 1)]
    try:
        budget.check()
        pairs = _pmap(_cross_check_one, tasks)
    except TimeBudgetExceeded:
        _emit(args, _json_dump({"error": "time budget exceeded"}))
        return EXIT_RESOURCE
    agreements = dict(sorted(pairs))
    ok = all(agreements.values())
    obj = {
        "max_r": args.max_r,
        "solve_max_r": args.solve_max_r,
        "ok": ok,
        "per_r": [{"r": r, "agree": v} for r, v in sorted(agreements.items())],
    }
    if args.format == "json":
        _emit(args, _json_dump(obj))
    else:
        lines = [f"r={r} agree={v}" for r, v in sorted(agreements.items())]
        lines.append(f"pipelines agree for all r <= {args.max_r}: {ok}")
        _emit(args, "\n".join(lines))
    return EXIT_PASS if ok else EXIT_FALSIFIED


# ---------------------------------------------------------------------------
# repcheck
# ---------------------------------------------------------------------------


def _matrix_point_task(task) -> dict:
    r, pipeline, seed, index = task
    table = PIPELINES[pipeline](r)
    return matrix_point(r, table, seed, index).to_json_obj()


def _cmd_repcheck(args) -> int:
    if not 1 <= args.r <= args.bound:
        return _usage(f"repcheck --r must be in 1..{args.bound} (see --bound)")
    if args.samples < 1:
        return _usage("--samples must be positive")
    tasks = [(args.r, args.pipeline, args.seed, i) for i in range(args.samples)]
    points = _pmap(_matrix_point_task, tasks)
    ok = all(p["zero"] for p in points)
    obj = {
        "r": args.r,
        "seed": args.seed,
        "pair": [0, 1],
        "samples": len(points),
        "all_zero": ok,
        "points": points,
    }
    if args.format == "json":
        _emit(args, _json_dump(obj))
    else:
        lines = [
            f"point {i}: zero={p['zero']} rho={p['calibration']['rho']} "
            f"matches_c_cbar={p['calibration']['matches_product']}"
            for i, p in enumerate(points)
        ]
        lines.append(f"all {len(points)} points zero: {ok}")
        _emit(args, "\n".join(lines))
    return EXIT_PASS if ok else EXIT_FALSIFIED


# ---------------------------------------------------------------------------
# spectral
# ---------------------------------------------------------------------------


def _cmd_spectral(args) -> int:
    if not 1 <= args.r <= _BOUNDS["spectral"]:
        return _usage(f"spectral --r must be in 1..{_BOUNDS['spectral']}")
    report = spectral_polynomial_check(args.r)
    if args.format == "json":
        _emit(args, _json_dump(report.to_json_obj()))
    else:
        lines = [f"oracle ok: {report.oracle.ok} (rho/C^2 = {report.oracle.rho_over_c2})"]
        lines.extend(
            f"offset {d:+d}: zero={z} allowed={report.allowed(d)}"
            for d, z in report.offsets
        )
        lines.append(f"band structure consistent: {report.ok}")
        _emit(args, "\n".join(lines))
    return EXIT_PASS if report.ok else EXIT_FALSIFIED


# ---------------------------------------------------------------------------
# parser and entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qonsager",
        description="Exact computation and verification of higher-order "
        "q-Onsager relations (kernel backend: %s)." % kernel_backend(),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_choices=("text", "json")):
        p.add_argument("--format", choices=fmt_choices, default="text")
        p.add_argument("--output", default=None, help="write output to this path")

    p = sub.add_parser("coeffs", help="emit one rank's coefficient table")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--pipeline", choices=sorted(PIPELINES), default="recursive")
    common(p, ("text", "json", "csv"))
    p.set_defaults(func=_cmd_coeffs)

    p = sub.add_parser("verify", help="reduce the rank-r relation to normal form")
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--max-r", type=int, default=None, dest="max_r")
    p.add_argument("--pipeline", choices=sorted(PIPELINES), default="recursive")
    p.add_argument("--rho-zero", action="store_true", dest="rho_zero",
                   help="verify the q-Serre degeneration with the truncated rule")
    p.add_argument("--extended", action="store_true",
                   help="lift the rank bound from 6 to 7")
    p.add_argument("--mutate", default=None, metavar="p,k",
                   help="perturb one table entry by q (falsification drill)")
    p.add_argument("--time-budget", type=float, default=None, dest="time_budget")
    common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("cross-check", help="compare the coefficient pipelines")
    p.add_argument("--max-r", type=int, required=True, dest="max_r")
    p.add_argument("--solve-max-r", type=int, default=0, dest="solve_max_r")
    p.add_argument("--time-budget", type=float, default=None, dest="time_budget")
    common(p)
    p.set_defaults(func=_cmd_cross_check)

    p = sub.add_parser("repcheck", help="matrix evidence in the evaluation representation")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--pipeline", choices=sorted(PIPELINES), default="recursive")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", type=int, default=_BOUNDS["repcheck_default"])
    common(p)
    p.set_defaults(func=_cmd_repcheck)

    p = sub.add_parser("spectral", help="eigenvalue band structure of the generating polynomial")
    p.add_argument("--r", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_spectral)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CoefficientSystemError, ShapeError, CalibrationError, RepConstructionError) as exc:
        report = {"falsified": True, "kind": type(exc).__name__, "detail": str(exc)}
        print(_json_dump(report), file=sys.stderr)
        return EXIT_FALSIFIED
    except MemoryError:
        print(_json_dump({"error": "out of memory"}), file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
