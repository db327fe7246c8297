"""Batch driver: verification suites, chain construction, algebra inspection.

Exit codes: 0 all checks passed, 1 at least one failed, 2 configuration or
input error, 3 time budget exceeded.  Reports append one JSON record per
check to --out; identical config and seed give identical records up to the
timing fields.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .chains import chain_extend, pencil_rank_sample
from .checks import GROUPS, RunConfig, _run_check_worker, run_check
from .liepoisson import builtin, lie_poisson, load_structure_constants
from .multivec import ham
from .polyalg import ParseError, PolyError, Polynomial
from .rationals import rational
from .report import BUDGET, VerificationReport
from .sl3family import family

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_BUDGET = 3


def _parse_b(text: str | None):
    if text is None or text == "symbolic":
        return None
    try:
        values = [rational(v) for v in text.split(",")]
    except Exception as exc:
        raise ValueError(f"bad --b list: {exc}") from exc
    if len(values) != 10:
        raise ValueError(f"--b needs 10 comma-separated rationals, got {len(values)}")
    return values


def _emit(report: VerificationReport, out_path: str | None) -> None:
    print(report.summary())
    if out_path:
        with open(out_path, "a") as fh:
            fh.write(report.to_json() + "\n")


def cmd_verify(args) -> int:
    target = args.target
    if target not in GROUPS:
        print(f"unknown verify target {target!r}; choose from {sorted(GROUPS)}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        b_values = _parse_b(args.b)
    except ValueError as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONFIG
    cfg = RunConfig(
        seed=args.seed,
        trials=args.trials,
        steps=args.steps,
        b_mode="symbolic" if args.b == "symbolic" else "sample",
        b_values=b_values,
        chart=args.chart,
        workers=args.workers,
        budget_seconds=args.budget_seconds,
    )
    names = list(GROUPS[target])
    started = time.monotonic()
    reports: list[VerificationReport] = []
    budget_hit = False

    def out_of_budget() -> bool:
        return (
            cfg.budget_seconds is not None
            and time.monotonic() - started > cfg.budget_seconds
        )

    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            futures = {}
            for name in names:
                if out_of_budget():
                    budget_hit = True
                    rep = VerificationReport(name, status=BUDGET)
                    reports.append(rep)
                    _emit(rep, args.out)
                    continue
                futures[name] = pool.submit(_run_check_worker, (name, cfg.to_dict()))
            for name, fut in futures.items():
                for rdict in fut.result():
                    rep = VerificationReport(**rdict)
                    reports.append(rep)
                    _emit(rep, args.out)
    else:
        for name in names:
            if out_of_budget():
                budget_hit = True
                rep = VerificationReport(name, status=BUDGET)
                reports.append(rep)
                _emit(rep, args.out)
                continue
            for rep in run_check(name, cfg):
                reports.append(rep)
                _emit(rep, args.out)

    n_fail = sum(1 for r in reports if r.status == "fail")
    n_budget = sum(1 for r in reports if r.status == BUDGET)
    print(f"-- {len(reports)} checks: {len(reports) - n_fail - n_budget} passed,"
          f" {n_fail} failed, {n_budget} over budget")
    if budget_hit:
        return EXIT_BUDGET
    return EXIT_FAIL if n_fail else EXIT_PASS


SEED_FUNCTIONS = ("x0", "C2", "B", "C3", "x0^2", "x0^3")


def cmd_chain(args) -> int:
    try:
        b = _parse_b(args.b)
    except ValueError as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONFIG
    if b is None:
        print("chain extension needs a numeric --b (symbolic-b solving is out of scope)",
              file=sys.stderr)
        return EXIT_CONFIG
    fam = family()
    ext = fam.ext
    pi1 = lie_poisson(ext)
    pi2 = fam.pi2(b)
    from .liepoisson import embed_poly

    named = {
        "x0": ext.coordinate("x0"),
        "C2": embed_poly(fam.C2, ext),
        "B": embed_poly(fam.C2, ext),
        "C3": embed_poly(fam.C3, ext),
        "x0^2": ext.coordinate("x0") ** 2,
        "x0^3": ext.coordinate("x0") ** 3,
    }
    if args.seed_function in named:
        f0 = named[args.seed_function]
    else:
        try:
            f0 = Polynomial.parse(args.seed_function, ext.vt)
        except ParseError as exc:
            print(f"cannot parse seed function: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    resid = ham(pi1, f0)
    if not resid.is_zero():
        print("seed function is not a Casimir of pi1; ham(pi1, f0) =", resid.format(),
              file=sys.stderr)
        return EXIT_CONFIG
    state = chain_extend(ext, pi1, pi2, f0, args.steps)
    rep = VerificationReport("chain")
    rep.kernel_dims = state.kernel_dims
    rep.details["members"] = [m.format() for m in state.members]
    rep.details["obstructed_at"] = state.obstructed_at
    if state.obstructed_at is not None:
        rep.status = "fail"
    for i, member in enumerate(state.members):
        print(f"f{i} = {member.format()}")
    print(f"kernel dims per step: {state.kernel_dims}")
    if state.obstructed_at is not None:
        print(f"chain obstructed at step {state.obstructed_at} (Jordan-type obstruction)")
    _emit(rep, args.out) if args.out else None
    return EXIT_PASS if state.obstructed_at is None else EXIT_FAIL


def cmd_algebra(args) -> int:
    if args.action == "info":
        try:
            chart = builtin(args.source)
        except PolyError as exc:
            print(exc, file=sys.stderr)
            return EXIT_CONFIG
    else:
        try:
            with open(args.source) as fh:
                chart = load_structure_constants(json.load(fh))
        except FileNotFoundError:
            print(f"no such file: {args.source}", file=sys.stderr)
            return EXIT_CONFIG
        except (PolyError, json.JSONDecodeError, KeyError) as exc:
            print(f"cannot load structure constants: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    P = lie_poisson(chart)
    sample = pencil_rank_sample(chart, P, points=20, seed=args.seed)
    print(f"name: {chart.name}")
    print(f"dimension: {chart.dim}")
    print(f"coordinates: {', '.join(chart.vt.coordinates)}")
    print("jacobi: pass")
    print(f"generic rank: {sample.generic_rank}  corank: {sample.generic_corank}")
    if chart.casimirs:
        print(f"registered casimirs: {', '.join(chart.casimirs)}")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clpoisson",
        description="Exact verification of centrally-linearizable Poisson pencils",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a named verification suite")
    v.add_argument("target", choices=sorted(GROUPS), help="check suite to run")
    v.add_argument("--chart", default="sl3")
    v.add_argument("--b", default=None, help='comma list of 10 rationals or "symbolic"')
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=500)
    v.add_argument("--steps", type=int, default=2)
    v.add_argument("--out", default=None, help="append JSON report records to this file")
    v.add_argument("--budget-seconds", type=float, default=None)
    v.add_argument("--workers", type=int, default=1)
    v.set_defaults(fn=cmd_verify)

    c = sub.add_parser("chain", help="extend a Magri-Lenard chain from a Casimir seed")
    c.add_argument("--seed", dest="seed_function", required=True,
                   help=f"seed function: one of {SEED_FUNCTIONS} or polynomial text")
    c.add_argument("--steps", type=int, default=2)
    c.add_argument("--b", required=True, help="comma list of 10 rationals")
    c.add_argument("--out", default=None)
    c.set_defaults(fn=cmd_chain)

    a = sub.add_parser("algebra", help="inspect a builtin chart or ingested constants")
    a.add_argument("action", choices=("info", "load"))
    a.add_argument("source", help="builtin name (info) or JSON path (load)")
    a.add_argument("--seed", type=int, default=0)
    a.set_defaults(fn=cmd_algebra)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (PolyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
