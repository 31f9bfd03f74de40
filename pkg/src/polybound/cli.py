"""Command-line front end.

stdout carries only machine-readable output (JSON or CSV); logs and error
payloads go to stderr. Exit codes: 0 ok, 1 table mismatch, 2 input or domain
error, 3 convergence failure, 4 cache I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from . import __version__
from .anharmonic import (
    AnharmonicModel,
    FullParameterSet,
    bhattacharya_energy,
    dasgupta_energy,
    energy_of_lambda,
    lambda_of_energy,
    reduce_parameters,
    sweep,
)
from .constants import LOG_LEVEL_ENV_VAR
from .envelope import bounds_report
from .errors import InputValidationError, PolyboundError, TableMismatchError
from .logger import WorkbenchLogger
from .models import SolverConfig, make_state
from .pnumbers import PCache, p_gamma_record, p_lookup
from .radial_solver import solve
from .reproduce import Reproducer, to_csv, to_json
from .results import SweepRow, round_sig
from .specfile import load_spec

_LOGGER = WorkbenchLogger(name="polybound.cli")

_BOUND_KINDS = ("lower", "upper", "mixed", "gamma-lower", "gamma-upper")


def _emit(payload: Any) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _config(args: argparse.Namespace) -> SolverConfig:
    tol = getattr(args, "tol", None)
    try:
        return SolverConfig() if tol is None else SolverConfig(abs_tol=tol)
    except ValidationError as exc:
        raise InputValidationError(
            f"invalid solver tolerance: {exc.errors()[0]['msg']}",
            context={"tol": tol},
            cause=exc,
        ) from exc


def _cache(args: argparse.Namespace) -> PCache:
    return PCache.open(args.cache)


def cmd_solve(args: argparse.Namespace) -> int:
    spec = load_spec(args.spec)
    if args.d is not None:
        spec = spec.with_dimension(args.d)
    state = make_state(args.n, args.l, spec.d)
    result = solve(spec, state, _config(args))
    _emit(result.dict())
    return 0


def cmd_pnumber(args: argparse.Namespace) -> int:
    if args.source == "auto":
        state = make_state(args.n, args.l, args.d)
        record = p_lookup(args.q, state, _config(args), _cache(args))
    else:
        if args.n != 1 or args.l != 0:
            raise InputValidationError(
                "Gamma P estimates apply to the ground state (n=1, l=0) only",
                context={"n": args.n, "l": args.l, "source": args.source},
            )
        kind = "lower" if args.source == "gamma-lower" else "upper"
        record = p_gamma_record(args.q, args.d, kind)
    _emit(record.dict())
    return 0


def cmd_bounds(args: argparse.Namespace) -> int:
    spec = load_spec(args.spec)
    if args.d is not None:
        spec = spec.with_dimension(args.d)
    state = make_state(args.n, args.l, spec.d)
    report = bounds_report(spec, state, _config(args), _cache(args), with_exact=args.with_exact)
    _emit(report.dict())
    return 0


def _model(args: argparse.Namespace, lam: float = 0.0) -> AnharmonicModel:
    state = make_state(args.n, args.l, args.d)
    return AnharmonicModel.theorem(args.kind, args.m, lam, state, _config(args), _cache(args))


def cmd_anharmonic(args: argparse.Namespace) -> int:
    action = args.action
    if action == "energy":
        model = _model(args, args.lam)
        _emit(
            {
                "m": args.m,
                "lambda": args.lam,
                "kind": args.kind,
                "alpha": round_sig(model.alpha),
                "beta": round_sig(model.beta),
                "energy": round_sig(energy_of_lambda(args.lam, model)),
            }
        )
    elif action == "lambda":
        model = _model(args)
        _emit(
            {
                "m": args.m,
                "energy": args.energy,
                "kind": args.kind,
                "lambda": round_sig(lambda_of_energy(args.energy, model)),
            }
        )
    elif action == "scale":
        try:
            full = FullParameterSet(omega=args.omega, a=args.a, b=args.b, m=args.m)
        except ValidationError as exc:
            raise InputValidationError(
                f"invalid parameters: {exc.errors()[0]['msg']}",
                context={"omega": args.omega, "a": args.a, "b": args.b, "m": args.m},
                cause=exc,
            ) from exc
        lam, scale = reduce_parameters(full)
        payload: dict[str, Any] = {"lambda": round_sig(lam), "energy_scale": round_sig(scale)}
        if args.kind:
            reduced = energy_of_lambda(lam, _model(args, lam))
            payload["kind"] = args.kind
            payload["energy"] = round_sig(scale * reduced)
        _emit(payload)
    elif action == "compare":
        payload = {"m": args.m, "lambda": args.lam}
        payload["bhattacharya"] = round_sig(bhattacharya_energy(args.lam, args.m, args.k0))
        if args.k is not None:
            payload["dasgupta"] = round_sig(dasgupta_energy(args.lam, args.m, args.level, args.k))
        _emit(payload)
    else:
        rows = sweep(
            args.m,
            args.lambdas,
            make_state(args.n, args.l, args.d),
            _config(args),
            _cache(args),
            with_exact=args.with_exact,
        )
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(SweepRow.COLUMNS)
        for row in rows:
            writer.writerow("" if value is None else f"{value:.10g}" for value in row.values())
        sys.stdout.write(buffer.getvalue())
    return 0


def cmd_reproduce(args: argparse.Namespace) -> int:
    result = Reproducer.run(args.table, tol=args.tol, cache=_cache(args))
    text = to_csv(result) if args.format == "csv" else to_json(result)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if result.ok:
        return 0
    error = TableMismatchError(
        f"{len(result.mismatches)} cell(s) of table {result.table} outside tolerance",
        context={
            "cells": [
                {"key": key, "column": cell.column, "computed": cell.computed, "printed": cell.printed}
                for key, cell in result.mismatches
            ]
        },
    )
    _LOGGER.log_exception(error)
    return error.exit_code


def cmd_cache(args: argparse.Namespace) -> int:
    cache = _cache(args)
    if args.action == "show":
        _emit({"stats": cache.stats(), "records": [record.dict() for record in cache.records()]})
    elif args.action == "clear":
        path = cache.path
        _emit({"path": str(path), "cleared": cache.clear()})
    else:
        state = make_state(args.n, args.l, args.d)
        cfg = _config(args)
        records = [p_lookup(q, state, cfg, cache) for q in args.q]
        _emit({"stats": cache.stats(), "records": [record.dict() for record in records]})
    return 0


def _add_state(parser: argparse.ArgumentParser, *, d_default: int | None = 3) -> None:
    parser.add_argument("--n", type=int, default=1, help="principal index (>= 1)")
    parser.add_argument("--l", type=int, default=0, help="angular momentum (>= 0)")
    parser.add_argument("--d", type=int, default=d_default, help="spatial dimension")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polybound",
        description="Envelope bounds and exact eigenvalues for polynomial central potentials.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--cache", default=None, help="P-number cache file")
    parser.add_argument("--log-level", default=None, help="logging level (default WARNING)")

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--tol", type=float, default=None, help="solver absolute tolerance")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[solver], help="exact eigenvalue of a spec file")
    p.add_argument("spec")
    _add_state(p, d_default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("pnumber", parents=[solver], help="P-number of a pure power")
    p.add_argument("--q", type=float, required=True)
    _add_state(p)
    p.add_argument("--source", choices=("auto", "gamma-lower", "gamma-upper"), default="auto")
    p.set_defaults(func=cmd_pnumber)

    p = sub.add_parser("bounds", parents=[solver], help="envelope bound report of a spec file")
    p.add_argument("spec")
    _add_state(p, d_default=None)
    p.add_argument("--with-exact", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("anharmonic", help="r^2 + lambda r^{2m} algebra")
    actions = p.add_subparsers(dest="action", required=True)

    a = actions.add_parser("energy", parents=[solver], help="E(lambda)")
    a.add_argument("--m", type=int, default=2)
    a.add_argument("--lam", type=float, required=True)
    a.add_argument("--kind", choices=_BOUND_KINDS, default="mixed")
    _add_state(a, d_default=1)

    a = actions.add_parser("lambda", parents=[solver], help="lambda(E)")
    a.add_argument("--m", type=int, default=2)
    a.add_argument("--energy", type=float, required=True)
    a.add_argument("--kind", choices=_BOUND_KINDS, default="mixed")
    _add_state(a, d_default=1)

    a = actions.add_parser("scale", parents=[solver], help="(omega, a, b) reduction")
    a.add_argument("--omega", type=float, default=1.0)
    a.add_argument("--a", type=float, required=True)
    a.add_argument("--b", type=float, required=True)
    a.add_argument("--m", type=int, default=2)
    a.add_argument("--kind", choices=_BOUND_KINDS, default=None)
    _add_state(a, d_default=1)

    a = actions.add_parser("compare", help="comparison formulas")
    a.add_argument("--m", type=int, default=2)
    a.add_argument("--lam", type=float, required=True)
    a.add_argument("--k0", type=float, default=None, help="strong-coupling K0 override")
    a.add_argument("--k", type=float, default=None, help="excited-state constant K")
    a.add_argument("--level", type=int, default=0, help="excited-state index n >= 0")

    a = actions.add_parser("sweep", parents=[solver], help="plot-ready CSV over lambda")
    a.add_argument("--m", type=int, default=2)
    a.add_argument("--lambdas", type=float, nargs="+", required=True)
    a.add_argument("--with-exact", action="store_true")
    _add_state(a, d_default=1)
    p.set_defaults(func=cmd_anharmonic)

    p = sub.add_parser("reproduce", help="recompute a published table and diff it")
    p.add_argument("table", choices=("1", "2", "3", "text"))
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--tol", type=float, default=None, help="comparison tolerance")
    p.add_argument("--output", default=None, help="write to this file instead of stdout")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("cache", parents=[solver], help="P-number cache management")
    p.add_argument("action", choices=("show", "clear", "warm"))
    p.add_argument("--q", type=float, nargs="+", default=[4.0, 6.0, 8.0, 10.0, 12.0])
    _add_state(p, d_default=1)
    p.set_defaults(func=cmd_cache)
    return parser


def _configure_logging(level_name: str | None) -> None:
    name = (level_name or os.environ.get(LOG_LEVEL_ENV_VAR) or "WARNING").upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.log_level)
    try:
        return args.func(args)
    except PolyboundError as exc:
        payload = _LOGGER.log_exception(exc)
        sys.stderr.write(json.dumps({"error": payload}, default=str) + "\n")
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
