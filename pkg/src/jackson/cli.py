"""Command-line entry point: ``jackson constants | modulus | bestapprox | verify``."""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .constants import constants_table
from .errors import DomainError, JacksonError
from .minimax import best_approximation
from .periodic import ACCEPTANCE_GRID, DEFAULT_GRID, FAMILIES, build_family
from .smoothness import DEFAULT_STEP_GRID, modulus
from .verify import THEOREMS, ConfigError, RunConfig, default_config, run, write_reports

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _param(text: str) -> tuple[str, object]:
    key, sep, raw = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    try:
        return key, json.loads(raw)
    except json.JSONDecodeError:
        return key, raw


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jackson", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", help="Favard constants, alpha, beta, c1, c2 and the envelope")
    c.add_argument("--max-m", type=int, default=8)
    c.add_argument("--k-max", type=int, default=30)
    c.add_argument("--format", choices=("json", "csv"), default="json")

    fam_help = "family name: " + ", ".join(FAMILIES)
    m = sub.add_parser("modulus", help="grid modulus of smoothness of a family member")
    m.add_argument("--family", required=True, help=fam_help)
    m.add_argument("--param", type=_param, action="append", default=[], metavar="KEY=VALUE")
    m.add_argument("--m", type=int, required=True)
    m.add_argument("--delta", type=float, required=True)
    m.add_argument("--grid", type=int, default=DEFAULT_GRID)
    m.add_argument("--step-grid", type=int, default=DEFAULT_STEP_GRID)

    b = sub.add_parser("bestapprox", help="discrete minimax approximation error E_n")
    b.add_argument("--family", required=True, help=fam_help)
    b.add_argument("--param", type=_param, action="append", default=[], metavar="KEY=VALUE")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--grid", type=int, default=ACCEPTANCE_GRID)
    b.add_argument("--tol", type=float, default=1e-10)

    v = sub.add_parser("verify", help="run an inequality sweep and write JSON/CSV reports")
    v.add_argument("--theorem", required=True, choices=THEOREMS)
    v.add_argument("--config", help="JSON run configuration (default: built-in acceptance sweep)")
    v.add_argument("--out", default="reports")
    return p


def _constants(args) -> int:
    table = constants_table(args.max_m, args.k_max)
    rows = table.rows()
    if args.format == "json":
        print(json.dumps(rows, indent=2))
    else:
        w = csv.DictWriter(sys.stdout, fieldnames=("name", "index", "value"), lineterminator="\r\n")
        w.writeheader()
        w.writerows({**r, "value": repr(r["value"])} for r in rows)
    return EXIT_OK


def _family(args):
    if args.family not in FAMILIES:
        raise ConfigError(f"unknown family {args.family!r}")
    try:
        return build_family(args.family, **dict(args.param))
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {args.family}: {exc}") from exc


def _modulus(args) -> int:
    f = _family(args)
    value = modulus(f, args.m, args.delta, args.grid, args.step_grid)
    print(json.dumps({"family": args.family, "params": dict(args.param), "m": args.m,
                      "delta": args.delta, "grid": args.grid, "step_grid": args.step_grid,
                      "value": value}, indent=2))
    return EXIT_OK


def _bestapprox(args) -> int:
    f = _family(args)
    r = best_approximation(f, args.n, args.grid, args.tol)
    print(json.dumps({"family": args.family, "params": dict(args.param), "n": args.n,
                      "grid": r.grid, "error_level": r.error_level, "max_error": r.max_error,
                      "upper_bound": r.upper_bound if r.upper_bound != float("inf") else None,
                      "iterations": r.iterations, "converged": r.converged,
                      "alternations": r.alternations(), "certificate": r.certificate_ok(),
                      "reference": r.reference.tolist()}, indent=2))
    return EXIT_OK if r.converged else EXIT_FAIL


def _verify(args) -> int:
    cfg = RunConfig.from_file(args.config) if args.config else default_config(args.theorem)
    reports = run(args.theorem, cfg)
    jpath, cpath = write_reports(reports, args.out, f"theorem_{args.theorem}")
    failed = sum(not r.passed for r in reports)
    print(f"theorem {args.theorem}: {len(reports)} checks, {failed} failed -> {jpath}, {cpath}")
    return EXIT_FAIL if failed else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"constants": _constants, "modulus": _modulus,
               "bestapprox": _bestapprox, "verify": _verify}[args.command]
    try:
        return handler(args)
    except (ConfigError, DomainError) as exc:
        print(f"jackson: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except JacksonError as exc:
        print(f"jackson: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"jackson: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
