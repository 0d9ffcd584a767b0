"""Command-line entry point: run the verification suites and write their reports.

Exit status: 0 when every check passes, 1 when any fails, 2 for usage errors.
"""
from __future__ import annotations

import argparse
import sys

from .lie import LieError, group_from_name
from .report import (SUITES, ConfigError, SuiteConfig, convergence_table, quadrature_checks, report_csv,
                     report_json, run_suite, table_csv, table_json)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    if t == "j":
        t = "1j"
    try:
        return complex(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _levels(text: str) -> list:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"levels look like '1..5' or '1,2,4', got {text!r}") from None


def _tolerance(text: str):
    name, _, value = text.partition("=")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance overrides look like NAME=VALUE, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="moduli-lab", description=__doc__.splitlines()[0])
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--group", default=None,
                   help="structure group: su2, su3, gl2, u1, cstar (complex checks use gl2 for compact choices)")
    p.add_argument("--genus", type=int, default=1)
    p.add_argument("--holes", type=int, default=1)
    p.add_argument("--refine", type=int, default=0)
    p.add_argument("--tau1", type=_complex, default=1j)
    p.add_argument("--tau2", type=_complex, default=1j)
    p.add_argument("--pole-p", type=_complex, default=0.5)
    p.add_argument("--fourier-k", type=int, default=2)
    p.add_argument("--quad-depth", type=int, default=4)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=_tolerance, action="append", default=[], metavar="NAME=VALUE",
                   help="override the tolerance of one check (repeatable)")
    p.add_argument("--table", metavar="CHECK", default=None,
                   help=f"emit a convergence table for a quadrature check ({', '.join(quadrature_checks())})")
    p.add_argument("--levels", type=_levels, default=[1, 2, 3, 4, 5], help="refinement levels, e.g. 1..5")
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    return p


def config_from_args(args) -> SuiteConfig:
    try:
        group = None if args.group is None else group_from_name(args.group)
    except LieError as exc:
        raise ConfigError(str(exc)) from exc
    return SuiteConfig(suite=args.suite, group=group, genus=args.genus, holes=args.holes, refine=args.refine,
                       tau1=args.tau1, tau2=args.tau2, pole_p=args.pole_p, fourier_k=args.fourier_k,
                       quad_depth=args.quad_depth, trials=args.trials, seed=args.seed,
                       tolerances=dict(args.tol))


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        if args.table is not None:
            rows = convergence_table(cfg, args.table, args.levels)
            _emit(table_csv(rows) if args.format == "csv" else table_json(args.table, rows), args.out)
            return EXIT_OK
        reports = run_suite(cfg)
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(report_csv(reports) if args.format == "csv" else report_json(cfg, reports), args.out)
    for r in reports:
        status, rel = ("PASS", "<=") if r.passed else ("FAIL", ">")
        print(f"{status} {r.name}: {r.max_residual:.3e} {rel} {r.tolerance:.1e}", file=sys.stderr)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
