"""``qcvolume`` command line: solve, table, verify, realize, plotdata.

Exit codes: 0 success, 2 usage or domain error, 3 verification mismatch,
4 grid validation violations.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .closed_form import VolumeSign, extreme_volume
from .exact import render_rational
from .grid import grid_to_json, symmetric_grid, validate, volume
from .report import plot_records, records_csv, rows_csv, rows_json, run_verification, solution_dict, table_rows

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MISMATCH = 3
EXIT_VIOLATIONS = 4

REALIZE_MAX_DIM = 20


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _sign(text: str) -> VolumeSign:
    try:
        return VolumeSign.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _fmt_tuple(values) -> str:
    return "(" + ", ".join(render_rational(v) for v in values) + ")"


def cmd_solve(args) -> int:
    sol = extreme_volume(args.dim, args.sign)
    if args.json:
        print(json.dumps(solution_dict(sol), indent=2))
        return EXIT_OK
    a, b = render_rational(sol.box_edge_a), render_rational(sol.box_edge_b)
    print(f"d = {sol.d}")
    print(f"sign = {sol.sign.value}")
    print(f"i0 = {'n/a (small dimension)' if sol.i0 is None else sol.i0}")
    print(f"volume = {render_rational(sol.volume)}")
    print(f"box = [{a}, {b}]^{sol.d}")
    print(f"delta = {_fmt_tuple(sol.delta)}")
    print(f"q_levels = {_fmt_tuple(sol.q_levels)}")
    return EXIT_OK


def cmd_table(args) -> int:
    rows = table_rows(args.start, args.stop, args.sign)
    text = rows_csv(rows) if args.format == "csv" else rows_json(rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_plotdata(args) -> int:
    records = plot_records(args.start, args.stop)
    text = records_csv(records) if args.format == "csv" else json.dumps(records, indent=2) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = run_verification(args.reduced_max, args.full_max)
    for check in checks:
        print(check.line())
    failed = sum(not c.ok for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_MISMATCH


def cmd_realize(args) -> int:
    if args.dim > REALIZE_MAX_DIM:
        raise ValueError(f"realize is limited to d <= {REALIZE_MAX_DIM} (2^d grid values), got {args.dim}")
    sol = extreme_volume(args.dim, args.sign)
    grid = symmetric_grid(sol)
    if args.out:
        Path(args.out).write_text(grid_to_json(grid) + "\n")
    problems = validate(grid)
    a, b = render_rational(sol.box_edge_a), render_rational(sol.box_edge_b)
    print(f"box = [{a}, {b}]^{sol.d}")
    print(f"volume = {render_rational(volume(grid))}")
    print(f"violations = {len(problems)}")
    for p in problems[:20]:
        print(f"  {p}")
    return EXIT_OK if not problems else EXIT_VIOLATIONS


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qcvolume", description="Exact extreme box volumes of d-quasi-copulas.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_sign(p):
        p.add_argument("--sign", type=_sign, default=VolumeSign.NEGATIVE,
                       help="negative or positive (default: negative)")

    p = sub.add_parser("solve", help="closed-form extreme volume for one dimension")
    p.add_argument("--dim", type=int, required=True)
    add_sign(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("table", help="rows d, i0, volume over a range of dimensions")
    p.add_argument("--from", dest="start", type=int, required=True)
    p.add_argument("--to", dest="stop", type=int, required=True)
    add_sign(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="check the closed form against the exact LP oracle")
    p.add_argument("--reduced-max", type=int, default=12)
    p.add_argument("--full-max", type=int, default=4)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("realize", help="build and validate the optimal symmetric grid")
    p.add_argument("--dim", type=int, required=True)
    add_sign(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("plotdata", help="per-dimension records for plotting")
    p.add_argument("--from", dest="start", type=int, required=True)
    p.add_argument("--to", dest="stop", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_plotdata)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
