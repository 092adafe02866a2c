"""Command-line interface.

Subcommands:
  state    thermal X-state entries, partition function and eigenvalues
  evolve   one channel evolution followed by all three measures
  sweep    1-D/2-D parameter sweep written as CSV, SVG or a table
  figure   reproduce the data behind a figure panel
  verify   run the closed-form vs oracle checks

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import verify as verify_mod
from .channel import ChannelSpec, decoherence_factor, memory_kernel
from .experiments import Axis, SweepSpec, figure_preset, run_figure, run_sweep, valid_figure_ids
from .output import csv_text, emit_csv, emit_svg, fmt_num, svg_text
from .quantifiers import measure, violation_flag
from .state import PhysicalParams, gibbs_details, xstate_eigenvalues

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_USAGE = 0, 1, 2
DEFAULTS = {"omega": 0.5, "gamma": 1.0, "temp": 0.01, "mu": 0.8, "tau": 0.1}
AXIS_GRAMMAR = "name:min:max:steps[:log], e.g. --x t:0:20:201 --y temp:0.01:2:101:log"


class UsageError(Exception):
    pass


def _add_physical(p: argparse.ArgumentParser) -> None:
    p.add_argument("--omega", type=float, default=DEFAULTS["omega"], help="energy gap (default 0.5)")
    p.add_argument("--gamma", type=float, default=DEFAULTS["gamma"], help="gravitational coupling (default 1)")
    p.add_argument("--temp", type=float, default=DEFAULTS["temp"], help="temperature, > 0 (default 0.01)")


def _add_channel(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mu", type=float, default=DEFAULTS["mu"], help="channel correlation in [0,1] (default 0.8)")
    p.add_argument("--tau", type=float, default=DEFAULTS["tau"], help="telegraph time scale (default 0.1)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--t", type=float, help="evolution time, >= 0")
    g.add_argument("--f", type=float, help="kernel value in [-1,1]; bypasses t and tau")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gravcat",
        description="Thermal gravitational-cat states in correlated dephasing channels",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__.split("\n\n", 1)[1],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("state", help="print the thermal X-state")
    _add_physical(p)

    p = sub.add_parser("evolve", help="evolve through the channel and measure")
    _add_physical(p)
    _add_channel(p)
    p.add_argument("--format", choices=("table", "csv"), default="table")

    p = sub.add_parser("sweep", help="parameter sweep")
    p.add_argument("--quantity", choices=("coherence", "lqfi", "bell"), default="coherence")
    p.add_argument("--x", required=True, help=f"x axis: {AXIS_GRAMMAR}")
    p.add_argument("--y", help="optional second axis, same grammar")
    _add_physical(p)
    _add_channel(p)
    p.add_argument("--format", choices=("csv", "svg", "table"), default="csv")
    p.add_argument("--style", choices=("auto", "line", "heatmap"), default="auto")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("figure", help="reproduce a figure panel")
    p.add_argument("figure_id", help="panel (2a, 8c, 10b, ...) or figure (8abc, 3)")
    p.add_argument("--out-dir", default=".", help="directory for <id>.csv (default: .)")
    p.add_argument("--svg", action="store_true", help="also write <id>.svg")
    p.add_argument("--grid", type=int, default=201, help="points per ranged axis (default 201)")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("verify", help="check closed forms against the oracles")
    p.add_argument("--grid", choices=("small", "default"), default="default")
    p.add_argument("--tol", type=float, help="override every tolerance")
    return parser


def _print_table(pairs) -> None:
    width = max(len(k) for k, _ in pairs)
    for k, v in pairs:
        print(f"{k:<{width}}  {v}")


def cmd_state(args) -> int:
    det = gibbs_details(PhysicalParams(args.omega, args.gamma, args.temp))
    s = det.state
    z = math.exp(det.log_z) if det.log_z < 700 else math.inf
    q = xstate_eigenvalues(s)
    _print_table(
        [
            ("a_minus", fmt_num(s.a_minus)),
            ("a_plus", fmt_num(s.a_plus)),
            ("b", fmt_num(s.b)),
            ("c", fmt_num(s.c)),
            ("d", fmt_num(s.d)),
            ("Z", fmt_num(z)),
            ("log_Z", fmt_num(det.log_z)),
            ("alpha", fmt_num(det.alpha)),
            ("eigenvalues", " ".join(fmt_num(x) for x in q)),
        ]
    )
    return EXIT_OK


def _kernel_value(args) -> tuple[float, float]:
    if args.f is not None:
        if not -1.0 <= args.f <= 1.0:
            raise ValueError(f"--f must lie in [-1, 1], got {args.f!r}")
        return math.nan, args.f
    if args.t is None:
        raise UsageError("one of --t or --f is required")
    ChannelSpec(args.mu, args.tau)
    return args.t, memory_kernel(args.t, args.tau)


def cmd_evolve(args) -> int:
    params = PhysicalParams(args.omega, args.gamma, args.temp)
    t, f = _kernel_value(args)
    eta = decoherence_factor(f, args.mu)
    state = gibbs_details(params).state.with_eta(eta)
    rec = measure(state, t=t, f=f)
    fields = [
        ("t", fmt_num(rec.t)),
        ("f", fmt_num(rec.f)),
        ("eta", fmt_num(rec.eta)),
        ("coherence", fmt_num(rec.coherence)),
        ("lqfi", fmt_num(rec.lqfi)),
        ("bell_max", fmt_num(rec.bell_max)),
        ("violation", str(violation_flag(rec.bell_max)).lower()),
    ]
    if args.format == "csv":
        print(",".join(k for k, _ in fields))
        print(",".join(v for _, v in fields))
    else:
        _print_table(fields)
    return EXIT_OK


def _sweep_spec(args) -> SweepSpec:
    try:
        axes = [Axis.parse(args.x)] + ([Axis.parse(args.y)] if args.y else [])
    except ValueError as exc:
        raise UsageError(f"{exc}\naxis grammar: {AXIS_GRAMMAR}") from exc
    names = {a.name for a in axes}
    fixed = {
        "omega": args.omega,
        "gamma": args.gamma,
        "temperature": args.temp,
        "mu": args.mu,
    }
    if args.f is not None or "f" in names:
        fixed["f"] = args.f
    else:
        fixed["tau"] = args.tau
        fixed["t"] = args.t
    fixed = {k: v for k, v in fixed.items() if k not in names and v is not None}
    if "t" in names and "f" in fixed:
        raise UsageError("--f cannot be combined with a t axis")
    return SweepSpec(args.quantity, axes[0], axes[1] if len(axes) > 1 else None, fixed)


def cmd_sweep(args) -> int:
    spec = _sweep_spec(args)
    table = run_sweep(spec, workers=max(args.workers, 1))
    if args.format == "table":
        for row in table.rows:
            r = row.record
            print(f"{fmt_num(r.t)}\t{fmt_num(r.f)}\t{row.param2_name}={fmt_num(row.param2_value)}\t{fmt_num(r.value(spec.quantity))}")
        return EXIT_OK
    if args.out and args.format == "csv":
        emit_csv(table, args.out)
    elif args.out:
        emit_svg(table, args.out, args.style)
    else:
        sys.stdout.write(csv_text(table) if args.format == "csv" else svg_text(table, args.style))
    return EXIT_OK


def cmd_figure(args) -> int:
    try:
        preset = figure_preset(args.figure_id, grid=args.grid)
    except KeyError:
        raise UsageError(
            f"unknown figure id {args.figure_id!r}; valid ids: {', '.join(valid_figure_ids())}"
        ) from None
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for pid, table in run_figure(preset, workers=max(args.workers, 1)).items():
        emit_csv(table, out_dir / f"{pid}.csv")
        if args.svg:
            emit_svg(table, out_dir / f"{pid}.svg")
        print(out_dir / f"{pid}.csv")
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verify_mod.run_checks(args.grid, tol=args.tol)
    width = max(len(r.name) for r in results)
    for r in results:
        verdict = "PASS" if r.passed else "FAIL"
        print(f"{verdict}  {r.name:<{width}}  n={r.points:<4d} max_dev={r.max_deviation:.3e}  tol={r.tolerance:.1e}")
    ok = all(r.passed for r in results)
    print("all checks passed" if ok else "verification FAILED")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


COMMANDS = {
    "state": cmd_state,
    "evolve": cmd_evolve,
    "sweep": cmd_sweep,
    "figure": cmd_figure,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"gravcat {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
