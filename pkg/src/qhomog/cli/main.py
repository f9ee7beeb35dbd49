"""Argument parsing and dispatch for the ``qhomog`` command."""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .. import qstate
from . import commands, presets
from .config import SweepSpec, UsageError, build_run_spec, parse_axis, read_config
from .verify import LEVELS

RUN_FLAGS = (
    ("--alpha", float), ("--delta", float), ("--theta", float), ("--phi", float),
    ("--scheme", str), ("--interaction", str), ("--system", str), ("--ancilla", str),
    ("--n", int), ("--every", int), ("--epsilon", float), ("--seed", int), ("--out", str),
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_run_flags(p):
    for flag, kind in RUN_FLAGS:
        p.add_argument(flag, type=str, default=None, metavar=kind.__name__.upper())
    p.add_argument("--preset", help="named figure curve, e.g. fig-zswap-plus")
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--section", help="section of the config file to use")
    p.add_argument("--plot-script", dest="emit_plot_script", action="store_true", default=None,
                   help="also write a gnuplot script next to the CSV")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qhomog", description="Qubit collision-model homogenization simulator.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="simulate one configuration to a CSV")
    _add_run_flags(run)

    sweep = sub.add_parser("sweep", help="simulate a parameter grid")
    _add_run_flags(sweep)
    sweep.add_argument("--axis", action="append", default=[], help="name=v1,v2,... (repeatable)")
    sweep.add_argument("--workers", type=int, default=0, help="worker processes (default: all cores)")

    verify = sub.add_parser("verify", help="run the invariant suites")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--level", choices=sorted(LEVELS), default="quick")

    figs = sub.add_parser("figures", help="reproduce figure curves and plot scripts")
    figs.add_argument("which", nargs="?", default="all", help="'all' or one of: " + ", ".join(presets.figure_names()))
    figs.add_argument("--out", default="figures")
    return parser


def _layers(args):
    """Settings layers in increasing precedence: preset, config file, flags."""
    file_settings, file_axes = {}, []
    if args.config:
        file_settings, file_axes = read_config(args.config, args.section)
    flags = {flag[2:]: getattr(args, flag[2:]) for flag, _ in RUN_FLAGS}
    flags["emit_plot_script"] = args.emit_plot_script
    preset = {"preset": args.preset} if args.preset else {}
    return [preset, file_settings, flags], file_axes


def dispatch(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return commands.cmd_verify(args.seed, args.level)
    if args.command == "figures":
        return commands.cmd_figures(args.which, args.out)
    layers, file_axes = _layers(args)
    spec = build_run_spec(*layers)
    if args.command == "run":
        return commands.cmd_run(spec)
    axes = dict(file_axes)
    for text in args.axis:
        name, values = parse_axis(text)
        axes[name] = values
    if not axes:
        raise UsageError("sweep needs at least one --axis name=v1,v2,...")
    sweep = SweepSpec(spec, tuple((k, tuple(v)) for k, v in axes.items()), workers=args.workers)
    return commands.cmd_sweep(sweep)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        return dispatch(argv)
    except (UsageError, qstate.InvalidStateError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"qhomog: error: {msg}", file=sys.stderr)
        return commands.EXIT_USAGE
    except OSError as exc:
        print(f"qhomog: I/O error: {exc}", file=sys.stderr)
        return commands.EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
