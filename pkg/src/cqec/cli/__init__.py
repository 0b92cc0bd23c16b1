"""Command-line interface: ``cqec simulate|figure|sweep|verify``.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical
failure, 3 a verification check failed.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from ..numerics import IntegrationError
from . import output
from .config import FORMATS, ConfigError, load_config

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VERIFY = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cqec", description="Continuous quantum error correction simulations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def io(p, config_required):
        p.add_argument("--config", required=config_required, help="INI experiment file")
        p.add_argument("--out", help="output file (directory for figure); stdout if omitted")
        p.add_argument("--format", choices=FORMATS, help="output format, default csv")

    io(sub.add_parser("simulate", help="fidelity trace of one configuration"), True)
    io(sub.add_parser("sweep", help="run a configuration over a list of rate values"), True)
    fig = sub.add_parser("figure", help="curve family of a named figure, CSV plus PNG")
    fig.add_argument("figure_id", nargs="?", help="figure name, see --list")
    fig.add_argument("--list", action="store_true", help="list figure names and exit")
    fig.add_argument("--no-png", action="store_true", help="write the data files only")
    io(fig, False)
    ver = sub.add_parser("verify", help="check closed forms and class matrices")
    ver.add_argument("--scope", default="all", choices=("all", "closed-forms", "class-matrices", "measure"))
    io(ver, False)
    return parser


def _load(args):
    cfg = load_config(args.config)
    if args.format:
        cfg = replace(cfg, format=args.format)
    if args.out:
        cfg = replace(cfg, out=args.out)
    return cfg


def _check_finite(table):
    bad = ~np.isfinite(table.rows)
    if bad.any():
        row = int(np.nonzero(bad.any(axis=1))[0][0])
        raise FloatingPointError(f"non-finite value at t = {table.rows[row, table.columns.index('t')]:.6g}")


def _emit(table, fmt, path):
    output.write(output.render(table.columns, table.rows, fmt, table.meta), path)


def cmd_simulate(args) -> int:
    from .runner import run_experiment

    cfg = _load(args)
    table = run_experiment(cfg)
    _check_finite(table)
    _emit(table, cfg.format, cfg.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    from .runner import run_sweep, thread_count

    cfg = _load(args)
    if cfg.sweep_rate is None:
        raise ConfigError("sweep", "section missing")
    try:
        threads = thread_count()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    table = run_sweep(cfg, threads)
    _check_finite(table)
    _emit(table, cfg.format, cfg.out)
    return EXIT_OK


def cmd_figure(args) -> int:
    from .presets import PRESETS, get_preset
    from .runner import run_experiment

    if args.list:
        for p in PRESETS.values():
            print(f"{p.id}\t{p.description}")
        return EXIT_OK
    if not args.figure_id:
        raise UsageError("figure: a figure name is required (see --list)")
    try:
        preset = get_preset(args.figure_id)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    fmt = args.format or "csv"
    outdir = Path(args.out or preset.id)
    outdir.mkdir(parents=True, exist_ok=True)
    curves, asymptotes = [], {}
    for value, cfg in zip(preset.values, preset.configs()):
        table = run_experiment(cfg)
        _check_finite(table)
        name = preset.curve_name(value)
        path = outdir / f"{name}.{fmt}"
        _emit(table, fmt, path)
        print(path)
        label = f"{preset.parameter} = {value:g}"
        curves.append((label, table.column("t"), table.column("fidelity")))
        if preset.asymptote is not None:
            asymptotes[label] = preset.asymptote(cfg)
    if not args.no_png:
        from .plotting import plot_curves

        png = outdir / f"{preset.id}.png"
        plot_curves(curves, png, title=preset.description, xlabel=preset.xlabel, asymptotes=asymptotes)
        print(png)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import REPORT_COLUMNS, failed, report_rows, run_verify

    checks, diff = run_verify(args.scope)
    rows = report_rows(checks, diff)
    output.write(output.render(REPORT_COLUMNS, rows, args.format or "csv"), args.out)
    bad = failed(checks)
    for c in bad:
        print(f"FAILED: {c.name} (deviation {c.deviation:.3g} > {c.tolerance:.3g})", file=sys.stderr)
    return EXIT_VERIFY if bad else EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "sweep": cmd_sweep, "figure": cmd_figure, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        # non-finite results are caught explicitly and reported as exit 2
        with np.errstate(all="ignore"):
            return COMMANDS[args.command](args)
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)
    except (UsageError, ConfigError) as exc:
        print(f"cqec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IntegrationError as exc:
        print(f"cqec: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"cqec: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def run() -> None:
    sys.exit(main())
