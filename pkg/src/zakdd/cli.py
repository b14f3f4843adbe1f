"""Command line entry point: deterministic experiment runner.

Each analysis is a subcommand writing CSV tables (and figures) into --out.
Identical config and seed produce byte-identical CSVs; exit codes are 0 on
success, 2 for configuration problems, 3 for numeric failures.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import EXPERIMENTS, ConfigError, load_config
from .experiments import Table, run_experiment
from .numerics import FactorizationError
from .report import render_figures

__all__ = ["main", "write_csv"]


def _format_value(value) -> list[str]:
    if isinstance(value, bool):
        return ["1" if value else "0"]
    if isinstance(value, complex):
        return [repr(float(value.real)), repr(float(value.imag))]
    if isinstance(value, float):
        return [repr(value)]
    if isinstance(value, int):
        return [str(value)]
    return [str(value)]


def _expand_header(columns: list[str], rows: list[tuple]) -> list[str]:
    """Complex-valued columns are emitted as two columns (re, im)."""
    complex_cols = set()
    for row in rows:
        for i, value in enumerate(row):
            if isinstance(value, complex):
                complex_cols.add(i)
    header = []
    for i, name in enumerate(columns):
        if i in complex_cols:
            header.extend([f"{name}_re", f"{name}_im"])
        else:
            header.append(name)
    return header


def write_csv(table: Table, path: Path) -> None:
    """Plain CSV: '.' decimals, shortest round-trip float text, no locale."""
    complex_cols = {
        i
        for row in table.rows
        for i, value in enumerate(row)
        if isinstance(value, complex)
    }
    lines = [",".join(_expand_header(table.columns, table.rows))]
    for row in table.rows:
        cells: list[str] = []
        for i, value in enumerate(row):
            if i in complex_cols:
                value = complex(value)
            cells.extend(_format_value(value))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="ascii")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zakdd",
        description="Delay-Doppler modulation experiments: CSV tables plus figures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    names = ["run", *sorted(EXPERIMENTS)]
    for name in names:
        help_text = (
            "run the experiment named in the config file"
            if name == "run"
            else f"run the {name} experiment"
        )
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", default=None, help="INI config file")
        cmd.add_argument("--out", default="results", help="output directory")
        cmd.add_argument("--seed", type=int, default=None, help="override the seed")
        cmd.add_argument("--threads", type=int, default=1, help="worker threads")
        cmd.add_argument(
            "--full",
            action="store_true",
            help="full-scale Monte Carlo (avionics: full_draws instead of draws)",
        )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    experiment = None if args.command == "run" else args.command
    try:
        cfg = load_config(args.config, experiment=experiment, seed=args.seed)
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        tables = run_experiment(cfg, full=args.full, threads=args.threads)
    except ConfigError as exc:
        print(f"config-error: {exc}", file=sys.stderr)
        return 2
    except (FactorizationError, FloatingPointError) as exc:
        print(f"numeric-error: {exc}", file=sys.stderr)
        return 3

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, table in tables.items():
        target = out_dir / f"{name}.csv"
        write_csv(table, target)
        print(f"wrote {target}")
    for fig_path in render_figures(cfg.experiment, tables, out_dir):
        print(f"wrote {fig_path}")

    if cfg.experiment == "zak-check":
        failures = [row for row in tables["zak_check"].rows if row[-1] != "PASS"]
        for row in tables["zak_check"].rows:
            print(f"{row[0]}: {row[-1]} (max error {row[1]:.3e}, tolerance {row[2]:.0e})")
        if failures:
            print(f"numeric-error: {len(failures)} property check(s) failed", file=sys.stderr)
            return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
