"""Figure rendering for experiment tables.

Each experiment with a natural curve gets one PNG next to its CSV output.
Figures are a convenience view of the tables; the CSVs remain the
authoritative, byte-reproducible artifacts.
"""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .experiments import Table

__all__ = ["render_figures"]


def _new_axes(xlabel: str, ylabel: str, title: str):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.4)
    return fig, ax


def _save(fig, path: Path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _group_xy(rows, key_idx: int, x_idx: int, y_idx: int) -> dict:
    series = defaultdict(lambda: ([], []))
    for row in rows:
        xs, ys = series[row[key_idx]]
        xs.append(row[x_idx])
        ys.append(row[y_idx])
    return series


def _plot_interference(tables: dict[str, Table], out_dir: Path) -> list[Path]:
    paths = []
    fig, ax = _new_axes(
        "Doppler shift / subcarrier spacing",
        "mean interfered fraction",
        "Interfered DD symbols vs Doppler shift",
    )
    for n, (xs, ys) in sorted(_group_xy(tables["interference"].rows, 0, 3, 4).items()):
        ax.plot(xs, ys, label=f"N = {n}", linewidth=1.0)
    ax.legend()
    path = out_dir / "interference.png"
    _save(fig, path)
    paths.append(path)

    fig, ax = _new_axes(
        "Doppler bin u", "normalized leakage", "Doppler leakage profile"
    )
    for n, (xs, ys) in sorted(_group_xy(tables["doppler_spread"].rows, 0, 1, 2).items()):
        ax.plot(xs, ys, label=f"N = {n}", linewidth=1.0)
    ax.legend()
    path = out_dir / "doppler_spread.png"
    _save(fig, path)
    paths.append(path)
    return paths


def _plot_ofdm_compare(tables: dict[str, Table], out_dir: Path) -> list[Path]:
    rows = tables["ofdm_compare"].rows
    xs = [r[0] for r in rows]
    fig, ax = _new_axes(
        "Doppler shift / subcarrier spacing",
        "interfered fraction",
        "CP-OFDM vs DD-domain modulation",
    )
    ax.plot(xs, [r[1] for r in rows], label="CP-OFDM")
    ax.plot(xs, [r[2] for r in rows], label="DD modulation")
    ax.legend()
    path = out_dir / "ofdm_compare.png"
    _save(fig, path)
    return [path]


def _plot_avionics(tables: dict[str, Table], out_dir: Path) -> list[Path]:
    fig, ax = _new_axes(
        "aircraft speed (m/s)", "mean SE (bit/s/Hz)", "Spectral efficiency vs speed"
    )
    for rho_db, (xs, ys) in sorted(_group_xy(tables["avionics"].rows, 1, 0, 3).items()):
        ax.plot(xs, ys, marker="o", label=f"SNR = {rho_db:g} dB")
    ax.set_ylim(bottom=0.0)
    ax.legend()
    path = out_dir / "avionics.png"
    _save(fig, path)
    return [path]


def _plot_modulate_compare(tables: dict[str, Table], out_dir: Path) -> list[Path]:
    rows = tables["modulate_compare"].rows
    fig, ax = _new_axes("M (delay bins)", "relative energy gap", "DD vs OTFS waveform gap")
    ax.loglog([r[0] for r in rows], [r[2] for r in rows], marker="o", label="in-window mismatch")
    ax.loglog([r[0] for r in rows], [r[3] for r in rows], marker="s", label="out-of-window energy")
    ax.legend()
    path = out_dir / "modulate_compare.png"
    _save(fig, path)
    return [path]


def _plot_channel_oracle(tables: dict[str, Table], out_dir: Path) -> list[Path]:
    rows = tables["channel_oracle"].rows
    fig, ax = _new_axes("truncation blocks P", "relative error", "Oracle convergence")
    ax.loglog([r[0] for r in rows], [r[1] for r in rows], marker="o", label="max")
    ax.loglog([r[0] for r in rows], [r[2] for r in rows], marker="s", label="Frobenius")
    ax.legend()
    path = out_dir / "channel_oracle.png"
    _save(fig, path)
    return [path]


def _plot_se(tables: dict[str, Table], out_dir: Path) -> list[Path]:
    rows = tables["se"].rows
    fig, ax = _new_axes("SNR (dB)", "SE (bit/s/Hz)", "Spectral efficiency")
    ax.plot([r[0] for r in rows], [r[2] for r in rows], marker="o")
    path = out_dir / "se.png"
    _save(fig, path)
    return [path]


_PLOTTERS = {
    "interference": _plot_interference,
    "ofdm-compare": _plot_ofdm_compare,
    "avionics": _plot_avionics,
    "modulate-compare": _plot_modulate_compare,
    "channel-oracle": _plot_channel_oracle,
    "se": _plot_se,
}


def render_figures(
    experiment: str, tables: dict[str, Table], out_dir: Path
) -> list[Path]:
    """Render the experiment's figures; returns written paths (may be empty)."""
    plotter = _PLOTTERS.get(experiment)
    if plotter is None:
        return []
    return plotter(tables, out_dir)
