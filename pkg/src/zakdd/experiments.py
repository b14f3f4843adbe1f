"""Experiment implementations: each produces named tables of plain rows.

The CLI turns these tables into CSV files (and figures); tests call them
directly.  Every experiment is deterministic given its config and seed - all
randomness flows through per-task substreams - so reruns yield identical
tables regardless of thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import analysis, basis, channel, modem, zak
from .config import ConfigError, ExperimentConfig
from .numerics import dirichlet_ratio
from .rng import substream

__all__ = ["Table", "run_experiment"]


@dataclass
class Table:
    """Column names plus rows of python scalars (complex allowed)."""

    columns: list[str]
    rows: list[tuple]


def _random_symbols(p: zak.DDGridParams, rng: np.random.Generator) -> modem.DDSymbols:
    grid = rng.standard_normal((p.N, p.M)) + 1j * rng.standard_normal((p.N, p.M))
    return modem.DDSymbols(params=p, x=grid)


def _paths_from_config(quads, p: zak.DDGridParams) -> list[channel.ChannelPath]:
    paths = []
    for gain_re, gain_im, delay_bins, doppler_bins in quads:
        delay = delay_bins * p.delay_step
        if not 0.0 <= delay < p.T:
            raise ConfigError(
                f"path delay {delay_bins} bins lies outside [0, M) = [0, {p.M})"
            )
        paths.append(
            channel.ChannelPath(
                gain=complex(gain_re, gain_im),
                delay=delay,
                doppler=doppler_bins * p.doppler_step,
            )
        )
    return paths


def _run_zak_check(cfg: ExperimentConfig, full: bool, threads: int) -> dict[str, Table]:
    p = cfg.grid
    trials = cfg.params["trials"]
    tol = 1e-12
    rng = substream(cfg.seed, 0)
    worst_round, worst_lin, worst_parseval = 0.0, 0.0, 0.0
    for _ in range(trials):
        raw = rng.standard_normal(p.N * p.M) + 1j * rng.standard_normal(p.N * p.M)
        x = zak.TDSamples(p, 0, raw)
        grid = zak.discrete_zak(x)
        back = zak.inverse_zak(grid, blocks=p.N)
        worst_round = max(worst_round, float(np.max(np.abs(back.samples - raw))))
        raw2 = rng.standard_normal(p.N * p.M) + 1j * rng.standard_normal(p.N * p.M)
        a, b = complex(rng.standard_normal(), rng.standard_normal()), 2.0 - 1.0j
        combo = zak.discrete_zak(zak.TDSamples(p, 0, a * raw + b * raw2))
        lin = a * grid.values + b * zak.discrete_zak(zak.TDSamples(p, 0, raw2)).values
        worst_lin = max(worst_lin, float(np.max(np.abs(combo.values - lin))))
        energy = float(np.sum(np.abs(raw) ** 2))
        zak_energy = float(np.sum(np.abs(grid.values) ** 2)) / (p.T * p.N)
        worst_parseval = max(worst_parseval, abs(energy - zak_energy) / energy)

    # quasi-periodic extension against the defining block sum at shifted points
    rng2 = substream(cfg.seed, 1)
    raw = rng2.standard_normal(p.N * p.M) + 1j * rng2.standard_normal(p.N * p.M)
    grid = zak.discrete_zak(zak.TDSamples(p, 0, raw))
    worst_qp = 0.0
    for shift_n in (-2, -1, 1, 3):
        for shift_m in (-1, 0, 2):
            for l in range(p.M):
                for k in range(p.N):
                    tau = l * p.delay_step + shift_n * p.T
                    nu = k * p.doppler_step + shift_m * p.delta_f
                    # defining sum at the shifted point: the same lattice
                    # samples re-indexed, since x lives on blocks 0..N-1
                    direct = math.sqrt(p.T) * sum(
                        raw[j * p.M + l]
                        * np.exp(-2j * np.pi * (j - shift_n) * nu * p.T)
                        for j in range(p.N)
                    )
                    ext = zak.quasi_extend(grid, tau, nu)
                    worst_qp = max(worst_qp, abs(ext - direct))

    # on-grid delay-Doppler shift against the time-domain construction
    worst_shift = 0.0
    for l0, k0 in ((1, 0), (0, 1), (2, 3), (-1, 2)):
        shifted = zak.apply_dd_shift_grid(grid, l0, k0)
        tau0 = l0 * p.delay_step
        nu0 = k0 * p.doppler_step
        pad = abs(l0) // p.M + 1
        count = (p.N + 2 * pad) * p.M
        r = np.zeros(count, complex)
        for idx in range(count):
            sample = idx - pad * p.M
            src = sample - l0
            if 0 <= src < p.N * p.M:
                t = sample * p.delay_step
                r[idx] = raw[src] * np.exp(2j * np.pi * nu0 * (t - tau0))
        r_grid = zak.discrete_zak(zak.TDSamples(p, -pad, r))
        worst_shift = max(
            worst_shift, float(np.max(np.abs(r_grid.values - shifted.values)))
        )

    checks = [
        ("round_trip", worst_round, tol),
        ("linearity", worst_lin, tol),
        ("parseval", worst_parseval, tol),
        ("quasi_periodicity", worst_qp, 1e-11),
        ("dd_shift", worst_shift, 1e-11),
    ]
    rows = [
        (name, err, bound, "PASS" if err <= bound else "FAIL")
        for name, err, bound in checks
    ]
    return {"zak_check": Table(["check", "max_error", "tolerance", "status"], rows)}


def _run_basis_gram(cfg: ExperimentConfig, full: bool, threads: int) -> dict[str, Table]:
    p = cfg.grid
    gram = basis.alpha_gram(p)
    off = gram - np.diag(np.diag(gram))
    worst_idx = np.unravel_index(np.argmax(np.abs(off)), off.shape)
    worst = complex(off[worst_idx])
    rows = [
        ("max_offdiag_abs", float(np.max(np.abs(off)))),
        ("max_diag_error", float(np.max(np.abs(np.diag(gram) - 1.0)))),
        ("worst_offdiag", worst),
        ("dimension", p.M * p.N),
    ]
    return {"basis_gram": Table(["metric", "value"], rows)}


def _run_modulate_compare(
    cfg: ExperimentConfig, full: bool, threads: int
) -> dict[str, Table]:
    n = cfg.grid.N
    oversample = cfg.params["oversample"]
    rows = []
    for i, m in enumerate(cfg.params["m_list"]):
        p = zak.DDGridParams(T=cfg.grid.T, M=m, N=n)
        # unit-modulus symbols: the waveform gap then probes the pulse tails
        # rather than random symbol amplitudes
        rng = substream(cfg.seed, i)
        sym = modem.DDSymbols(params=p, x=np.exp(2j * np.pi * rng.random((n, m))))
        mismatch = modem.modulation_mismatch(sym, oversample=oversample)
        leak = modem.out_of_window_fraction(sym, oversample=oversample)
        rows.append((m, n, mismatch, leak))
    return {
        "modulate_compare": Table(
            ["M", "N", "mismatch", "out_of_window_fraction"], rows
        )
    }


def _run_channel_oracle(
    cfg: ExperimentConfig, full: bool, threads: int
) -> dict[str, Table]:
    p = cfg.grid
    paths = _paths_from_config(cfg.params["paths"], p)
    sym = _random_symbols(p, substream(cfg.seed, 0))
    eff = channel.effective_dd_channel(paths, p)
    exact = channel.sample_received_dd(sym, eff)
    scale = float(np.max(np.abs(exact)))
    rows = []
    for trunc in cfg.params["p_list"]:
        approx = channel.brute_force_y(sym, paths, trunc_blocks=trunc)
        err = np.abs(approx - exact)
        rows.append(
            (
                trunc,
                float(np.max(err)) / scale,
                float(np.linalg.norm(err) / np.linalg.norm(exact)),
            )
        )
    return {"channel_oracle": Table(["P", "max_rel_error", "frob_rel_error"], rows)}


def _run_se(cfg: ExperimentConfig, full: bool, threads: int) -> dict[str, Table]:
    p = cfg.grid
    paths = _paths_from_config(cfg.params["paths"], p)
    eff = channel.effective_dd_channel(paths, p)
    noise = channel.noise_covariance(p)
    rows = []
    for rho_db in cfg.params["rho_db"]:
        rho = 10.0 ** (rho_db / 10.0)
        rows.append((rho_db, rho, analysis.spectral_efficiency(eff, noise, rho)))
    return {"se": Table(["rho_db", "rho", "se_bits_per_s_per_hz"], rows)}


def _doppler_spread_rows(cfg: ExperimentConfig) -> list[tuple]:
    """Normalized Doppler leakage profile (1/N^2) D_N((u - nu N T)/N)^2."""
    nu_rel = cfg.params["spread_nu"]
    points = cfg.params["spread_points"]
    rows = []
    for n in cfg.params["spread_n_list"]:
        u = np.linspace(0.0, n, points)
        prof = dirichlet_ratio((u - nu_rel * n) / n, n) ** 2 / n**2
        rows.extend((int(n), float(ui), float(fi)) for ui, fi in zip(u, prof))
    return rows


def _run_interference(
    cfg: ExperimentConfig, full: bool, threads: int
) -> dict[str, Table]:
    params = cfg.params
    if len(params["n_list"]) != len(params["k_list"]):
        raise ConfigError("n_list and k_list must have the same length")
    nu_grid = np.linspace(params["nu_min"], params["nu_max"], params["nu_points"])

    def one(idx: int) -> list[dict]:
        n, k = params["n_list"][idx], params["k_list"][idx]
        return analysis.interference_sweep(
            [n],
            cfg.grid.M,
            [k],
            params["l"],
            nu_grid,
            tau_draws=params["tau_draws"],
            seed=cfg.seed,
            threshold=params["threshold"],
        )

    indices = range(len(params["n_list"]))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(one, indices))
    else:
        chunks = [one(i) for i in indices]
    rows = [
        (r["N"], r["k"], r["l"], r["nu_over_delta_f"], r["mean_fraction"])
        for chunk in chunks
        for r in chunk
    ]
    return {
        "interference": Table(
            ["N", "k", "l", "nu_over_delta_f", "mean_fraction"], rows
        ),
        "doppler_spread": Table(["N", "u", "profile"], _doppler_spread_rows(cfg)),
    }


def _run_ofdm_compare(
    cfg: ExperimentConfig, full: bool, threads: int
) -> dict[str, Table]:
    params = cfg.params
    p = cfg.grid
    nu_grid = np.linspace(params["nu_min"], params["nu_max"], params["nu_points"])
    dd_rows = analysis.interference_sweep(
        [p.N],
        p.M,
        [params["k"]],
        params["l"],
        nu_grid,
        tau_draws=params["tau_draws"],
        seed=cfg.seed,
        threshold=params["threshold"],
    )
    rows = []
    for nu_rel, dd in zip(nu_grid, (r["mean_fraction"] for r in dd_rows)):
        ofdm = analysis.ofdm_interference(
            params["k"],
            0.0,
            nu_rel * p.delta_f,
            p.M,
            T=p.T,
            threshold=params["threshold"],
        )
        rows.append((float(nu_rel), ofdm, dd))
    return {
        "ofdm_compare": Table(
            ["nu_over_delta_f", "ofdm_fraction", "dd_mean_fraction"], rows
        )
    }


def _run_avionics(cfg: ExperimentConfig, full: bool, threads: int) -> dict[str, Table]:
    params = cfg.params
    draws = params["full_draws"] if full else params["draws"]
    avionics = analysis.AvionicsConfig(
        rician_k_db=params["rician_k_db"],
        excess_delay=params["excess_delay"],
        beamwidth_deg=params["beamwidth_deg"],
        carrier_hz=params["carrier_hz"],
        speeds=tuple(params["speeds"]),
        rhos=tuple(10.0 ** (db / 10.0) for db in params["rho_db"]),
        draws=draws,
        seed=cfg.seed,
    )
    rows_raw = analysis.avionics_se_sweep(avionics, cfg.grid, threads=threads)
    rho_to_db = {10.0 ** (db / 10.0): db for db in params["rho_db"]}
    rows = [
        (
            r["speed"],
            rho_to_db[r["rho"]],
            r["rho"],
            r["mean_se"],
            r["std_se"],
            r["draws"],
        )
        for r in rows_raw
    ]
    return {
        "avionics": Table(
            ["speed_mps", "rho_db", "rho", "mean_se", "std_se", "draws"], rows
        )
    }


_RUNNERS = {
    "zak-check": _run_zak_check,
    "basis-gram": _run_basis_gram,
    "modulate-compare": _run_modulate_compare,
    "channel-oracle": _run_channel_oracle,
    "se": _run_se,
    "interference": _run_interference,
    "ofdm-compare": _run_ofdm_compare,
    "avionics": _run_avionics,
}


def run_experiment(
    cfg: ExperimentConfig, full: bool = False, threads: int = 1
) -> dict[str, Table]:
    """Execute one experiment, returning its output tables by name."""
    if threads < 1:
        raise ConfigError("threads must be >= 1")
    return _RUNNERS[cfg.experiment](cfg, full, threads)
