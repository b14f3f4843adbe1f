"""Doubly dispersive channels in the delay-Doppler domain.

A channel is a list of paths (gain h_i, delay tau_i, Doppler nu_i) acting on
the transmit waveform as y(t) = sum_i h_i x(t - tau_i) e^{j 2 pi nu_i (t -
tau_i)} + n(t).  Sampling the Zak representation of y on the M x N lattice
couples the received grid to the sent symbols through an MN x MN matrix
whose entries have an exact closed form: a product of delay and Doppler
Dirichlet ratios with deterministic phase factors.  This module builds that
matrix, the structured covariance of the sampled noise, seeded noise draws,
and a brute-force received-grid oracle computed straight from the analytic
waveform for cross-checking.

Index convention throughout: grids are (N, M) with entry (k, l); vectorized
forms use row/column index k*M + l.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .modem import DDSymbols, dd_waveform
from .numerics import dirichlet_ratio
from .zak import DDGridParams, _freeze

__all__ = [
    "ChannelPath",
    "EffectiveChannel",
    "NoiseModel",
    "effective_dd_channel",
    "brute_force_y",
    "noise_covariance",
    "apply_noise_whitener",
    "zak_noise_draw",
    "sample_received_dd",
]


@dataclass(frozen=True)
class ChannelPath:
    """One propagation path: complex gain, delay in [0, T), Doppler in Hz.

    Zero delay is admitted (a pure line-of-sight path); Doppler may be any
    finite real, positive or negative, and may exceed delta_f.
    """

    gain: complex
    delay: float
    doppler: float


def _check_paths(
    paths: Sequence[ChannelPath], p: DDGridParams, allow_empty: bool = False
) -> None:
    if not paths and not allow_empty:
        raise ValueError("at least one channel path is required")
    for path in paths:
        if not 0.0 <= path.delay < p.T:
            raise ValueError(f"path delay {path.delay} outside [0, T={p.T})")
        if not np.isfinite(path.doppler):
            raise ValueError(f"path Doppler must be finite, got {path.doppler}")


@dataclass(frozen=True)
class EffectiveChannel:
    """Effective DD channel matrix, htilde[k'*M+l', k*M+l]."""

    params: DDGridParams
    htilde: np.ndarray

    def __post_init__(self) -> None:
        arr = _freeze(self.htilde)
        mn = self.params.M * self.params.N
        if arr.shape != (mn, mn):
            raise ValueError(f"htilde shape {arr.shape} does not match ({mn}, {mn})")
        object.__setattr__(self, "htilde", arr)


def effective_dd_channel(
    paths: Sequence[ChannelPath], p: DDGridParams
) -> EffectiveChannel:
    """Exact closed-form effective channel matrix for a multipath channel.

    Per path with normalized Doppler a = nu/delta_f and delay b = tau/T, the
    coupling from symbol (k, l) to received sample (k', l') is

        (h / MN) * e^{j 2 pi a (l'/M - b)}
                 * e^{-j pi (N-1) dk} * D_N(dk)
                 * e^{j 2 pi frac(k'/N - a) dl}
                 * e^{j pi (M-1) dl} * D_M(dl)

    with dk = (k'-k)/N - a, dl = (l'-l)/M - b, and frac(x) = x - floor(x).
    Dirichlet ratios route removable singularities through their integer
    limits, so integer-bin shifts come out exactly as permutation-with-phase
    columns.  Paths add linearly.

    When k'/N - a is an integer the path aliases row k' onto the band edge
    of the delay spreading pulse and the delay bracket gains the midpoint
    term (e^{j 2 pi M dl} - 1)/2 (same convention as zak_s); it vanishes for
    integer delay shifts and is what the brute-force received grid converges
    to for integer-Doppler paths with fractional delay.
    """
    _check_paths(paths, p)
    n_grid, m_grid = p.N, p.M
    mn = n_grid * m_grid
    kp = np.arange(n_grid)
    lp = np.arange(m_grid)
    dl_offsets = np.arange(-(m_grid - 1), m_grid)  # l' - l
    acc = np.zeros((n_grid, m_grid, n_grid, m_grid), dtype=complex)
    for path in paths:
        a = path.doppler / p.delta_f
        b = path.delay / p.T
        row_phase = np.exp(2j * np.pi * a * (lp / m_grid - b))  # (l',)
        dk = (kp[:, None] - kp[None, :]) / n_grid - a  # (k', k)
        dopp = np.exp(-1j * np.pi * (n_grid - 1) * dk) * dirichlet_ratio(dk, n_grid)
        dl = dl_offsets / m_grid - b  # indexed by (l' - l) + M - 1
        delay_base = np.exp(1j * np.pi * (m_grid - 1) * dl) * dirichlet_ratio(
            dl, m_grid
        )
        kshift = kp / n_grid - a
        edge = np.abs(kshift - np.rint(kshift)) < 1e-9  # (k',)
        frac = np.where(edge, 0.0, kshift - np.floor(kshift))
        mix = np.exp(2j * np.pi * np.outer(frac, dl))  # (k', l'-l)
        edge_term = 0.5 * (np.exp(2j * np.pi * m_grid * dl) - 1.0)
        scale = path.gain / mn
        delta_idx = (lp[:, None] - lp[None, :]) + (m_grid - 1)  # (l', l)
        for k_prime in range(n_grid):
            delay_vec = delay_base * mix[k_prime]
            if edge[k_prime]:
                delay_vec = delay_vec + edge_term
            delay_part = delay_vec[delta_idx]  # (l', l)
            acc[k_prime] += scale * (
                row_phase[:, None, None]
                * dopp[k_prime][None, :, None]
                * delay_part[:, None, :]
            )
    return EffectiveChannel(params=p, htilde=acc.reshape(mn, mn))


def brute_force_y(
    sym: DDSymbols,
    paths: Sequence[ChannelPath],
    trunc_blocks: int = 256,
) -> np.ndarray:
    """Received DD grid computed the slow way, from the analytic waveform.

    Evaluates y(t) = sum_i h_i x(t - tau_i) e^{j 2 pi nu_i (t - tau_i)}
    (noise-free, x the exact DD waveform) on the sampling lattice and forms

        Y[k', l'] = sqrt(T) * sum_{n'=-P}^{N+P} y(l' T/M + n' T) e^{-j 2 pi n' k'/N}.

    Converges to sqrt(MN) * Htilde vec(x) as P grows; the sinc tails make the
    truncation error decay like 1/P.  An empty path list yields a zero grid.
    """
    p = sym.params
    _check_paths(paths, p, allow_empty=True)
    if trunc_blocks < 0:
        raise ValueError("trunc_blocks must be >= 0")
    n_prime = np.arange(-trunc_blocks, p.N + trunc_blocks + 1)
    t = n_prime[:, None] * p.T + (np.arange(p.M) * p.delay_step)[None, :]
    y = np.zeros(t.shape, dtype=complex)
    for path in paths:
        shifted = t - path.delay
        y += (
            path.gain
            * np.exp(2j * np.pi * path.doppler * shifted)
            * dd_waveform(sym, shifted.ravel()).reshape(t.shape)
        )
    phases = np.exp(-2j * np.pi * np.outer(np.arange(p.N), n_prime) / p.N)
    return math.sqrt(p.T) * (phases @ y)


@dataclass(frozen=True)
class NoiseModel:
    """Structured covariance of the sampled DD noise grid.

    ktilde is the unit-normalized covariance: (1 + 1/N) on the diagonal, 1/N
    between samples sharing a delay bin, zero otherwise - i.e.
    kron(I_N + J_N/N, I_M).  Its closed-form inverse kron(I_N - J_N/(2N), I_M)
    is stored alongside.  The raw noise-grid covariance is MN * ktilde.
    """

    params: DDGridParams
    ktilde: np.ndarray
    ktilde_inv: np.ndarray
    seed: int = 0


def noise_covariance(p: DDGridParams, seed: int = 0) -> NoiseModel:
    """Build the structured noise covariance and its closed-form inverse."""
    ones = np.ones((p.N, p.N))
    eye_m = np.eye(p.M)
    ktilde = np.kron(np.eye(p.N) + ones / p.N, eye_m)
    ktilde_inv = np.kron(np.eye(p.N) - ones / (2 * p.N), eye_m)
    return NoiseModel(
        params=p,
        ktilde=ktilde.astype(complex),
        ktilde_inv=ktilde_inv.astype(complex),
        seed=seed,
    )


def apply_noise_whitener(p: DDGridParams, mat: np.ndarray) -> np.ndarray:
    """Multiply ktilde^{-1} onto a stacked matrix without forming it densely.

    ktilde^{-1} = kron(I_N - J_N/(2N), I_M) subtracts 1/(2N) times the sum
    over the Doppler index from each same-delay group of rows.
    """
    mat = np.asarray(mat, dtype=complex)
    stacked = mat.reshape(p.N, p.M, -1)
    out = stacked - stacked.sum(axis=0) / (2 * p.N)
    return out.reshape(mat.shape)


def zak_noise_draw(p: DDGridParams, rng: np.random.Generator) -> np.ndarray:
    """One sampled DD noise grid Z[k', l'], shape (N, M), from a seeded rng.

    The received span covers N+1 block periods, so the grid sums N+1 blocks
    of time-domain noise samples n(n'T + l'T/M), drawn i.i.d. circular
    complex Gaussian with variance M*delta_f (unit noise density over the
    band):  Z[k', l'] = sqrt(T) sum_{n'=0}^{N} n[n', l'] e^{-j 2 pi n' k'/N}.
    Identical generator state gives identical grids.
    """
    sigma = math.sqrt(p.M * p.delta_f / 2.0)
    shape = (p.N + 1, p.M)
    td = sigma * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    phases = np.exp(
        -2j * np.pi * np.outer(np.arange(p.N), np.arange(p.N + 1)) / p.N
    )
    return math.sqrt(p.T) * (phases @ td)


def sample_received_dd(
    sym: DDSymbols,
    channel: EffectiveChannel,
    noise: np.ndarray | None = None,
) -> np.ndarray:
    """Received DD grid Y = sqrt(MN) * Htilde vec(x) (+ Z), shape (N, M)."""
    p = channel.params
    if sym.params != p:
        raise ValueError("symbol grid and channel parameters differ")
    y = math.sqrt(p.M * p.N) * (channel.htilde @ sym.x.reshape(-1))
    if noise is not None:
        noise = np.asarray(noise, dtype=complex)
        if noise.shape != (p.N, p.M):
            raise ValueError(f"noise grid shape {noise.shape} != ({p.N}, {p.M})")
        y = y + noise.reshape(-1)
    return y.reshape(p.N, p.M)
