"""Discrete Zak transform on critically sampled time-domain signals.

A signal sampled at rate M*delta_f is mapped to its delay-Doppler
representation

    Z[l, k] = sqrt(T) * sum_n x(l*T/M + n*T) * exp(-j 2 pi n k / N)

on the fundamental cell tau in [0, T), nu in [0, delta_f).  Off the cell the
representation is quasi-periodic: it picks up the phase exp(j 2 pi nu T) per
delay period and repeats exactly with period delta_f along Doppler.  The
inverse transform, a Fourier evaluator and the on-grid delay-Doppler shift are
provided alongside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DDGridParams",
    "TDSamples",
    "ZakGrid",
    "discrete_zak",
    "inverse_zak",
    "zak_to_fourier",
    "quasi_extend",
    "apply_dd_shift_grid",
]


@dataclass(frozen=True)
class DDGridParams:
    """Delay-Doppler lattice: block period T (s), M delay bins, N Doppler bins.

    The subcarrier spacing is tied to the block period (delta_f = 1/T), so
    T * delta_f == 1 holds exactly.  Lattice spacings are T/M along delay and
    delta_f/N along Doppler; the critical sampling rate is M * delta_f.
    """

    T: float
    M: int
    N: int

    def __post_init__(self) -> None:
        if not (np.isfinite(self.T) and self.T > 0):
            raise ValueError(f"T must be positive and finite, got {self.T}")
        if self.M < 1 or self.N < 1:
            raise ValueError(f"M and N must be >= 1, got M={self.M}, N={self.N}")

    @property
    def delta_f(self) -> float:
        return 1.0 / self.T

    @property
    def delay_step(self) -> float:
        return self.T / self.M

    @property
    def doppler_step(self) -> float:
        return self.delta_f / self.N

    @property
    def bandwidth(self) -> float:
        return self.M * self.delta_f

    @property
    def duration(self) -> float:
        return self.N * self.T


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class TDSamples:
    """Complex signal critically sampled at rate M*delta_f.

    samples[p] holds the value at t = (start_block*M + p) * T/M, so the array
    covers whole blocks starting at block index start_block (which may be
    negative).  Instances are immutable; the sample array is read-only.
    """

    params: DDGridParams
    start_block: int
    samples: np.ndarray

    def __post_init__(self) -> None:
        arr = _freeze(self.samples)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("samples must be a non-empty 1-D array")
        if arr.size % self.params.M:
            raise ValueError(
                f"sample count {arr.size} is not a multiple of M={self.params.M}"
            )
        object.__setattr__(self, "samples", arr)

    @property
    def blocks(self) -> int:
        return self.samples.size // self.params.M

    def times(self) -> np.ndarray:
        p = np.arange(self.samples.size)
        return (self.start_block * self.params.M + p) * self.params.delay_step


@dataclass(frozen=True)
class ZakGrid:
    """Zak-domain samples on the fundamental cell.

    values[l, k] = Z(tau = l*T/M, nu = k*delta_f/N).  Values anywhere else on
    the extended lattice follow from quasi_extend.
    """

    params: DDGridParams
    values: np.ndarray

    def __post_init__(self) -> None:
        arr = _freeze(self.values)
        if arr.shape != (self.params.M, self.params.N):
            raise ValueError(
                f"values shape {arr.shape} does not match (M, N)="
                f"({self.params.M}, {self.params.N})"
            )
        object.__setattr__(self, "values", arr)


def discrete_zak(x: TDSamples) -> ZakGrid:
    """Zak transform of a sampled signal, summing all available blocks.

    Blocks enter with their absolute index n (including the start offset) in
    the Doppler phase exp(-j 2 pi n k / N); since that phase only depends on
    n mod N, blocks are folded onto N residues and transformed with one
    length-N DFT per delay bin.  For an N-block signal starting at block 0
    this is exactly a DFT of the block axis.
    """
    p = x.params
    blocks = x.samples.reshape(-1, p.M)
    folded = np.zeros((p.N, p.M), dtype=complex)
    residues = (x.start_block + np.arange(blocks.shape[0])) % p.N
    np.add.at(folded, residues, blocks)
    values = math.sqrt(p.T) * np.fft.fft(folded, axis=0).T
    return ZakGrid(params=p, values=values)


def inverse_zak(z: ZakGrid, blocks: int, start_block: int = 0) -> TDSamples:
    """Rebuild time-domain samples over a requested span of blocks.

    x(l*T/M + n*T) = 1/(sqrt(T) N) * sum_k Z[l, k] exp(j 2 pi n k / N); the
    block values repeat with period N, so any span is a periodic read-out of
    the N per-residue blocks.  Round-tripping an N-block signal through
    discrete_zak is the identity.
    """
    if blocks <= 0:
        raise ValueError(f"blocks must be positive, got {blocks}")
    p = z.params
    per_residue = np.fft.ifft(z.values, axis=1) / math.sqrt(p.T)  # (M, N)
    residues = (start_block + np.arange(blocks)) % p.N
    samples = per_residue[:, residues].T.reshape(-1)
    return TDSamples(params=p, start_block=start_block, samples=samples)


def zak_to_fourier(z: ZakGrid, f: float) -> complex:
    """Approximate Fourier value of the underlying N-block signal at f.

    Computes (1/sqrt(T)) * integral over [0, T) of Z(tau, f) e^{-j 2 pi f tau}
    as a Riemann sum over the M delay bins.  Z(l*T/M, f) at arbitrary f is the
    exact finite block sum of the signal reconstructed on blocks 0..N-1, so
    the only approximation is the delay Riemann sum: accuracy is O(1/M) and
    the result is exactly periodic in f with period M*delta_f.
    """
    if not np.isfinite(f):
        raise ValueError(f"frequency must be finite, got {f}")
    p = z.params
    x = inverse_zak(z, blocks=p.N, start_block=0).samples.reshape(p.N, p.M)
    block_phase = np.exp(-2j * np.pi * f * p.T * np.arange(p.N))
    z_at_f = math.sqrt(p.T) * (block_phase @ x)  # Z(l*T/M, f) for l = 0..M-1
    taus = np.arange(p.M) * p.delay_step
    riemann = np.sum(z_at_f * np.exp(-2j * np.pi * f * taus)) * p.delay_step
    return complex(riemann / math.sqrt(p.T))


def _lattice_split(value: float, step: float, count: int) -> tuple[int, int]:
    """Split value = (i + j*count) * step with i in [0, count); reject off-lattice."""
    q = value / step
    qi = np.rint(q)
    if abs(q - qi) > 1e-9 * max(1.0, abs(q)):
        raise ValueError(f"off-lattice query: {value!r} is not a multiple of {step!r}")
    i = int(qi) % count
    return i, (int(qi) - i) // count


def quasi_extend(z: ZakGrid, tau: float, nu: float) -> complex:
    """Evaluate the quasi-periodic extension at an extended-lattice point.

    (tau, nu) must lie on the fundamental lattice extended by integer (n*T,
    m*delta_f) within 1e-9 relative; the value is exp(j 2 pi nu n T) times the
    fundamental-cell entry (Doppler periodicity contributes no phase).
    """
    p = z.params
    l, n = _lattice_split(tau, p.delay_step, p.M)
    k, _ = _lattice_split(nu, p.doppler_step, p.N)
    return complex(np.exp(2j * np.pi * nu * n * p.T) * z.values[l, k])


def apply_dd_shift_grid(z: ZakGrid, l0: int, k0: int) -> ZakGrid:
    """Delay-Doppler shift by (l0*T/M, k0*delta_f/N) on the grid.

    Implements Z'(tau, nu) = exp(j 2 pi nu0 (tau - tau0)) * Z(tau - tau0,
    nu - nu0) with quasi_extend supplying the wrapped-around lookups, which
    matches the Zak transform of the delayed, Doppler-shifted time signal
    x(t - tau0) exp(j 2 pi nu0 (t - tau0)).
    """
    p = z.params
    tau0 = l0 * p.delay_step
    nu0 = k0 * p.doppler_step
    out = np.empty((p.M, p.N), dtype=complex)
    for l in range(p.M):
        tau = l * p.delay_step
        for k in range(p.N):
            nu = k * p.doppler_step
            out[l, k] = np.exp(2j * np.pi * nu0 * (tau - tau0)) * quasi_extend(
                z, tau - tau0, nu - nu0
            )
    return ZakGrid(params=p, values=out)
