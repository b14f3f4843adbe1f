"""Pulse family tests: evaluators, closed-form Zak representations, Gram."""

import numpy as np
import pytest

from zakdd.basis import (
    AnalyticSignal,
    PulseAnchor,
    alpha_gram,
    alpha_inner_product,
    basis_coefficient,
    eval_alpha,
    eval_psi,
    eval_q,
    eval_s,
    zak_psi,
    zak_q,
    zak_s,
)
from zakdd.zak import DDGridParams, TDSamples, discrete_zak


class TestWindowAndPulse:
    def test_rect_window_half_open(self):
        p = DDGridParams(T=1.0, M=4, N=3)
        assert eval_q(-p.T / 2, p) == 0.0
        assert eval_q(0.0, p) == 1.0
        assert eval_q(p.N * p.T - 1e-12, p) == 1.0
        assert eval_q(p.N * p.T, p) == 0.0

    def test_band_pulse_peak_and_zeros(self):
        p = DDGridParams(T=1.0, M=8, N=2)
        w = p.bandwidth
        assert eval_s(0.0, p) == pytest.approx(w)
        for k in (-3, -1, 1, 2, 9):
            assert abs(eval_s(k / w, p)) == pytest.approx(0.0, abs=1e-12)

    def test_band_pulse_spectrum_flat_in_band(self):
        # dense Riemann-sum Fourier transform of s over a long window
        p = DDGridParams(T=1.0, M=8, N=2)
        w = p.bandwidth
        span, step = 400.0, 1.0 / (16 * w)
        t = np.arange(-span, span, step)
        s = eval_s(t, p)
        for f, expect in ((0.5 * w, 1.0), (0.25 * w, 1.0), (1.5 * w, 0.0), (-0.5 * w, 0.0)):
            val = np.sum(s * np.exp(-2j * np.pi * f * t)) * step
            assert abs(val) == pytest.approx(expect, abs=0.02)


class TestPulseTrain:
    def test_peak_value_at_anchor(self):
        p = DDGridParams(T=1.0, M=12, N=14)
        anchor = PulseAnchor(0.6 * p.T, 0.2 * p.delta_f)
        val = eval_psi(anchor, anchor.tau0, p)
        assert val == pytest.approx(np.sqrt(p.T) * p.bandwidth, rel=1e-12)
        # normalized peak height is exactly 1
        assert np.sqrt(p.T) / p.M * abs(val) == pytest.approx(1.0, rel=1e-12)

    def test_tail_bound(self):
        p = DDGridParams(T=1.0, M=12, N=14)
        anchor = PulseAnchor(0.6 * p.T, 0.2 * p.delta_f)
        for t in (-7.3, -3.1, p.N * p.T + 2.6, p.N * p.T + 11.4):
            dist = max(0.0 - t, t - (p.N * p.T))  # distance outside the window
            bound = p.N * np.sqrt(p.T) * p.bandwidth / (np.pi * p.bandwidth * dist)
            assert abs(eval_psi(anchor, t, p)) <= bound

    def test_anchor_validation(self):
        p = DDGridParams(T=1.0, M=4, N=3)
        with pytest.raises(ValueError):
            eval_psi(PulseAnchor(-0.1, 0.0), 0.0, p)
        with pytest.raises(ValueError):
            eval_psi(PulseAnchor(0.0, p.delta_f), 0.0, p)


class TestAlpha:
    def test_value_at_origin(self):
        p = DDGridParams(T=2.0, M=6, N=5)
        expected = np.sqrt(p.M / (p.N * p.T))
        assert eval_alpha(0, 0, 0.0, p) == pytest.approx(expected, rel=1e-12)

    def test_peak_at_own_delay(self):
        p = DDGridParams(T=2.0, M=6, N=5)
        for k, l in ((0, 0), (2, 3), (4, 5)):
            val = eval_alpha(k, l, l * p.delay_step, p)
            assert val == pytest.approx(np.sqrt(p.M / (p.N * p.T)), rel=1e-12)

    def test_scaling_against_psi(self):
        p = DDGridParams(T=1.0, M=5, N=4)
        anchor = PulseAnchor(2 * p.delay_step, 3 * p.doppler_step)
        t = np.linspace(-1.0, 5.0, 37)
        np.testing.assert_allclose(
            eval_alpha(3, 2, t, p) * np.sqrt(p.M * p.N),
            eval_psi(anchor, t, p),
            atol=1e-12,
        )

    def test_unit_energy_critical_sum(self):
        p = DDGridParams(T=1.0, M=4, N=3)
        span = 64
        t = (np.arange(-span * p.M, (p.N + span) * p.M)) * p.delay_step
        vals = eval_alpha(1, 2, t, p)
        energy = np.sum(np.abs(vals) ** 2) * p.delay_step
        assert energy == pytest.approx(1.0, abs=1e-3)

    def test_index_validation(self):
        p = DDGridParams(T=1.0, M=4, N=3)
        with pytest.raises(ValueError):
            eval_alpha(3, 0, 0.0, p)
        with pytest.raises(ValueError):
            eval_alpha(0, 4, 0.0, p)


class TestClosedFormZak:
    def test_zak_q_peak(self):
        p = DDGridParams(T=1.7, M=4, N=9)
        assert zak_q(0.0, 0.0, p) == pytest.approx(np.sqrt(p.T) * p.N, rel=1e-12)

    def test_zak_s_peak_any_doppler(self):
        p = DDGridParams(T=1.7, M=4, N=9)
        for nu in (0.0, 0.21 * p.delta_f, 0.98 * p.delta_f):
            assert zak_s(0.0, nu, p) == pytest.approx(p.M / np.sqrt(p.T), rel=1e-12)

    def test_zak_q_matches_defining_sum(self):
        # q has finite support, so the sum over blocks is exact
        p = DDGridParams(T=1.0, M=4, N=9)
        for tau, nu in ((0.3 * p.T, 0.1 * p.delta_f), (1.7 * p.T, 0.83 * p.delta_f)):
            direct = np.sqrt(p.T) * sum(
                eval_q(tau + n * p.T, p) * np.exp(-2j * np.pi * nu * n * p.T)
                for n in range(-3, p.N + 3)
            )
            assert zak_q(tau, nu, p) == pytest.approx(direct, rel=1e-10)

    def test_zak_q_quasi_periodicity(self):
        p = DDGridParams(T=0.9, M=4, N=7)
        rng = np.random.default_rng(3)
        for _ in range(40):
            tau = rng.uniform(0, p.T)
            nu = rng.uniform(0, p.delta_f)
            assert zak_q(tau + p.T, nu, p) == pytest.approx(
                np.exp(2j * np.pi * nu * p.T) * zak_q(tau, nu, p), rel=1e-10
            )
            assert zak_q(tau, nu + p.delta_f, p) == pytest.approx(
                zak_q(tau, nu, p), rel=1e-10
            )

    def test_zak_s_quasi_periodicity(self):
        p = DDGridParams(T=0.9, M=5, N=7)
        rng = np.random.default_rng(4)
        points = [(rng.uniform(0, p.T), rng.uniform(0, p.delta_f)) for _ in range(30)]
        points += [(0.3 * p.T, 0.0), (0.77 * p.T, p.delta_f)]  # band-edge cases
        for tau, nu in points:
            assert zak_s(tau + p.T, nu, p) == pytest.approx(
                np.exp(2j * np.pi * nu * p.T) * zak_s(tau, nu, p), rel=1e-10
            )
            assert zak_s(tau, nu + p.delta_f, p) == pytest.approx(
                zak_s(tau, nu, p), rel=1e-10
            )

    def test_zak_s_band_edge_is_series_midpoint(self):
        # the defining series of Z_s at nu = 0 only converges in the symmetric
        # sense; its value is the midpoint across the jump of the generic
        # formula, checked here with a huge symmetric partial sum
        p = DDGridParams(T=1.0, M=4, N=3)
        tau = 0.37 * p.T
        big = 200000
        n = np.arange(-big, big + 1)
        series = np.sqrt(p.T) * np.sum(eval_s(tau + n * p.T, p))
        assert zak_s(tau, 0.0, p) == pytest.approx(series, rel=5e-4)

    def test_zak_psi_peak_magnitude(self):
        p = DDGridParams(T=1.0, M=12, N=14)
        anchor = PulseAnchor(0.6 * p.T, 0.2 * p.delta_f)
        val = zak_psi(anchor, anchor.tau0, anchor.nu0, p)
        assert abs(val) == pytest.approx(p.M * p.N, rel=1e-12)
        assert abs(val / (p.M * p.N)) ** 2 == pytest.approx(1.0, rel=1e-9)

    def test_zak_psi_doppler_zero(self):
        p = DDGridParams(T=1.0, M=12, N=14)
        anchor = PulseAnchor(0.6 * p.T, 0.2 * p.delta_f)
        val = zak_psi(anchor, anchor.tau0, anchor.nu0 + p.delta_f / p.N, p)
        assert abs(val) == pytest.approx(0.0, abs=1e-9)

    def test_zak_psi_separable_magnitude(self):
        p = DDGridParams(T=1.0, M=5, N=6)
        anchor = PulseAnchor(0.31 * p.T, 0.67 * p.delta_f)
        rng = np.random.default_rng(5)
        for _ in range(40):
            tau = rng.uniform(-p.T, 2 * p.T)
            nu = rng.uniform(-p.delta_f, 2 * p.delta_f)
            lhs = abs(zak_psi(anchor, tau, nu, p)) ** 2
            rhs = (
                abs(zak_q(anchor.tau0, nu - anchor.nu0, p)) ** 2
                * abs(zak_s(tau - anchor.tau0, nu, p)) ** 2
            )
            assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)

    def test_zak_psi_matches_truncated_grid(self):
        # closed form vs discrete Zak of the sampled pulse train
        p = DDGridParams(T=1.0, M=6, N=5)
        anchor = PulseAnchor(0.45 * p.T, 0.85 * p.delta_f)
        span = 256
        t = (np.arange((p.N + 2 * span) * p.M) - span * p.M) * p.delay_step
        grid = discrete_zak(TDSamples(p, -span, eval_psi(anchor, t, p)))
        taus = np.arange(p.M)[:, None] * p.delay_step
        nus = np.arange(p.N)[None, :] * p.doppler_step
        closed = zak_psi(anchor, taus, nus, p)
        scale = np.max(np.abs(closed))
        assert np.max(np.abs(grid.values - closed)) / scale <= 1e-3

    def test_energy_localization_around_anchor(self):
        # the anchor (0.6 T, 0.2 delta_f) sits at fractional bin offsets
        # (7.2, 2.8), which splits its energy across neighbouring bins: the
        # best 3x3 window holds 91.45% exactly (not 95%, which the 5x5
        # window is the first to reach at 95.3%)
        p = DDGridParams(T=1.0, M=12, N=14)
        anchor = PulseAnchor(0.6 * p.T, 0.2 * p.delta_f)
        taus = np.arange(p.M)[:, None] * p.delay_step
        nus = np.arange(p.N)[None, :] * p.doppler_step
        power = np.abs(zak_psi(anchor, taus, nus, p)) ** 2
        l_star = int(round(anchor.tau0 / p.delay_step)) % p.M
        k_star = int(round(anchor.nu0 / p.doppler_step)) % p.N

        def window_fraction(radius: int) -> float:
            window = [
                ((l_star + dl) % p.M, (k_star + dk) % p.N)
                for dl in range(-radius, radius + 1)
                for dk in range(-radius, radius + 1)
            ]
            return sum(power[l, k] for l, k in window) / power.sum()

        assert window_fraction(1) >= 0.90  # measured 0.9145
        assert window_fraction(2) >= 0.95  # measured 0.9527


class TestBasisCoefficient:
    def test_pulse_train_projects_onto_own_anchor(self):
        p = DDGridParams(T=1.0, M=5, N=4)
        anchor = PulseAnchor(2 * p.delay_step, 3 * p.doppler_step)
        psi = AnalyticSignal.pulse_train(p, anchor)
        val = basis_coefficient(psi, anchor, p, trunc_blocks=32)
        assert val == pytest.approx(p.M * p.N, rel=1e-12)

    def test_alpha_projection_scaling(self):
        p = DDGridParams(T=1.0, M=5, N=4)
        anchor = PulseAnchor(1 * p.delay_step, 2 * p.doppler_step)
        alpha = AnalyticSignal.basis_signal(p, 2, 1)
        val = basis_coefficient(alpha, anchor, p, trunc_blocks=32)
        assert val == pytest.approx(np.sqrt(p.M * p.N), rel=1e-12)

    def test_window_projects_to_zak_q_peak(self):
        p = DDGridParams(T=1.3, M=5, N=4)
        q = AnalyticSignal.rect_window(p)
        val = basis_coefficient(q, PulseAnchor(0.0, 0.0), p, trunc_blocks=8)
        assert val == pytest.approx(np.sqrt(p.T) * p.N, rel=1e-12)

    def test_zero_signal(self):
        p = DDGridParams(T=1.0, M=4, N=3)
        zero = AnalyticSignal.superposition(p, [], [])
        assert basis_coefficient(zero, PulseAnchor(0.1, 0.2), p) == 0.0

    def test_superposition_linearity(self):
        p = DDGridParams(T=1.0, M=4, N=3)
        a = AnalyticSignal.basis_signal(p, 0, 1)
        b = AnalyticSignal.basis_signal(p, 2, 3)
        combo = AnalyticSignal.superposition(p, [2.0, -1.0j], [a, b])
        anchor = PulseAnchor(3 * p.delay_step, 0.0)
        val = combo(np.array([0.0, 0.7, 2.2]))
        direct = 2.0 * a(np.array([0.0, 0.7, 2.2])) - 1.0j * b(np.array([0.0, 0.7, 2.2]))
        np.testing.assert_allclose(val, direct, atol=1e-14)
        assert basis_coefficient(combo, anchor, p, 16) == pytest.approx(
            2 * basis_coefficient(a, anchor, p, 16)
            - 1j * basis_coefficient(b, anchor, p, 16),
            rel=1e-12,
        )


def numeric_inner_product(p, k1, l1, k2, l2, span=64, oversample=16):
    """Oversampled Riemann integral of alpha1 * conj(alpha2) (independent oracle)."""
    step = p.delay_step / oversample
    t = np.arange(-span * p.T, (p.N + span) * p.T, step)
    a1 = eval_alpha(k1, l1, t, p)
    a2 = eval_alpha(k2, l2, t, p)
    return np.sum(a1 * np.conj(a2)) * step


class TestOrthonormality:
    def test_unit_norm(self):
        p = DDGridParams(T=1.0, M=4, N=3)
        for k, l in ((0, 0), (1, 2), (2, 3)):
            assert alpha_inner_product(k, l, k, l, p) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_neighbours(self):
        p = DDGridParams(T=1.0, M=4, N=3)
        assert abs(alpha_inner_product(0, 0, 0, 1, p)) <= 1e-12
        assert abs(alpha_inner_product(0, 0, 1, 0, p)) <= 1e-12
        assert abs(alpha_inner_product(2, 1, 1, 3, p)) <= 1e-12

    def test_against_numeric_integration(self):
        p = DDGridParams(T=1.0, M=4, N=3)
        for pair in (((0, 0), (0, 0)), ((0, 0), (0, 1)), ((1, 2), (2, 2)), ((1, 1), (1, 1))):
            (k1, l1), (k2, l2) = pair
            exact = alpha_inner_product(k1, l1, k2, l2, p)
            numeric = numeric_inner_product(p, k1, l1, k2, l2)
            assert exact == pytest.approx(numeric, abs=2e-3)

    def test_gram_is_identity(self):
        p = DDGridParams(T=1.0, M=5, N=4)
        gram = alpha_gram(p)
        np.testing.assert_allclose(gram, np.eye(p.M * p.N), atol=1e-12)

    def test_gram_matches_pairwise_entries(self):
        p = DDGridParams(T=0.5, M=3, N=4)
        gram = alpha_gram(p)
        rng = np.random.default_rng(6)
        for _ in range(10):
            k1, k2 = rng.integers(0, p.N, 2)
            l1, l2 = rng.integers(0, p.M, 2)
            assert gram[k1 * p.M + l1, k2 * p.M + l2] == pytest.approx(
                alpha_inner_product(k1, l1, k2, l2, p), abs=1e-13
            )
