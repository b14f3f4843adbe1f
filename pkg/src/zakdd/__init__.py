"""Zak-transform delay-Doppler toolkit.

Signal processing for modulation in the delay-Doppler domain: the discrete
Zak transform and its inverse, an orthonormal DD-localized pulse basis, the
DD/OTFS modulator pair, exact effective channel matrices for doubly
dispersive channels, and the spectral-efficiency / interference analyses
built on top.  The `zakdd` command line exposes each analysis as a
reproducible experiment writing CSV tables and matplotlib figures.
"""

from .analysis import (
    AvionicsConfig,
    InterferenceProfile,
    avionics_se_sweep,
    interference_profile,
    interference_sweep,
    ofdm_coupling,
    ofdm_interference,
    peak_bin,
    rough_interference_estimate,
    spectral_efficiency,
    tau_lattice_draws,
)
from .basis import (
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
from .channel import (
    ChannelPath,
    EffectiveChannel,
    NoiseModel,
    apply_noise_whitener,
    brute_force_y,
    effective_dd_channel,
    noise_covariance,
    sample_received_dd,
    zak_noise_draw,
)
from .modem import (
    DDSymbols,
    TFSymbols,
    dd_modulate,
    dd_waveform,
    gamma_fraction,
    isfft,
    modulation_mismatch,
    otfs_modulate,
    otfs_waveform,
    out_of_window_fraction,
    sfft,
)
from .numerics import (
    FactorizationError,
    dirichlet_ratio,
    logdet_capacity,
    real_mod,
    sinc_sq_integral,
)
from .rng import substream
from .zak import (
    DDGridParams,
    TDSamples,
    ZakGrid,
    apply_dd_shift_grid,
    discrete_zak,
    inverse_zak,
    quasi_extend,
    zak_to_fourier,
)

__version__ = "0.1.0"
