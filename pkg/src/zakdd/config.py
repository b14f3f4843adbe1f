"""Experiment configuration: flat INI files with strict validation.

A config file has up to three sections: ``[experiment]`` (name, seed),
``[grid]`` (T, M, N) and one section named after the experiment carrying its
parameters.  Keys are flat ``key = value`` pairs; unknown sections or keys are
rejected before anything runs.  Every experiment has desk-scale defaults, so
an empty config (or none at all) is valid.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from typing import Callable

from .zak import DDGridParams

__all__ = ["ConfigError", "ExperimentConfig", "EXPERIMENTS", "load_config"]


class ConfigError(Exception):
    """Invalid experiment configuration."""


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigError(f"expected an integer, got {text!r}") from exc


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"expected a number, got {text!r}") from exc


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(_parse_int(part) for part in text.split(",") if part.strip())


def _parse_float_list(text: str) -> tuple[float, ...]:
    return tuple(_parse_float(part) for part in text.split(",") if part.strip())


def _parse_paths(text: str) -> tuple[tuple[float, float, float, float], ...]:
    """Channel paths: semicolon-separated quads gain_re,gain_im,delay_bins,doppler_bins.

    Delay is in units of T/M, Doppler in units of delta_f/N, so path geometry
    is stated relative to the grid and survives grid rescaling.
    """
    paths = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = _parse_float_list(chunk)
        if len(parts) != 4:
            raise ConfigError(
                f"path {chunk!r} must have 4 fields "
                "(gain_re, gain_im, delay_bins, doppler_bins)"
            )
        paths.append(parts)
    if not paths:
        raise ConfigError("at least one channel path is required")
    return tuple(paths)


# name -> (grid defaults (T, M, N), {param: (parser, default)})
EXPERIMENTS: dict[str, tuple[tuple[float, int, int], dict]] = {
    "zak-check": (
        (1.0, 3, 4),
        {"trials": (_parse_int, 25)},
    ),
    "basis-gram": (
        (1.0, 12, 14),
        {},
    ),
    "modulate-compare": (
        (1.0, 8, 8),
        {
            "m_list": (_parse_int_list, (8, 16, 32, 64)),
            "oversample": (_parse_int, 8),
        },
    ),
    "channel-oracle": (
        (5e-4, 4, 3),
        {
            "p_list": (_parse_int_list, (128, 256, 512, 1024)),
            "paths": (
                _parse_paths,
                ((0.8, -0.3, 0.37, 0.21), (0.5, 0.1, 1.62, -0.8)),
            ),
        },
    ),
    "se": (
        (5e-4, 4, 3),
        {
            "rho_db": (_parse_float_list, (0.0, 5.0, 10.0, 15.0, 20.0)),
            "paths": (
                _parse_paths,
                ((0.8, -0.3, 0.37, 0.21), (0.5, 0.1, 1.62, -0.8)),
            ),
        },
    ),
    "interference": (
        (1.0, 45, 46),
        {
            "n_list": (_parse_int_list, (23, 46, 92)),
            "k_list": (_parse_int_list, (11, 23, 46)),
            "l": (_parse_int, 23),
            "nu_min": (_parse_float, 0.0),
            "nu_max": (_parse_float, 2.0),
            "nu_points": (_parse_int, 101),
            "tau_draws": (_parse_int, 64),
            "threshold": (_parse_float, 0.99),
            "spread_nu": (_parse_float, 0.2),
            "spread_n_list": (_parse_int_list, (23, 46)),
            "spread_points": (_parse_int, 601),
        },
    ),
    "ofdm-compare": (
        (1.0, 45, 46),
        {
            "k": (_parse_int, 23),
            "l": (_parse_int, 23),
            "nu_min": (_parse_float, 0.0),
            "nu_max": (_parse_float, 0.5),
            "nu_points": (_parse_int, 51),
            "tau_draws": (_parse_int, 64),
            "threshold": (_parse_float, 0.99),
        },
    ),
    "avionics": (
        (5e-4, 45, 46),
        {
            "rician_k_db": (_parse_float, 15.0),
            "excess_delay": (_parse_float, 33e-6),
            "beamwidth_deg": (_parse_float, 3.5),
            "carrier_hz": (_parse_float, 5.06e9),
            "speeds": (_parse_float_list, (50.0, 100.0, 150.0, 200.0, 250.0)),
            "rho_db": (_parse_float_list, (10.0, 20.0)),
            "draws": (_parse_int, 20),
            "full_draws": (_parse_int, 100),
        },
    ),
}


@dataclass
class ExperimentConfig:
    """A validated experiment: name, lattice, seed and resolved parameters."""

    experiment: str
    grid: DDGridParams
    seed: int
    params: dict = field(default_factory=dict)


def _defaults_for(name: str) -> ExperimentConfig:
    if name not in EXPERIMENTS:
        raise ConfigError(
            f"unknown experiment {name!r}; choose from {', '.join(sorted(EXPERIMENTS))}"
        )
    (t, m, n), spec = EXPERIMENTS[name]
    params = {key: default for key, (_, default) in spec.items()}
    return ExperimentConfig(
        experiment=name, grid=DDGridParams(T=t, M=m, N=n), seed=1, params=params
    )


def load_config(
    path: str | None,
    experiment: str | None = None,
    seed: int | None = None,
) -> ExperimentConfig:
    """Resolve a config file plus overrides into a validated ExperimentConfig.

    Either the file's [experiment] section or the `experiment` argument must
    name the experiment; when both are present they must agree.  A `seed`
    argument overrides the file.
    """
    parser = configparser.ConfigParser(interpolation=None)
    if path is not None:
        read = parser.read(path)
        if not read:
            raise ConfigError(f"cannot read config file {path!r}")

    file_name = None
    file_seed = None
    if parser.has_section("experiment"):
        for key in parser["experiment"]:
            if key == "name":
                file_name = parser["experiment"]["name"].strip()
            elif key == "seed":
                file_seed = _parse_int(parser["experiment"]["seed"])
                if file_seed < 0:
                    raise ConfigError("seed must be a non-negative integer")
            else:
                raise ConfigError(f"unknown key {key!r} in section [experiment]")

    if experiment is not None and file_name is not None and experiment != file_name:
        raise ConfigError(
            f"config names experiment {file_name!r} but {experiment!r} was requested"
        )
    name = experiment or file_name
    if name is None:
        raise ConfigError("no experiment named (pass one or set [experiment] name)")

    cfg = _defaults_for(name)
    if file_seed is not None:
        cfg.seed = file_seed
    if seed is not None:
        if seed < 0:
            raise ConfigError("seed must be a non-negative integer")
        cfg.seed = seed

    t, m, n = cfg.grid.T, cfg.grid.M, cfg.grid.N
    if parser.has_section("grid"):
        for key in parser["grid"]:
            value = parser["grid"][key]
            if key == "t":
                t = _parse_float(value)
            elif key == "m":
                m = _parse_int(value)
            elif key == "n":
                n = _parse_int(value)
            else:
                raise ConfigError(f"unknown key {key!r} in section [grid]")
        try:
            cfg.grid = DDGridParams(T=t, M=m, N=n)
        except ValueError as exc:
            raise ConfigError(f"invalid grid: {exc}") from exc

    _, spec = EXPERIMENTS[name]
    for section in parser.sections():
        if section in ("experiment", "grid"):
            continue
        if section != name:
            raise ConfigError(f"unknown section [{section}] for experiment {name!r}")
        for key in parser[section]:
            if key not in spec:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
            parse: Callable = spec[key][0]
            try:
                cfg.params[key] = parse(parser[section][key])
            except ConfigError as exc:
                raise ConfigError(f"[{section}] {key}: {exc}") from exc
    return cfg
