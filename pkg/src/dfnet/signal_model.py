"""Synthetic received signals and power measurements for a circular directional array.

Antenna ``n`` is 1-based throughout this module, matching the physical element
numbering; boresight of element ``n`` sits at ``2*pi*(n-1)/N``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class GainPattern:
    """Raised-cosine sector pattern ``g_min + (g_max - g_min) * ((1 + cos(dphi)) / 2) ** sharpness``."""

    g_min: float = 0.1
    g_max: float = 1.0
    sharpness: float = 2.0

    def __post_init__(self):
        if not self.g_min >= 0.0:
            raise ValueError(f"g_min must be >= 0, got {self.g_min}")
        if not self.g_max > self.g_min:
            raise ValueError(f"g_max must exceed g_min, got {self.g_max} <= {self.g_min}")
        if not self.sharpness >= 1.0:
            raise ValueError(f"sharpness must be >= 1, got {self.sharpness}")


@dataclass(frozen=True)
class ArrayConfig:
    n_antennas: int = 4
    radius_m: float = 0.1
    wavelength_m: float = 0.122
    gain_pattern: GainPattern = field(default_factory=GainPattern)

    def __post_init__(self):
        if int(self.n_antennas) != self.n_antennas or self.n_antennas < 2:
            raise ValueError(f"n_antennas must be an integer >= 2, got {self.n_antennas}")
        if not self.radius_m > 0.0:
            raise ValueError(f"radius_m must be > 0, got {self.radius_m}")
        if not self.wavelength_m > 0.0:
            raise ValueError(f"wavelength_m must be > 0, got {self.wavelength_m}")

    def boresight(self, n: int) -> float:
        _check_index(n, self)
        return TWO_PI * (n - 1) / self.n_antennas


@dataclass(frozen=True)
class SourceConfig:
    azimuth_rad: float
    signal_power: float = 1.0
    noise_power: float = 0.01

    def __post_init__(self):
        if not np.isfinite(self.azimuth_rad):
            raise ValueError(f"azimuth must be finite, got {self.azimuth_rad}")
        # frozen dataclass: normalise through object.__setattr__
        object.__setattr__(self, "azimuth_rad", wrap_angle(self.azimuth_rad))
        if not self.signal_power >= 0.0:
            raise ValueError(f"signal_power must be >= 0, got {self.signal_power}")
        if not self.noise_power >= 0.0:
            raise ValueError(f"noise_power must be >= 0, got {self.noise_power}")


def wrap_angle(theta):
    """Map angle(s) into [0, 2*pi)."""
    wrapped = np.mod(theta, TWO_PI)
    # np.mod can return exactly 2*pi for tiny negative inputs
    wrapped = np.where(wrapped >= TWO_PI, 0.0, wrapped)
    return float(wrapped) if np.ndim(wrapped) == 0 else wrapped


def _check_index(n: int, cfg: ArrayConfig) -> None:
    if not 1 <= n <= cfg.n_antennas:
        raise IndexError(f"antenna index {n} out of range 1..{cfg.n_antennas}")


def steering_phase(n: int, theta: float, cfg: ArrayConfig) -> float:
    """Path-length term ``d*cos(2*pi*(n-1)/N - theta)`` in meters."""
    return cfg.radius_m * np.cos(cfg.boresight(n) - theta)


def antenna_gain(n: int, theta, cfg: ArrayConfig):
    """Real amplitude gain of element ``n`` toward azimuth ``theta`` (scalar or array)."""
    g = cfg.gain_pattern
    lobe = 0.5 * (1.0 + np.cos(theta - cfg.boresight(n)))
    return g.g_min + (g.g_max - g.g_min) * lobe**g.sharpness


def antenna_response(n: int, theta: float, cfg: ArrayConfig) -> complex:
    phase = TWO_PI / cfg.wavelength_m * steering_phase(n, theta, cfg)
    return complex(antenna_gain(n, theta, cfg) * np.exp(1j * phase))


def expected_power(n: int, src: SourceConfig, cfg: ArrayConfig) -> float:
    """Ensemble-average power ``G_n(theta)**2 * P_s + sigma**2``."""
    return float(antenna_gain(n, src.azimuth_rad, cfg) ** 2 * src.signal_power + src.noise_power)


def expected_cycle(src: SourceConfig, cfg: ArrayConfig) -> np.ndarray:
    return np.array([expected_power(n, src, cfg) for n in range(1, cfg.n_antennas + 1)])


def _circular_gaussian(rng: np.random.Generator, power: float, size: int) -> np.ndarray:
    scale = np.sqrt(power / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def _draw_received(n, src, cfg, k_samples, rng, noise_power):
    a = antenna_response(n, src.azimuth_rad, cfg)
    s = _circular_gaussian(rng, src.signal_power, k_samples)
    noise = _circular_gaussian(rng, noise_power, k_samples)
    return a * s + noise


def sample_received(
    n: int, src: SourceConfig, cfg: ArrayConfig, k_samples: int, rng_seed=None
) -> np.ndarray:
    """Draw ``k_samples`` complex baseband samples ``a_n(theta) s(k) + n_n(k)`` at antenna ``n``.

    Both ``s`` and the noise are circularly-symmetric complex Gaussian with the powers
    given in ``src``. ``rng_seed`` may be anything accepted by ``np.random.default_rng``.
    """
    _check_index(n, cfg)
    if k_samples < 1:
        raise ValueError(f"k_samples must be >= 1, got {k_samples}")
    rng = np.random.default_rng(rng_seed)
    return _draw_received(n, src, cfg, k_samples, rng, src.noise_power)


def simulate_cycle(
    src: SourceConfig,
    cfg: ArrayConfig,
    k_per_antenna: int = 4096,
    rng_seed=None,
    interference_power=None,
) -> np.ndarray:
    """Measured powers ``[P_1, ..., P_N]`` for one switching cycle.

    Each antenna is averaged over its own ``k_per_antenna`` samples with fresh signal
    and noise draws. ``interference_power`` optionally adds an extra per-antenna
    complex Gaussian power on top of the thermal noise.
    """
    if k_per_antenna < 1:
        raise ValueError(f"k_per_antenna must be >= 1, got {k_per_antenna}")
    n_ant = cfg.n_antennas
    extra = np.zeros(n_ant) if interference_power is None else np.asarray(interference_power, float)
    if extra.shape != (n_ant,) or np.any(extra < 0):
        raise ValueError("interference_power must be a non-negative vector of length N")
    rng = np.random.default_rng(rng_seed)
    powers = np.empty(n_ant)
    for i in range(n_ant):
        r = _draw_received(i + 1, src, cfg, k_per_antenna, rng, src.noise_power + extra[i])
        powers[i] = np.mean(r.real**2 + r.imag**2)
    return powers
