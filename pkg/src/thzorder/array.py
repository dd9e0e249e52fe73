"""Uniform linear array reception in the frequency domain."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import C0, channel_response, noise_variance_per_bin
from .errors import ConfigurationError
from .pulse import pulse_spectrum

# the nominal 15 um spacing sits 0.07% above c/(2 * 10 THz)
ALIASING_SLACK = 1e-3


@dataclass(frozen=True)
class ArrayConfig:
    num_elements: int = 8
    spacing: float = 15e-6
    light_speed: float = C0

    def __post_init__(self):
        if int(self.num_elements) != self.num_elements or self.num_elements < 2:
            raise ConfigurationError(f"array needs at least 2 elements, got {self.num_elements!r}")
        if not self.spacing > 0:
            raise ConfigurationError("element spacing must be positive")
        object.__setattr__(self, "num_elements", int(self.num_elements))


def check_spatial_aliasing(config, f_max):
    """Reject spacings above half a wavelength at ``f_max`` (with a 0.1% slack)."""
    limit = config.light_speed / (2.0 * f_max)
    if config.spacing > limit * (1.0 + ALIASING_SLACK):
        raise ConfigurationError(
            f"element spacing {config.spacing:.4g} m exceeds half wavelength "
            f"{limit:.4g} m at {f_max:.4g} Hz (spatial aliasing)")


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Snapshot frequency bins ``f_min + b / dt`` for ``b = 0 .. L-1``."""

    snapshot_duration: float
    band: tuple
    bins: np.ndarray

    @property
    def bin_count(self):
        return len(self.bins)

    @property
    def bin_width(self):
        return 1.0 / self.snapshot_duration


def build_frequency_grid(band, snapshot_duration):
    """``L = floor(B * dt) + 1`` bins spaced ``1/dt`` from the lower band edge."""
    f_min, f_max = map(float, band)
    if not f_max > f_min:
        raise ConfigurationError(f"empty band {band!r}")
    if not snapshot_duration > 0:
        raise ConfigurationError("snapshot duration must be positive")
    # relative guard so e.g. 9 THz * 2 ps counts as exactly 18
    product = (f_max - f_min) * snapshot_duration
    count = int(math.floor(product * (1.0 + 1e-12))) + 1
    if count < 2:
        raise ConfigurationError(
            f"snapshot duration {snapshot_duration:.3g} s gives fewer than 2 bins over the band")
    bins = f_min + np.arange(count) / snapshot_duration
    bins = np.minimum(bins, f_max)
    bins.setflags(write=False)
    return FrequencyGrid(float(snapshot_duration), (f_min, f_max), bins)


def element_delay(i, spacing, theta_deg, light_speed=C0):
    """Arrival delay (s) at element ``i`` (1-based) relative to element 1."""
    return (np.asarray(i) - 1) * spacing * np.sin(np.radians(theta_deg)) / light_speed


def steering_vector(f_b, theta_deg, config):
    """Array manifold ``exp(-j 2 pi f tau_i)``; shape ``(..., N)`` for array ``f_b``."""
    tau = element_delay(np.arange(1, config.num_elements + 1), config.spacing, theta_deg,
                        config.light_speed)
    return np.exp(-2j * math.pi * np.multiply.outer(np.asarray(f_b, dtype=float), tau))


@dataclass(frozen=True, eq=False)
class ReceivedModel:
    """Deterministic part of the received field plus per-bin noise variance.

    ``signal`` has shape ``(L, N)``: ``H(f_b) a(f_b, theta) c_b`` where
    ``c_b = P_n(f_b) sqrt(1/dt)`` is the pulse Fourier coefficient of the bin.
    """

    grid: FrequencyGrid
    signal: np.ndarray
    noise_variance: np.ndarray
    pulse_coefficients: np.ndarray
    channel: np.ndarray


def received_model(spec, params, table, config, theta_deg, grid, noise=True):
    f_b = grid.bins
    coeff = pulse_spectrum(spec, f_b) * math.sqrt(grid.bin_width)
    h = channel_response(f_b, params, table)
    signal = (h * coeff)[:, None] * steering_vector(f_b, theta_deg, config)
    if noise:
        var = noise_variance_per_bin(f_b, grid.bin_width, params, table, spec.psd)
    else:
        var = np.zeros(len(f_b))
    return ReceivedModel(grid, signal, np.asarray(var, dtype=float), coeff, h)


@dataclass(frozen=True, eq=False)
class SnapshotMatrix:
    """Per-bin ``N x K`` Fourier coefficients, stacked as ``(L, N, K)``."""

    data: np.ndarray
    grid: FrequencyGrid

    @property
    def num_snapshots(self):
        return self.data.shape[-1]


def draw_snapshots(model, num_snapshots=1, rng=None):
    """Add circular complex Gaussian noise to ``num_snapshots`` copies of the pulse."""
    if num_snapshots < 1:
        raise ConfigurationError("need at least one snapshot")
    rng = np.random.default_rng(rng)
    L, N = model.signal.shape
    y = np.repeat(model.signal[:, :, None], num_snapshots, axis=2)
    if np.any(model.noise_variance > 0):
        scale = np.sqrt(model.noise_variance / 2.0)[:, None, None]
        z = rng.standard_normal((L, N, num_snapshots, 2))
        y = y + scale * (z[..., 0] + 1j * z[..., 1])
    return SnapshotMatrix(y, model.grid)


def synthesize_snapshots(spec, params, table, config, theta_deg, grid, num_snapshots=1, seed=None,
                         noise=True):
    model = received_model(spec, params, table, config, theta_deg, grid, noise=noise)
    return draw_snapshots(model, num_snapshots, seed)


@dataclass(frozen=True, eq=False)
class CovarianceEstimate:
    """Per-bin ``N x N`` covariance matrices, shape ``(L, N, N)``."""

    matrices: np.ndarray
    grid: FrequencyGrid = None


def sample_covariance(snapshots):
    y = snapshots.data
    r = np.einsum("lnk,lmk->lnm", y, y.conj()) / y.shape[-1]
    return CovarianceEstimate(r, snapshots.grid)


def analytic_covariance(spec, params, table, config, theta_deg, f_b, bin_width, noise=True):
    """Model covariance of a single bin: rank-1 pulse term plus white noise."""
    coeff = pulse_spectrum(spec, f_b) * math.sqrt(bin_width)
    h = channel_response(f_b, params, table)
    a = steering_vector(f_b, theta_deg, config)
    var = noise_variance_per_bin(f_b, bin_width, params, table, spec.psd) if noise else 0.0
    return abs(coeff) ** 2 * abs(h) ** 2 * np.outer(a, a.conj()) + var * np.eye(config.num_elements)
