"""Incoherent wideband MUSIC (IMUSIC) direction-of-arrival estimation."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .errors import ConfigurationError, NonHermitianError

DENOMINATOR_CLAMP = 1e-18
HERMITIAN_RTOL = 1e-10
ORTHONORMAL_TOL = 1e-8


@dataclass(frozen=True)
class AngleGrid:
    """Search grid in degrees, inclusive of both ends."""

    start: float = -90.0
    end: float = 90.0
    step: float = 0.025

    def __post_init__(self):
        if not self.step > 0:
            raise ConfigurationError("angle step must be positive")
        if self.size < 2:
            raise ConfigurationError("angle grid needs at least two points")

    @property
    def size(self):
        return int(math.floor((self.end - self.start) / self.step + 1e-9)) + 1

    @property
    def angles(self):
        return np.round(self.start + self.step * np.arange(self.size), 10)


@dataclass(frozen=True, eq=False)
class MusicSpectrum:
    angles: np.ndarray
    scores: np.ndarray

    def to_csv(self, path):
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(("angle_deg", "score"))
            for angle, score in zip(self.angles, self.scores):
                writer.writerow((repr(float(angle)), repr(float(score))))


def _matrices(covariances):
    return getattr(covariances, "matrices", covariances)


def check_hermitian(r):
    r = np.asarray(r)
    if r.shape[-1] != r.shape[-2]:
        raise NonHermitianError(f"covariance must be square, got shape {r.shape}")
    scale = np.linalg.norm(r, axis=(-2, -1))
    err = np.linalg.norm(r - np.conj(np.swapaxes(r, -1, -2)), axis=(-2, -1))
    if np.any(err > HERMITIAN_RTOL * np.maximum(scale, np.finfo(float).tiny)):
        raise NonHermitianError("covariance matrix is not Hermitian")


def _eigh(r, num_sources):
    r = np.asarray(_matrices(r))
    check_hermitian(r)
    n = r.shape[-1]
    if not 0 < num_sources < n:
        raise ConfigurationError(f"num_sources must be in [1, {n - 1}], got {num_sources}")
    # symmetrize away rounding so eigh sees an exactly Hermitian matrix
    r = 0.5 * (r + np.conj(np.swapaxes(r, -1, -2)))
    return np.linalg.eigh(r)


def noise_subspace(r, num_sources=1):
    """Eigenvectors of the ``N - num_sources`` smallest eigenvalues.

    Accepts a single ``N x N`` matrix or a stack ``(L, N, N)``.
    """
    _, vecs = _eigh(r, num_sources)
    e_n = vecs[..., : vecs.shape[-1] - num_sources]
    gram = np.conj(np.swapaxes(e_n, -1, -2)) @ e_n
    if np.max(np.abs(gram - np.eye(e_n.shape[-1]))) > ORTHONORMAL_TOL:
        raise np.linalg.LinAlgError("noise subspace lost orthonormality")
    return e_n


def imusic_spectrum(covariances, grid, angles, config, num_sources=1):
    """IMUSIC pseudo-spectrum summed over every bin of ``grid``.

    The noise projector ``E_n E_n^H`` equals ``I - U_s U_s^H`` for the
    signal eigenvectors ``U_s``; the kernel uses whichever basis is smaller.
    """
    r = np.asarray(_matrices(covariances))
    if r.ndim == 2:
        r = r[None]
    freqs = np.asarray(getattr(grid, "bins", grid), dtype=float)
    if r.shape[0] != len(freqs) or r.shape[0] < 1:
        raise ConfigurationError("need one covariance matrix per frequency bin")
    if r.shape[-1] != config.num_elements:
        raise ConfigurationError("covariance size does not match the array")
    _, vecs = _eigh(r, num_sources)
    n = r.shape[-1]
    complement = num_sources <= n - num_sources
    basis = vecs[..., n - num_sources:] if complement else vecs[..., : n - num_sources]
    theta = angles.angles
    phase_step = 2.0 * math.pi * config.spacing / config.light_speed
    scores = kernels.imusic_accumulate(freqs, phase_step, np.sin(np.radians(theta)),
                                       np.ascontiguousarray(basis), complement, DENOMINATOR_CLAMP)
    return MusicSpectrum(theta, scores)


def estimate_doa(spectrum):
    """Angle of the maximal score; ties go to the smallest absolute angle."""
    scores = np.asarray(spectrum.scores)
    peak = np.flatnonzero(scores == scores.max())
    angles = np.asarray(spectrum.angles)[peak]
    return float(angles[np.argmin(np.abs(angles))])
