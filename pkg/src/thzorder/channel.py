"""Terahertz channel: spreading and molecular absorption loss, absorption noise.

Absorption coefficients come from an :class:`AbsorptionTable`, either loaded
from a two-column CSV (``frequency_hz,k_per_m``) or generated from a list of
Lorentzian lines.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import constants, integrate

from .errors import AbsorptionFormatError, AbsorptionRangeError, ConfigurationError

C0 = constants.c
K_BOLTZMANN = constants.k
ROOM_TEMPERATURE = 296.0
CSV_HEADER = ("frequency_hz", "k_per_m")


def _frozen(values):
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class AbsorptionTable:
    """Sampled medium absorption coefficient ``k(f)`` in 1/m.

    ``species`` optionally holds ``(mole_fraction, per_species_coefficients)``
    pairs sampled on the same frequencies; the combined coefficients must then
    equal the mole-fraction weighted sum.
    """

    frequencies: np.ndarray
    coefficients: np.ndarray
    species: tuple = ()
    name: str = ""

    def __post_init__(self):
        f = _frozen(self.frequencies)
        k = _frozen(self.coefficients)
        if f.ndim != 1 or f.shape != k.shape or f.size < 2:
            raise ConfigurationError("absorption table needs at least two matching samples")
        if not (np.all(np.isfinite(f)) and np.all(np.isfinite(k))):
            raise ConfigurationError("absorption table contains non-finite values")
        if np.any(np.diff(f) <= 0):
            raise ConfigurationError("absorption table frequencies must be strictly increasing")
        if np.any(k < 0):
            raise ConfigurationError("absorption coefficients must be non-negative")
        species = tuple((float(x), _frozen(kq)) for x, kq in self.species)
        if species:
            combined = np.zeros_like(f)
            for x, kq in species:
                if not 0.0 <= x <= 1.0:
                    raise ConfigurationError(f"mole fraction {x} outside [0, 1]")
                if kq.shape != f.shape or np.any(kq < 0):
                    raise ConfigurationError("species coefficients must match the frequency grid")
                combined = combined + x * kq
            if not np.allclose(combined, k, rtol=1e-9, atol=0.0):
                raise ConfigurationError("combined coefficients differ from the species sum")
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "coefficients", k)
        object.__setattr__(self, "species", species)

    @classmethod
    def from_species(cls, frequencies, species, name=""):
        """Combine per-species coefficients ``K_q`` with mole fractions ``x_q``."""
        combined = np.zeros(len(frequencies))
        for x, kq in species:
            combined = combined + float(x) * np.asarray(kq, dtype=float)
        return cls(frequencies, combined, tuple(species), name)

    @property
    def f_min(self):
        return float(self.frequencies[0])

    @property
    def f_max(self):
        return float(self.frequencies[-1])

    @property
    def min_step(self):
        return float(np.min(np.diff(self.frequencies)))

    def __call__(self, f):
        return absorption_coefficient(self, f)


def absorption_coefficient(table, f):
    """Linearly interpolated ``k(f)``; no extrapolation outside the table."""
    f_arr = np.asarray(f, dtype=float)
    if f_arr.size and (np.min(f_arr) < table.f_min or np.max(f_arr) > table.f_max):
        raise AbsorptionRangeError(
            f"frequency outside absorption table range [{table.f_min:.6g}, {table.f_max:.6g}] Hz")
    k = np.interp(f_arr, table.frequencies, table.coefficients)
    return k if k.ndim else float(k)


@dataclass(frozen=True)
class ChannelParams:
    """Link geometry and physical constants; ``antenna_center`` is ``f_o``."""

    distance: float
    antenna_center: float
    band: tuple = (1e12, 10e12)
    light_speed: float = C0
    room_temperature: float = ROOM_TEMPERATURE
    boltzmann: float = K_BOLTZMANN

    def __post_init__(self):
        if not (math.isfinite(self.distance) and self.distance > 0):
            raise ConfigurationError(f"path length must be positive, got {self.distance!r}")
        if not self.antenna_center > 0:
            raise ConfigurationError("antenna center frequency must be positive")
        lo, hi = self.band
        if not hi > lo:
            raise ConfigurationError(f"empty band {self.band!r}")
        object.__setattr__(self, "band", (float(lo), float(hi)))

    @property
    def spreading_magnitude(self):
        return self.light_speed / (4.0 * math.pi * self.distance * self.antenna_center)


def spreading_loss(f, params):
    """Free-space spreading term; constant magnitude, linear propagation phase."""
    f = np.asarray(f, dtype=float)
    out = params.spreading_magnitude * np.exp(-2j * math.pi * f * params.distance / params.light_speed)
    return out if out.ndim else complex(out)


def absorption_loss(f, params, table):
    out = np.exp(-0.5 * absorption_coefficient(table, f) * params.distance)
    return out if np.ndim(out) else float(out)


def channel_response(f, params, table):
    return spreading_loss(f, params) * absorption_loss(f, params, table)


def _emissivity(f, params, table):
    # 1 - exp(-k d); expm1 keeps precision for small k d
    return -np.expm1(-absorption_coefficient(table, f) * params.distance)


def molecular_noise_temperature(f, params, table):
    out = params.room_temperature * _emissivity(f, params, table)
    return out if np.ndim(out) else float(out)


def background_noise_psd(f, params, table):
    """Background absorption noise PSD (W/Hz) at the configured path length."""
    aperture = (params.light_speed / (math.sqrt(4.0 * math.pi) * params.antenna_center)) ** 2
    out = params.boltzmann * params.room_temperature * _emissivity(f, params, table) * aperture
    return out if np.ndim(out) else float(out)


def self_noise_psd(f, params, table, pulse_psd):
    """Self-induced absorption noise PSD (W/Hz).

    ``pulse_psd`` is either an array matching ``f`` or a callable ``S_P(f)``.
    """
    sp = pulse_psd(f) if callable(pulse_psd) else pulse_psd
    out = np.asarray(sp, dtype=float) * _emissivity(f, params, table) * params.spreading_magnitude ** 2
    return out if np.ndim(out) else float(out)


def total_noise_psd(f, params, table, pulse_psd):
    return background_noise_psd(f, params, table) + self_noise_psd(f, params, table, pulse_psd)


def _subintervals(bin_width, table, minimum=8):
    # at least 4 sub-intervals per table interval; even count for Simpson
    count = max(minimum, int(math.ceil(4.0 * bin_width / table.min_step)))
    return count + count % 2


def noise_variance_per_bin(f_b, bin_width, params, table, pulse_psd, subintervals=None):
    """Noise power (W) in each bin ``[f_b - w/2, f_b + w/2]``.

    Simpson quadrature of the total noise PSD with at least 8 sub-intervals
    per bin, refined so every table interval gets several samples.
    """
    f_b = np.asarray(f_b, dtype=float)
    if not bin_width > 0:
        raise ConfigurationError("bin width must be positive")
    m = max(int(subintervals or _subintervals(bin_width, table)), 8)
    offsets = np.linspace(-0.5, 0.5, m + 1) * bin_width
    grid = f_b[..., None] + offsets
    s_n = total_noise_psd(grid, params, table, pulse_psd)
    out = integrate.simpson(s_n, x=grid, axis=-1)
    return out if out.ndim else float(out)


def lorentzian_absorption(f, lines):
    """Sum of Lorentzian lines ``strength * hw^2 / ((f - center)^2 + hw^2)``."""
    f = np.asarray(f, dtype=float)
    k = np.zeros_like(f)
    for center, strength, half_width in lines:
        k = k + strength * half_width ** 2 / ((f - center) ** 2 + half_width ** 2)
    return k


def synthetic_absorption_table(lines, band=(1e12, 10e12), resolution=1e9, name="synthetic"):
    """Sample a Lorentzian line list on a uniform grid covering ``band``."""
    lo, hi = map(float, band)
    if not hi > lo or not resolution > 0:
        raise ConfigurationError("synthetic table needs a nonempty band and positive resolution")
    count = int(round((hi - lo) / resolution)) + 1
    f = np.linspace(lo, hi, count)
    return AbsorptionTable(f, lorentzian_absorption(f, lines), name=name)


# Water-vapour-like line list (center THz, peak k 1/m, half width GHz) for
# humid summer air.  Imitates the structure of real THz absorption: clusters
# of strong resonances separated by low-loss windows.
_SUMMER_AIR_LINES = [
    (1.097, 20, 8), (1.163, 12.5, 8), (1.410, 15, 8), (1.669, 60, 10), (1.717, 30, 10),
    (1.762, 25, 10), (1.867, 15, 10), (1.919, 20, 10), (2.041, 15, 10), (2.164, 20, 12),
    (2.196, 15, 12), (2.265, 25, 12), (2.344, 20, 12), (2.392, 15, 12), (2.531, 10, 12),
    (2.640, 60, 12), (2.685, 20, 12), (2.774, 75, 12), (2.969, 15, 12), (3.013, 30, 12),
    (3.168, 20, 12), (3.331, 60, 14), (3.536, 25, 14), (3.655, 30, 14), (3.808, 25, 14),
    (3.977, 40, 14), (4.166, 30, 14), (4.399, 25, 14), (4.734, 35, 16), (5.108, 25, 16),
    (5.275, 45, 16), (5.526, 30, 16), (5.781, 40, 16), (6.016, 25, 16), (6.319, 45, 16),
    (6.548, 30, 16), (6.843, 40, 16), (7.153, 35, 18), (7.413, 45, 18), (7.686, 30, 18),
    (7.956, 40, 18), (8.247, 35, 18), (8.581, 45, 18), (8.875, 35, 18), (9.182, 40, 18),
    (9.465, 30, 18), (9.818, 40, 18),
]

PRESETS = {
    "summer-air": [(c * 1e12, s, hw * 1e9) for c, s, hw in _SUMMER_AIR_LINES],
    "vacuum": [],
}


def builtin_table(name, band=(1e12, 10e12), resolution=1e9):
    try:
        lines = PRESETS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown absorption preset {name!r}; choose from {sorted(PRESETS)}") from None
    # pad so bin edges at the band limits stay inside the table
    pad = 0.5e12
    lo, hi = band
    return synthetic_absorption_table(lines, (max(lo - pad, resolution), hi + pad), resolution, name)


def check_absorption_source(source):
    """Validate a ``builtin:NAME`` / ``file:PATH`` string without loading it."""
    kind, sep, value = str(source).partition(":")
    if not sep or not value:
        raise ConfigurationError(f"absorption source must be builtin:NAME or file:PATH, got {source!r}")
    if kind == "builtin" and value not in PRESETS:
        raise ConfigurationError(f"unknown builtin absorption preset {value!r}; choose from {sorted(PRESETS)}")
    if kind == "file" and not Path(value).is_file():
        raise ConfigurationError(f"absorption file not found: {value}")
    if kind not in ("builtin", "file"):
        raise ConfigurationError(f"unknown absorption source kind {kind!r}")
    return kind, value


def resolve_absorption(source, band=(1e12, 10e12)):
    """Build a table from ``builtin:NAME`` or ``file:PATH``."""
    if isinstance(source, AbsorptionTable):
        return source
    kind, value = check_absorption_source(source)
    if kind == "builtin":
        return builtin_table(value, band)
    return load_absorption_csv(value)


def load_absorption_csv(path):
    """Read a ``frequency_hz,k_per_m`` CSV; ``#`` lines and a header are skipped."""
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"absorption file not found: {path}")
    freqs, coeffs = [], []
    with path.open(newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if not freqs and tuple(c.strip() for c in row) == CSV_HEADER:
                continue
            if len(row) != 2:
                raise AbsorptionFormatError(f"expected 2 columns, got {len(row)}", lineno)
            try:
                f, k = float(row[0]), float(row[1])
            except ValueError:
                raise AbsorptionFormatError(f"non-numeric value in {row!r}", lineno) from None
            if not (math.isfinite(f) and math.isfinite(k)):
                raise AbsorptionFormatError("non-finite value", lineno)
            if k < 0:
                raise AbsorptionFormatError(f"negative absorption coefficient {k}", lineno)
            if freqs and f <= freqs[-1]:
                raise AbsorptionFormatError(
                    f"frequency {f} not strictly increasing (previous {freqs[-1]})", lineno)
            freqs.append(f)
            coeffs.append(k)
    if len(freqs) < 2:
        raise AbsorptionFormatError("need at least two samples")
    return AbsorptionTable(freqs, coeffs, name=f"file:{path}")


def save_absorption_csv(table, path):
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for f, k in zip(table.frequencies, table.coefficients):
            writer.writerow((repr(float(f)), repr(float(k))))
