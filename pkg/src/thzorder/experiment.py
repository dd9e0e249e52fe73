"""Monte Carlo harness: seeded trials, TPR accounting and parameter sweeps.

Seeds are hierarchical.  Trial ``t`` of order ``n`` at sweep point ``i``
draws from ``numpy.random.SeedSequence(base_seed, spawn_key=(i, n, t))``, so
any single trial can be replayed with :func:`trial_seed` and
:func:`run_trial` without running the sweep around it.
"""

from __future__ import annotations

import csv
import dataclasses
import functools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .array import (ArrayConfig, build_frequency_grid, check_spatial_aliasing, draw_snapshots,
                    received_model, sample_covariance)
from .channel import ChannelParams, check_absorption_source, resolve_absorption
from .classifier import build_reference_table, classify_order, estimate_psd, rms_spread_estimate
from .doa import AngleGrid, estimate_doa, imusic_spectrum
from .errors import ConfigurationError
from .pulse import MAX_ORDER, PulseSpec

log = logging.getLogger(__name__)

MIN_SNAPSHOT_DURATION = 2e-12
DEFAULT_THETA = 15.7125

SWEEP_FIELDS = {
    "path_length": "distance",
    "snapshot_duration": "snapshot_duration",
    "num_elements": "num_elements",
}


@dataclass(frozen=True)
class TrialConfig:
    """Everything a trial depends on besides the true order and its seed.

    All quantities are SI: Hz, W, m, s, degrees for angles.
    """

    orders: tuple = (1, 4, 10)
    center_frequency: float = 6e12
    power: float = 1e-6
    distance: float = 0.5
    snapshot_duration: float = 16e-12
    num_elements: int = 8
    spacing: float = 15e-6
    angles: AngleGrid = field(default_factory=AngleGrid)
    absorption: str = "builtin:summer-air"
    theta: float = DEFAULT_THETA
    trials: int = 200
    seed: int = 0
    noise: bool = True
    band: tuple = (1e12, 10e12)
    antenna_center: float = None
    spread_band: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(sorted(set(int(n) for n in self.orders))))
        object.__setattr__(self, "band", tuple(float(b) for b in self.band))
        if self.spread_band is not None:
            object.__setattr__(self, "spread_band", tuple(float(b) for b in self.spread_band))
        if not self.orders or min(self.orders) < 1 or max(self.orders) > MAX_ORDER:
            raise ConfigurationError(f"orders must be within 1..{MAX_ORDER}, got {self.orders}")
        if int(self.trials) != self.trials or self.trials < 1:
            raise ConfigurationError("trials per order must be a positive integer")
        if self.snapshot_duration < MIN_SNAPSHOT_DURATION * (1 - 1e-9):
            raise ConfigurationError(
                f"snapshot duration {self.snapshot_duration * 1e12:.4g} ps is below the 2 ps minimum "
                "(the window must exceed the longest pulse: order 10 at 3 THz)")
        if not self.power > 0:
            raise ConfigurationError("pulse power must be positive")
        if not -90.0 <= self.theta <= 90.0:
            raise ConfigurationError("direction of arrival must lie in [-90, 90] degrees")
        if self.seed < 0:
            raise ConfigurationError("seed must be non-negative")
        # delegate remaining checks to the domain types
        check_absorption_source(self.absorption)
        self.channel_params()
        check_spatial_aliasing(self.array_config(), self.band[1])
        build_frequency_grid(self.band, self.snapshot_duration)

    def channel_params(self):
        return ChannelParams(self.distance, self.antenna_center or self.center_frequency, self.band)

    def array_config(self):
        return ArrayConfig(self.num_elements, self.spacing)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


@functools.lru_cache(maxsize=None)
def _absorption(source, band):
    return resolve_absorption(source, band)


@functools.lru_cache(maxsize=256)
def _context(config, order):
    # deterministic part of a trial, shared by every seed
    table = _absorption(config.absorption, config.band)
    grid = build_frequency_grid(config.band, config.snapshot_duration)
    spec = PulseSpec(order, config.center_frequency, config.power)
    array = config.array_config()
    model = received_model(spec, config.channel_params(), table, array, config.theta, grid,
                           noise=config.noise)
    refs = build_reference_table(config.orders, config.center_frequency,
                                 config.spread_band or config.band)
    return model, refs, array


def trial_seed(config, sweep_index, order, trial):
    return np.random.SeedSequence(config.seed, spawn_key=(sweep_index, order, trial))


def run_trial(config, true_order, seed):
    """Synthesize one pulse, estimate its DOA and PSD, classify its order."""
    if true_order not in config.orders:
        raise ConfigurationError(f"order {true_order} is not among the candidates {config.orders}")
    model, refs, array = _context(config, true_order)
    rng = np.random.default_rng(seed)
    snapshots = draw_snapshots(model, 1, rng)
    cov = sample_covariance(snapshots)
    spectrum = imusic_spectrum(cov, model.grid, config.angles, array)
    theta_hat = estimate_doa(spectrum)
    psd = estimate_psd(cov, theta_hat, array, model.grid)
    spread = rms_spread_estimate(psd, config.center_frequency, config.spread_band)
    return classify_order(spread, refs, theta_hat)


@dataclass(frozen=True)
class SweepPoint:
    value: float
    correct: tuple  # per order, aligned with TprReport.orders
    trials: int

    def tpr(self, index):
        return self.correct[index] / self.trials

    @property
    def average(self):
        return float(np.mean([c / self.trials for c in self.correct]))


@dataclass(frozen=True)
class TprReport:
    variable: str
    orders: tuple
    points: tuple = ()

    def tpr(self, order, point=0):
        return self.points[point].tpr(self.orders.index(order))

    def average(self, point=0):
        return self.points[point].average


def _count_correct(config, sweep_index, order):
    return sum(run_trial(config, order, trial_seed(config, sweep_index, order, t)).estimated_order == order
               for t in range(config.trials))


def sweep_configs(config, variable, values):
    if variable not in SWEEP_FIELDS:
        raise ConfigurationError(f"unknown sweep variable {variable!r}; choose from {sorted(SWEEP_FIELDS)}")
    name = SWEEP_FIELDS[variable]
    if variable == "num_elements":
        values = [int(v) for v in values]
    return [config.replace(**{name: v}) for v in values]


def tpr_sweep(config, variable, values, workers=1):
    """TPR per order at every sweep value; result independent of ``workers``."""
    values = list(values)
    configs = sweep_configs(config, variable, values)
    jobs = [(cfg, i, n) for i, cfg in enumerate(configs) for n in config.orders]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(_count_correct, *zip(*jobs)))
    else:
        counts = [_count_correct(*job) for job in jobs]
    k = len(config.orders)
    points = []
    for i, value in enumerate(values):
        row = tuple(counts[i * k:(i + 1) * k])
        points.append(SweepPoint(float(value), row, config.trials))
        log.info("%s=%g avg TPR %.4f", variable, value, points[-1].average)
    return TprReport(variable, config.orders, tuple(points))


def report_header(orders):
    return ["sweep_value"] + [f"tpr_order_{n}" for n in orders] + ["avg_tpr"]


_AXIS_LABELS = {
    "path_length": ("Path length [cm]", 100.0),
    "snapshot_duration": ("Snapshot observation duration [ps]", 1e12),
    "num_elements": ("Number of antenna elements", 1.0),
}

_PLOT_TEMPLATE = """\
# gnuplot script: average and per-order TPR against {variable}
set datafile separator ","
set key autotitle columnhead bottom right
set xlabel "{xlabel}"
set ylabel "TPR"
set yrange [0:1.05]
set grid
set terminal pngcairo size 800,500
set output "{png}"
plot {series}
"""


def emit_report(report, path):
    """Write ``report`` as CSV plus a gnuplot script next to it; returns both paths."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(report_header(report.orders))
        for point in report.points:
            tprs = [point.tpr(i) for i in range(len(report.orders))]
            writer.writerow([repr(point.value)] + [repr(t) for t in tprs] + [repr(point.average)])
    xlabel, scale = _AXIS_LABELS.get(report.variable, (report.variable, 1.0))
    x = f"($1*{scale:g})"
    series = [f'"{path.name}" using {x}:{len(report.orders) + 2} with linespoints lw 2']
    series += [f'"{path.name}" using {x}:{i + 2} with linespoints dt 2' for i in range(len(report.orders))]
    script = path.with_suffix(".gp")
    script.write_text(_PLOT_TEMPLATE.format(variable=report.variable, xlabel=xlabel,
                                            png=path.with_suffix(".png").name,
                                            series=", \\\n     ".join(series)), encoding="utf-8")
    return path, script


def read_report(path):
    """Parse a report CSV back into ``(header, rows)`` with float values."""
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    return header, rows


SNAPSHOT_PRESET = tuple(v * 1e-12 for v in (2, 4, 6, 8, 10, 12, 16, 20, 24, 32, 40, 48))
PATH_PRESET = (0.01, 0.10, 0.25, 0.50, 0.75)
ELEMENT_PRESET = (4, 8, 16)

#: name -> [(output stem, config overrides, sweep variable, values)]
PRESETS = {
    "fig5": [
        ("fig5_3thz", {"center_frequency": 3e12}, "path_length", PATH_PRESET),
        ("fig5_6thz", {"center_frequency": 6e12}, "path_length", PATH_PRESET),
    ],
    "fig6": [
        ("fig6_50cm", {"center_frequency": 6e12, "distance": 0.5}, "snapshot_duration", SNAPSHOT_PRESET),
        ("fig6_75cm", {"center_frequency": 6e12, "distance": 0.75}, "snapshot_duration", SNAPSHOT_PRESET),
    ],
    "fig8": [
        ("fig8", {"center_frequency": 6e12, "distance": 0.5, "snapshot_duration": 16e-12},
         "num_elements", ELEMENT_PRESET),
    ],
}


def preset_runs(name, config):
    try:
        entries = PRESETS[name]
    except KeyError:
        raise ConfigurationError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return [(stem, config.replace(**overrides), variable, values)
            for stem, overrides, variable, values in entries]
