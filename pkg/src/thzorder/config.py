"""Run configuration files: INI-style sections of ``key = value`` lines.

Keys carry their unit as a suffix (``distance_cm``, ``center_frequency_thz``)
and are converted to SI here.  Unknown sections or keys are rejected.

Example::

    [trial]
    orders = 1, 4, 10
    center_frequency_thz = 6
    trials = 200
    seed = 7

    [channel]
    distance_cm = 50
    absorption = builtin:summer-air
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .doa import AngleGrid
from .errors import ConfigurationError
from .experiment import TrialConfig


def _floats(text):
    return tuple(float(v) for v in text.replace(",", " ").split())


def _bool(text):
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _pair(text):
    values = _floats(text)
    if len(values) != 2:
        raise ValueError(f"expected two values, got {text!r}")
    return values


# section -> key -> (target field, parser, SI scale)
SCHEMA = {
    "trial": {
        "orders": ("orders", lambda s: tuple(int(v) for v in _floats(s)), None),
        "center_frequency_thz": ("center_frequency", float, 1e12),
        "power_uw": ("power", float, 1e-6),
        "trials": ("trials", int, None),
        "seed": ("seed", int, None),
        "noise": ("noise", _bool, None),
        "theta_deg": ("theta", float, None),
    },
    "channel": {
        "distance_cm": ("distance", float, 1e-2),
        "absorption": ("absorption", str.strip, None),
        "band_thz": ("band", _pair, 1e12),
        "antenna_center_thz": ("antenna_center", float, 1e12),
    },
    "array": {
        "num_elements": ("num_elements", int, None),
        "spacing_um": ("spacing", float, 1e-6),
        "snapshot_duration_ps": ("snapshot_duration", float, 1e-12),
    },
    "doa": {
        "angle_start_deg": ("angle_start", float, None),
        "angle_end_deg": ("angle_end", float, None),
        "angle_step_deg": ("angle_step", float, None),
    },
    "classifier": {
        "spread_band_thz": ("spread_band", _pair, 1e12),
    },
    "run": {
        "out_dir": ("out_dir", str.strip, None),
        "verbosity": ("verbosity", int, None),
        "workers": ("workers", int, None),
    },
}

_RUN_KEYS = {"out_dir", "verbosity", "workers"}
_ANGLE_KEYS = {"angle_start": "start", "angle_end": "end", "angle_step": "step"}


def _scale(value, factor):
    if factor is None:
        return value
    if isinstance(value, tuple):
        return tuple(v * factor for v in value)
    return value * factor


@dataclass(frozen=True)
class RunConfig:
    trial: TrialConfig = field(default_factory=TrialConfig)
    out_dir: str = "results"
    verbosity: int = 0
    workers: int = 1


def parse_run_config(text, source="<config>"):
    parser = configparser.ConfigParser(interpolation=None, default_section="__none__")
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigurationError(f"{source}: {exc}".replace("\n", " ")) from None
    trial, angles, run = {}, {}, {}
    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigurationError(f"{source}: unknown section [{section}]")
        for key, raw in parser.items(section):
            if key not in SCHEMA[section]:
                raise ConfigurationError(f"{source}: unknown key {key!r} in [{section}]")
            target, convert, factor = SCHEMA[section][key]
            try:
                value = _scale(convert(raw), factor)
            except ValueError as exc:
                raise ConfigurationError(f"{source}: bad value for {key}: {exc}") from None
            if target in _RUN_KEYS:
                run[target] = value
            elif target in _ANGLE_KEYS:
                angles[_ANGLE_KEYS[target]] = value
            else:
                trial[target] = value
    if angles:
        trial["angles"] = AngleGrid(**angles)
    return RunConfig(TrialConfig(**trial), **run)


def load_run_config(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_run_config(text, str(path))
