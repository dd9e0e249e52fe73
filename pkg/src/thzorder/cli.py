"""Command-line entry point: ``thzorder table|classify|sweep``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import kernels
from .config import RunConfig, load_run_config
from .errors import ConfigurationError
from .experiment import (SWEEP_FIELDS, emit_report, preset_runs, run_trial, sweep_configs, tpr_sweep,
                         trial_seed)
from .pulse import PulseSpec, half_power_band

log = logging.getLogger("thzorder")

TABLE_HEADER = ("order", "center_frequency_thz", "f_low_thz", "f_high_thz", "bandwidth_3db_thz",
                "rms_spread_thz")

# CLI sweep values use the same units as the config file
_SWEEP_UNITS = {"path_length": 1e-2, "snapshot_duration": 1e-12, "num_elements": 1}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigurationError(f"usage: {message}")


def _common(parser):
    parser.add_argument("--config", type=Path, help="run configuration file")
    parser.add_argument("--seed", type=int, help="base seed (overrides the config)")
    parser.add_argument("--out", type=Path, help="output directory")
    parser.add_argument("--no-noise", action="store_true", help="disable absorption noise")
    parser.add_argument("--absorption", help="builtin:NAME or file:PATH")
    parser.add_argument("-v", "--verbose", action="count", default=0)


def build_parser():
    parser = _Parser(prog="thzorder", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("table", help="half-power band and RMS spread for orders 1-10")
    _common(p)

    p = sub.add_parser("classify", help="run one seeded trial and print the result")
    _common(p)
    p.add_argument("--order", type=int, required=True, help="transmitted derivative order")

    p = sub.add_parser("sweep", help="Monte Carlo TPR sweep")
    _common(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", help="fig5, fig6 or fig8")
    group.add_argument("--sweep", metavar="VAR=V1,V2,...",
                       help="path_length (cm), snapshot_duration (ps) or num_elements")
    p.add_argument("--workers", type=int, help="worker processes")
    p.add_argument("--dry-run", action="store_true", help="validate the configuration only")
    return parser


def _run_config(args):
    run = load_run_config(args.config) if args.config else RunConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.no_noise:
        overrides["noise"] = False
    if args.absorption:
        overrides["absorption"] = args.absorption
    trial = run.trial.replace(**overrides) if overrides else run.trial
    out_dir = str(args.out) if args.out else run.out_dir
    return RunConfig(trial, out_dir, max(run.verbosity, args.verbose), run.workers)


def cmd_table(run, out=None):
    out = out or sys.stdout
    rows = []
    for f_c in (3e12, 6e12):
        for n in range(1, 11):
            band = half_power_band(PulseSpec(n, f_c, run.trial.power), band=run.trial.band)
            rows.append((n, f_c / 1e12, band.f_low / 1e12, band.f_high / 1e12,
                         band.bandwidth_3db / 1e12, band.rms_spread / 1e12))
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TABLE_HEADER)
    for row in rows:
        writer.writerow([row[0]] + [repr(v) for v in row[1:]])
    return rows


def cmd_classify(run, order, out=None):
    out = out or sys.stdout
    config = run.trial
    result = run_trial(config, order, trial_seed(config, 0, order, 0))
    record = {"transmitted_order": order, "seed": config.seed, **result.to_record()}
    out.write(json.dumps(record, sort_keys=True) + "\n")
    return result


def _parse_sweep(text):
    variable, sep, values = text.partition("=")
    variable = variable.strip()
    if not sep or variable not in SWEEP_FIELDS:
        raise ConfigurationError(f"sweep must look like VAR=V1,V2 with VAR in {sorted(SWEEP_FIELDS)}")
    try:
        numbers = [float(v) * _SWEEP_UNITS[variable] for v in values.split(",") if v.strip()]
    except ValueError:
        raise ConfigurationError(f"non-numeric sweep values in {values!r}") from None
    if not numbers:
        raise ConfigurationError("sweep needs at least one value")
    return variable, numbers


def cmd_sweep(run, preset=None, sweep=None, workers=None, dry_run=False):
    if preset:
        runs = preset_runs(preset, run.trial)
    else:
        variable, values = _parse_sweep(sweep)
        runs = [(f"sweep_{variable}", run.trial, variable, values)]
    # construct every sweep point so bad values fail before any work
    for _, config, variable, values in runs:
        sweep_configs(config, variable, values)
    if dry_run:
        for stem, _, variable, values in runs:
            print(f"ok {stem}: {variable} x {len(values)} points")
        return []
    out_dir = Path(run.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for stem, config, variable, values in runs:
        report = tpr_sweep(config, variable, values, workers=workers or run.workers)
        written.extend(emit_report(report, out_dir / f"{stem}.csv"))
    for path in written:
        print(path)
    return written


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        run = _run_config(args)
        logging.basicConfig(level=logging.WARNING - 10 * min(run.verbosity, 2),
                            format="%(levelname)s %(name)s: %(message)s")
        log.debug("kernel backend: %s", kernels.BACKEND)
        if args.command == "table":
            rows = cmd_table(run)
            if args.out:
                Path(args.out).mkdir(parents=True, exist_ok=True)
                with (Path(args.out) / "table1.csv").open("w", encoding="utf-8") as fh:
                    cmd_table(run, fh)
            return 0 if rows else 1
        if args.command == "classify":
            cmd_classify(run, args.order)
            return 0
        cmd_sweep(run, args.preset, args.sweep, args.workers, args.dry_run)
        return 0
    except (ValueError, OSError) as exc:
        kind = getattr(exc, "kind", "io" if isinstance(exc, OSError) else "value")
        message = " ".join(str(exc).split())
        print(f"error[{kind}]: {message}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
