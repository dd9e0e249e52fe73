import pytest

from thzorder.config import RunConfig, load_run_config, parse_run_config
from thzorder.errors import ConfigurationError


def test_full_config_converts_units():
    run = parse_run_config("""
[trial]
orders = 1, 4, 10
center_frequency_thz = 3
power_uw = 2
trials = 50
seed = 7
noise = off
theta_deg = 20

[channel]
distance_cm = 25
absorption = builtin:vacuum
band_thz = 1, 10

[array]
num_elements = 16
spacing_um = 14
snapshot_duration_ps = 8

[doa]
angle_start_deg = -30
angle_end_deg = 30
angle_step_deg = 0.05

[classifier]
spread_band_thz = 1.5 9

[run]
out_dir = out
verbosity = 2
workers = 3
""")
    t = run.trial
    assert t.center_frequency == 3e12 and t.power == pytest.approx(2e-6)
    assert t.distance == 0.25 and t.num_elements == 16
    assert t.spacing == pytest.approx(14e-6) and t.snapshot_duration == pytest.approx(8e-12)
    assert t.noise is False and t.seed == 7 and t.trials == 50 and t.theta == 20.0
    assert t.angles.start == -30 and t.angles.step == 0.05
    assert t.spread_band == (1.5e12, 9e12)
    assert (run.out_dir, run.verbosity, run.workers) == ("out", 2, 3)


def test_defaults():
    assert parse_run_config("") == RunConfig()


@pytest.mark.parametrize("text", [
    "[trial]\ncolour = red\n",
    "[nonsense]\nx = 1\n",
    "[array]\nsnapshot_duration_ps = 1\n",
    "[trial]\nnoise = maybe\n",
    "[channel]\nband_thz = 1\n",
    "[trial]\ntrials = many\n",
    "no section\n",
])
def test_bad_configs(text):
    with pytest.raises(ConfigurationError):
        parse_run_config(text)


def test_load_from_file(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text("[trial]\nseed = 3\n", encoding="utf-8")
    assert load_run_config(path).trial.seed == 3
    with pytest.raises(ConfigurationError, match="cannot read"):
        load_run_config(tmp_path / "missing.ini")
