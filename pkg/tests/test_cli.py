import csv
import io
import json
import subprocess
import sys

import pytest

from thzorder.cli import TABLE_HEADER, main
from thzorder.experiment import read_report
from thzorder.pulse import REFERENCE_TABLE_THZ


def run_cli(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_table(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "table", "--out", str(tmp_path / "t"))
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == TABLE_HEADER
    assert len(rows) == 21
    for row in rows[1:]:
        n, f_c = int(row[0]), float(row[1]) * 1e12
        reported = REFERENCE_TABLE_THZ[(n, f_c)]
        for got, want in zip(map(float, row[2:]), reported):
            assert got == pytest.approx(want, rel=0.01)
    assert (tmp_path / "t" / "table1.csv").read_text() == out


def test_classify_noiseless_prints_order(capsys):
    code, out, _ = run_cli(capsys, "classify", "--order", "10", "--no-noise", "--seed", "4")
    assert code == 0
    record = json.loads(out)
    assert record["order"] == 10 and record["transmitted_order"] == 10 and record["seed"] == 4


def test_classify_same_seed_is_byte_identical(capsys):
    _, first, _ = run_cli(capsys, "classify", "--order", "4", "--seed", "3")
    _, second, _ = run_cli(capsys, "classify", "--order", "4", "--seed", "3")
    assert first == second


@pytest.mark.parametrize("args", [
    ["classify", "--order", "5"],
    ["classify"],
    ["sweep", "--sweep", "snapshot_duration=1"],
    ["sweep", "--preset", "fig9"],
    ["table", "--absorption", "builtin:mars"],
    ["table", "--config", "/nonexistent/run.ini"],
    ["frobnicate"],
])
def test_errors_are_single_line(capsys, args):
    code, out, err = run_cli(capsys, *args)
    assert code != 0
    lines = err.strip().splitlines()
    assert len(lines) == 1 and lines[0].startswith("error[")


def test_invalid_config_file(capsys, tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[array]\nspacing_um = 40\n")
    code, _, err = run_cli(capsys, "classify", "--order", "4", "--config", str(path))
    assert code == 2
    assert err.startswith("error[config]:")


def test_sweep_dry_run(capsys, tmp_path):
    out_dir = tmp_path / "never"
    code, out, _ = run_cli(capsys, "sweep", "--preset", "fig6", "--dry-run", "--out", str(out_dir))
    assert code == 0
    assert "fig6_50cm: snapshot_duration x 12 points" in out
    assert "fig6_75cm" in out
    assert not out_dir.exists()


def test_sweep_creates_output_dir(capsys, tmp_path):
    config = tmp_path / "run.ini"
    config.write_text("[trial]\ntrials = 2\nseed = 9\n")
    out_dir = tmp_path / "a" / "b"
    code, out, _ = run_cli(capsys, "sweep", "--sweep", "path_length=1,50", "--config", str(config),
                           "--out", str(out_dir))
    assert code == 0
    header, rows = read_report(out_dir / "sweep_path_length.csv")
    assert [r[0] for r in rows] == [0.01, 0.5]
    assert (out_dir / "sweep_path_length.gp").exists()
    assert str(out_dir / "sweep_path_length.csv") in out


def test_module_entry_point():
    result = subprocess.run([sys.executable, "-m", "thzorder", "classify", "--order", "1", "--no-noise"],
                            capture_output=True, text=True, check=False)
    assert result.returncode == 0
    assert json.loads(result.stdout)["order"] == 1
