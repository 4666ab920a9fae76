"""Contains tests for the command line interface"""
import csv
import json
import os

import pytest

from conftest import make_cohort
from fedsurv import cli

TINY_CONFIG = """
n_clients = 2
n_site_splits = 1
n_folds = 2
seed = 11

[forest]
n_estimators = 4
"""


@pytest.fixture
def cohort_csv(tmp_path):
    dataset = make_cohort(60, seed=2)
    frame = dataset.frame.copy()
    frame["time"] = dataset.times
    frame["event"] = dataset.events.astype(int)
    path = tmp_path / "cohort.csv"
    frame.to_csv(str(path), index=False)
    return str(path)


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "experiment.toml"
    path.write_text(TINY_CONFIG)
    return str(path)


def simulate(config_path, cohort_csv, out):
    return cli.main(["-q", "simulate", "--config", config_path, "--data", cohort_csv,
                     "--out", out, "--svg"])


def test_simulate(tmp_path, config_path, cohort_csv):
    out = str(tmp_path / "results")

    assert 0 == simulate(config_path, cohort_csv, out)

    assert sorted(os.listdir(out)) == ["boxplot.svg", "manifest.json", "paired_tests.csv",
                                       "records.csv", "summary.csv"]
    with open(os.path.join(out, "records.csv"), newline="") as records_file:
        rows = list(csv.DictReader(records_file))
    assert 2 * 2 * 4 == len(rows)
    with open(os.path.join(out, "manifest.json")) as manifest_file:
        manifest = json.load(manifest_file)
    assert 11 == manifest["config"]["seed"]
    assert 2 == manifest["withheld_count"]


def test_simulate_is_deterministic(tmp_path, config_path, cohort_csv):
    first = str(tmp_path / "first")
    second = str(tmp_path / "second")

    simulate(config_path, cohort_csv, first)
    simulate(config_path, cohort_csv, second)

    with open(os.path.join(first, "records.csv"), "rb") as first_file, \
            open(os.path.join(second, "records.csv"), "rb") as second_file:
        assert first_file.read() == second_file.read()


def test_report(tmp_path, config_path, cohort_csv, capsys):
    out = str(tmp_path / "results")
    simulate(config_path, cohort_csv, out)
    capsys.readouterr()

    status = cli.main(["report", "--records", os.path.join(out, "records.csv"),
                       "--out", str(tmp_path / "report")])
    printed, _ = capsys.readouterr()

    assert 0 == status
    assert "Configuration" in printed
    assert "Centralized-SRF" in printed
    assert os.path.exists(str(tmp_path / "report" / "summary.csv"))
    assert not os.path.exists(str(tmp_path / "report" / "boxplot.svg"))


def test_missing_records_file(tmp_path):
    assert cli.EXIT_FAILURE == cli.main(["-q", "report", "--records",
                                         str(tmp_path / "missing.csv")])


def test_invalid_data(tmp_path, config_path):
    path = tmp_path / "broken.csv"
    path.write_text("x,time,event\n1,-1,1\n")

    assert cli.EXIT_FAILURE == cli.main(["-q", "simulate", "--config", config_path,
                                         "--data", str(path), "--out", str(tmp_path)])


def test_unreachable_coordinator(cohort_csv):
    status = cli.main(["-q", "client", "--connect", "127.0.0.1:1", "--client-id", "client_01",
                       "--data", cohort_csv, "--retries", "0", "--timeout-secs", "1"])

    assert cli.EXIT_FAILURE == status


def test_load_config_overrides(config_path):
    args = cli.build_parser().parse_args(["simulate", "--config", config_path, "--data", "x.csv",
                                          "--seed", "5", "--n-jobs", "2", "--mccv"])

    config = cli.load_config(args)

    assert (5, True, 2) == (config.seed, config.mccv, config.forest.n_jobs)
    assert 4 == config.forest.n_estimators


def test_command_is_required():
    with pytest.raises(SystemExit):
        cli.main([])
