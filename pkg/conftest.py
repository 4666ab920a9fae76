"""Shared fixtures of the test suite."""
import os

import numpy as np
import pandas as pd
import pytest

from fedsurv.exceptions.DownloadError import DownloadError
from fedsurv.experiment.datasets import Dataset
from fedsurv.experiment.gbsg2 import fetch_gbsg2

GBSG2_ENVIRONMENT_VARIABLE = "FEDSURV_GBSG2"
GBSG2_DEFAULT_PATH = os.path.join(os.path.dirname(__file__), "tests", "data", "gbsg2.csv")


def make_cohort(n_rows, seed, n_numeric=4, categorical=True):
    """
    Synthetic cohort whose hazard rises with x0 and, when present, grade=III.
    """
    rng = np.random.default_rng(seed)
    frame = pd.DataFrame(dict(("x{0}".format(index), rng.normal(size=n_rows))
                              for index in range(n_numeric)))
    hazard = np.exp(0.9 * frame["x0"].to_numpy())
    columns = ()
    if categorical:
        frame["grade"] = rng.choice(["I", "II", "III"], size=n_rows)
        hazard = hazard * np.where(frame["grade"] == "III", 2.0, 1.0)
        columns = ("grade",)
    event_times = rng.exponential(1.0 / hazard)
    censor_times = rng.exponential(1.5, size=n_rows)
    times = np.round(np.minimum(event_times, censor_times), 4) + 0.001
    events = event_times <= censor_times
    return Dataset(frame, times, events, columns)


@pytest.fixture
def cohort():
    return make_cohort(120, seed=7)


@pytest.fixture(scope="session")
def gbsg2_path():
    """
    The cohort CSV; written once from scikit-survival's copy, or the public
    download, when the checkout does not hold it yet.
    """
    path = os.environ.get(GBSG2_ENVIRONMENT_VARIABLE, GBSG2_DEFAULT_PATH)
    if not os.path.exists(path):
        os.makedirs(os.path.dirname(path), exist_ok=True)
        try:
            fetch_gbsg2(path, is_quiet=True)
        except DownloadError as exception:
            pytest.skip("GBSG2 cohort not available: {0}".format(exception.message))
    return path


@pytest.fixture
def cohort_factory():
    return make_cohort
