"""Contains the acquisition of the German Breast Cancer Study Group 2 cohort."""
import logging
from tempfile import TemporaryFile

import pandas as pd

from fedsurv.exceptions.DatasetError import DatasetError
from fedsurv.utils import downloadutils

logger = logging.getLogger(__name__)

GBSG2_URL = "https://vincentarelbundock.github.io/Rdatasets/csv/TH.data/GBSG2.csv"
GBSG2_COVARIATES = ("horTh", "age", "menostat", "tsize", "tgrade", "pnodes", "progrec", "estrec")
GBSG2_CATEGORICAL = ("horTh", "menostat", "tgrade")
GBSG2_COLUMNS = GBSG2_COVARIATES + ("time", "event")
GBSG2_ROWS = 686


def fetch_gbsg2(destination_path, is_quiet=False):
    """
    Writes the cohort as CSV with columns GBSG2_COLUMNS. The copy bundled
    with scikit-survival is used when installed, the public Rdatasets
    copy otherwise.
    :param destination_path: Output CSV path.
    :param is_quiet: If set to True, console output will be suppressed.
    :return: pandas DataFrame that was written.
    """
    try:
        frame = _load_from_sksurv()
    except ImportError:
        logger.info("scikit-survival is not installed, downloading %s", GBSG2_URL)
        frame = _download(is_quiet)

    frame = frame[list(GBSG2_COLUMNS)]
    if len(frame) != GBSG2_ROWS:
        raise DatasetError("expected {0} rows, got {1}".format(GBSG2_ROWS, len(frame)))
    frame.to_csv(destination_path, index=False)
    logger.info("wrote %d rows to %s", len(frame), destination_path)
    return frame


def _load_from_sksurv():
    from sksurv.datasets import load_gbsg2

    covariates, outcome = load_gbsg2()
    frame = covariates.copy()
    for column in GBSG2_CATEGORICAL:
        frame[column] = frame[column].astype(str)
    frame["time"] = outcome["time"]
    frame["event"] = outcome["cens"].astype(int)
    return frame


def _download(is_quiet=False):
    with TemporaryFile() as downloaded_file:
        downloadutils.download_file(GBSG2_URL, downloaded_file, is_quiet,
                                    "Downloading GBSG2...{0}")
        frame = pd.read_csv(downloaded_file)
    frame = frame.drop(columns=[column for column in ("rownames", "Unnamed: 0")
                                if column in frame.columns])
    return frame.rename(columns={"cens": "event"})
