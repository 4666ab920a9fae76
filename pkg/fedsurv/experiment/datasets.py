"""Contains the cohort table, its CSV ingestion and one-hot encoding."""
import logging
import math

import numpy as np
import pandas as pd

from fedsurv.exceptions.DatasetError import DatasetError
from fedsurv.survival.SurvivalOutcome import from_arrays

logger = logging.getLogger(__name__)

TRUE_EVENT_VALUES = ("1", "1.0", "true", "yes", "y", "t")
FALSE_EVENT_VALUES = ("0", "0.0", "false", "no", "n", "f")


class Dataset:
    """
    Named-column covariate table paired with right-censored outcomes.
    Categorical columns are listed in categorical.
    """

    def __init__(self, frame, times, events, categorical=()):
        """
        Creates new Dataset instance.
        :param frame: pandas DataFrame of covariates.
        :param times: Positive observed times, one per row.
        :param events: Event indicators, one per row.
        :param categorical: Names of categorical columns.
        """
        self.frame = frame.reset_index(drop=True)
        self.times = np.asarray(times, dtype=float)
        self.events = np.asarray(events, dtype=bool)
        self.categorical = tuple(column for column in categorical if column in frame.columns)
        if not (len(self.frame) == self.times.size == self.events.size):
            raise DatasetError("covariates and outcomes differ in length")

    def __len__(self):
        return len(self.frame)

    @property
    def columns(self):
        return list(self.frame.columns)

    @property
    def outcomes(self):
        return from_arrays(self.times, self.events)

    @property
    def n_events(self):
        return int(self.events.sum())

    def subset(self, rows):
        """
        Rows of the dataset, in the given order.
        :param rows: Integer row positions.
        :return: Dataset.
        """
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(self.frame.iloc[rows], self.times[rows], self.events[rows], self.categorical)

    def select(self, columns):
        """
        Keeps only the given covariates.
        :param columns: Column names, kept in table order.
        :return: Dataset.
        """
        keep = [column for column in self.frame.columns if column in set(columns)]
        return Dataset(self.frame[keep], self.times, self.events, self.categorical)


def load_survival_csv(path, time_column="time", event_column="event", categorical_columns=None):
    """
    Loads a cohort from CSV and validates every outcome.
    :param path: Path or open file of the CSV.
    :param time_column: Column of observed times.
    :param event_column: Column of event indicators (1/0, true/false, yes/no).
    :param categorical_columns: Names of categorical covariates; when None,
                                non-numeric columns are categorical.
    :return: Dataset.
    """
    frame = pd.read_csv(path, dtype=str, keep_default_na=False, na_values=[""])
    if frame.empty:
        raise DatasetError("empty dataset")
    for column in (time_column, event_column):
        if column not in frame.columns:
            raise DatasetError("column '{0}' not in {1}".format(column, path))

    times = pd.to_numeric(frame[time_column], errors="coerce").to_numpy(dtype=float)
    events = frame[event_column].map(_parse_event)

    rejected = []
    for position in range(len(frame)):
        time = times[position]
        # line numbers are 1-based and count the header
        line = position + 2
        if not math.isfinite(time) or time <= 0:
            rejected.append("line {0}: time {1!r} is not a positive number".format(
                line, frame[time_column].iloc[position]))
        elif events.iloc[position] is None:
            rejected.append("line {0}: event {1!r} is not a boolean".format(
                line, frame[event_column].iloc[position]))
    if rejected:
        raise DatasetError("{0} rejected row(s):\n{1}".format(len(rejected), "\n".join(rejected)),
                           rejected)

    covariates = frame.drop(columns=[time_column, event_column])
    if categorical_columns is None:
        # blank cells are missing values, not text
        categorical_columns = [column for column in covariates.columns
                               if (pd.to_numeric(covariates[column], errors="coerce").isna()
                                   & covariates[column].notna()).any()]
    for column in covariates.columns:
        if column not in categorical_columns:
            numeric = pd.to_numeric(covariates[column], errors="coerce")
            if (numeric.isna() & covariates[column].notna()).any():
                raise DatasetError("column '{0}' is declared numeric but holds text".format(column))
            covariates[column] = numeric.astype(float)

    dataset = Dataset(covariates, times, events.astype(bool).to_numpy(), categorical_columns)
    logger.info("loaded %d rows, %d covariates, %d events from %s", len(dataset),
                len(dataset.columns), dataset.n_events, path)
    return dataset


def one_hot(dataset, levels=None):
    """
    Replaces every categorical column of L levels by L indicator columns
    named column=level, in place of the original column. No level is dropped.
    :param dataset: Dataset.
    :param levels: Optional map of column to allowed levels; by default the
                   levels observed in the dataset, sorted.
    :return: Dataset with only numeric columns.
    """
    levels = dict(levels or {})
    parts = []
    for column in dataset.frame.columns:
        values = dataset.frame[column]
        if column not in dataset.categorical:
            parts.append(values.astype(float).to_frame())
            continue

        column_levels = levels.get(column)
        if column_levels is None:
            column_levels = sorted(str(value) for value in values.dropna().unique())
        observed = values.dropna().astype(str)
        unknown = sorted(set(observed) - set(column_levels))
        if unknown:
            raise DatasetError("unknown category level(s) {0} in column '{1}'".format(unknown, column))

        indicators = pd.DataFrame(index=values.index)
        missing = values.isna().to_numpy()
        for level in column_levels:
            indicator = (values.astype(str) == level).astype(float).to_numpy()
            indicator[missing] = np.nan
            indicators["{0}={1}".format(column, level)] = indicator
        parts.append(indicators)

    frame = pd.concat(parts, axis=1) if parts else pd.DataFrame(index=dataset.frame.index)
    return Dataset(frame, dataset.times, dataset.events, ())


def category_levels(dataset):
    """
    Sorted observed levels of every categorical column.
    :return: Map of column to list of levels.
    """
    return dict((column, sorted(str(value) for value in dataset.frame[column].dropna().unique()))
                for column in dataset.categorical)


def _parse_event(value):
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return None
    text = str(value).strip().lower()
    if text in TRUE_EVENT_VALUES:
        return True
    if text in FALSE_EVENT_VALUES:
        return False
    return None
