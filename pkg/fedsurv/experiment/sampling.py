"""Contains the random draws of the simulation: withheld features, client partitions and folds."""
from decimal import Decimal, ROUND_HALF_UP

import numpy as np

from fedsurv.exceptions.DatasetError import DatasetError


def withheld_count(fraction, n_features):
    """
    Number of features to withhold, round-half-up of fraction * n_features.
    :param fraction: Fraction in [0, 1).
    :param n_features: Number of pre-encoding features.
    :return: Integer count.
    """
    if not 0 <= fraction < 1:
        raise DatasetError("withhold fraction must lie in [0, 1), got {0}".format(fraction))
    exact = Decimal(repr(float(fraction))) * n_features
    return int(exact.quantize(Decimal(1), rounding=ROUND_HALF_UP))


def withhold_features(features, fraction, rng):
    """
    Withholds a uniform random subset of features.
    :param features: Pre-encoding feature names.
    :param fraction: Fraction to withhold, in [0, 1).
    :param rng: numpy Generator of this client and site split.
    :return: Retained names, in their original order.
    """
    features = list(features)
    count = withheld_count(fraction, len(features))
    if count >= len(features):
        raise DatasetError("no features left")
    withheld = set(rng.choice(len(features), size=count, replace=False).tolist()) if count else set()
    return [feature for position, feature in enumerate(features) if position not in withheld]


def partition_clients(n_rows, n_clients, rng):
    """
    Splits rows uniformly at random into client sets whose sizes differ by
    at most one.
    :param n_rows: Cohort size.
    :param n_clients: Number of clients.
    :param rng: numpy Generator of this site split.
    :return: List of sorted row index arrays, one per client.
    """
    if n_clients < 1:
        raise DatasetError("need at least one client")
    if n_rows < n_clients:
        raise DatasetError("{0} rows cannot be split over {1} clients".format(n_rows, n_clients))
    permutation = rng.permutation(n_rows)
    return [np.sort(part) for part in np.array_split(permutation, n_clients)]


def make_folds(n_rows, n_folds, rng):
    """
    Assigns every row of one client to a fold; fold sizes differ by at most one.
    :param n_rows: Number of client rows.
    :param n_folds: Number of folds.
    :param rng: numpy Generator of this client and site split.
    :return: Integer array of fold indices, one per row.
    """
    if n_folds < 2:
        raise DatasetError("need at least two folds")
    if n_rows < n_folds:
        raise DatasetError("{0} rows cannot be split into {1} folds".format(n_rows, n_folds))
    folds = np.empty(n_rows, dtype=np.int64)
    folds[rng.permutation(n_rows)] = np.arange(n_rows) % n_folds
    return folds


def holdout_split(n_rows, test_fraction, rng):
    """
    Random train/test split of one client's rows.
    :param n_rows: Number of rows.
    :param test_fraction: Fraction of rows held out, in (0, 1).
    :param rng: numpy Generator.
    :return: (train rows, test rows), both sorted.
    """
    if not 0 < test_fraction < 1:
        raise DatasetError("test fraction must lie in (0, 1), got {0}".format(test_fraction))
    n_test = int(round(test_fraction * n_rows))
    if n_test < 1 or n_test >= n_rows:
        raise DatasetError("{0} rows are too few for a {1} holdout".format(n_rows, test_fraction))
    permutation = rng.permutation(n_rows)
    return np.sort(permutation[n_test:]), np.sort(permutation[:n_test])
