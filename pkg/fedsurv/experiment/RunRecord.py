"""Contains one evaluation of one configuration on one client's test rows."""
from dataclasses import dataclass
from typing import Optional

LOCAL = "Local"
CENTRALIZED_SRF = "Centralized-SRF"
CENTRALIZED = "Centralized"
FEDERATED_FORMAT = "Fed({0})"

RECORD_COLUMNS = ("configuration", "site_split", "fold", "client", "c_index",
                  "n_test", "n_comparable_pairs", "seed")


def federated_configuration(n_clients):
    return FEDERATED_FORMAT.format(n_clients)


def federated_size(configuration):
    """
    Client count of a Fed(k) configuration name, None for other names.
    """
    if configuration.startswith("Fed(") and configuration.endswith(")"):
        return int(configuration[4:-1])
    return None


@dataclass(frozen=True)
class RunRecord:
    """
    C-index of a configuration on the test rows of one client in one
    (site split, fold) cell. c_index is None when the test rows hold no
    comparable pair; such records are excluded from aggregates.
    """
    configuration: str
    site_split: int
    fold: int
    client: int
    c_index: Optional[float]
    n_test: int
    n_comparable_pairs: int
    seed: int

    @property
    def excluded(self):
        return self.c_index is None

    @property
    def pair_key(self):
        return self.site_split, self.fold, self.client

    def to_row(self):
        return (self.configuration, self.site_split, self.fold, self.client,
                "" if self.c_index is None else repr(self.c_index),
                self.n_test, self.n_comparable_pairs, self.seed)

    @classmethod
    def from_row(cls, row):
        """
        Parses a records CSV row.
        :param row: Mapping of column name to text.
        :return: RunRecord.
        """
        c_index = row["c_index"]
        return cls(row["configuration"], int(row["site_split"]), int(row["fold"]),
                   int(row["client"]), float(c_index) if c_index not in ("", None) else None,
                   int(row["n_test"]), int(row["n_comparable_pairs"]), int(row["seed"]))
