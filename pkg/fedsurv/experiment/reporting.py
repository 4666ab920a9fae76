"""Contains the aggregation of run records into summary tables and figure data."""
import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np

from fedsurv.exceptions.FedSurvError import FedSurvError
from fedsurv.experiment.pairedtests import paired_test
from fedsurv.experiment.RunRecord import (LOCAL, CENTRALIZED_SRF, federated_configuration,
                                          federated_size)

logger = logging.getLogger(__name__)

CHANCE_LEVEL = 0.5
WHISKER_IQR_FACTOR = 1.5

PARTICIPATION_NOTE = ("Fed(k) pools only the k participating clients; "
                      "clients beyond the first k contribute no Fed(k) records.")
SRF_IMPUTATION_NOTE = ("Centralized-SRF fills features a client never collected with the "
                       "median of the pooled training fold before fitting and prediction.")


@dataclass(frozen=True)
class ConfigurationSummary:
    """
    Pooled statistics and box-plot geometry of one configuration.
    """
    configuration: str
    n: int
    n_excluded: int
    mean: float
    sd: float
    q1: float
    median: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: tuple = ()


@dataclass
class Report:
    """
    Summaries ordered by ascending mean, paired tests and the chance line.
    """
    summaries: List[ConfigurationSummary]
    paired_tests: list
    chance_level: float = CHANCE_LEVEL
    notes: list = field(default_factory=list)

    def summary_of(self, configuration):
        for summary in self.summaries:
            if summary.configuration == configuration:
                return summary
        raise KeyError(configuration)


def summarize(configuration, values, n_excluded=0):
    """
    Mean, sample standard deviation and box statistics with whiskers at the
    most extreme values within 1.5 IQR of the quartiles.
    :param configuration: Configuration name.
    :param values: Included C-indices.
    :param n_excluded: Records of this configuration without comparable pairs.
    :return: ConfigurationSummary.
    """
    values = np.sort(np.asarray(values, dtype=float))
    if values.size == 0:
        raise FedSurvError("configuration {0} has no included records".format(configuration))
    q1, median, q3 = np.percentile(values, [25, 50, 75])
    spread = WHISKER_IQR_FACTOR * (q3 - q1)
    inside = values[(values >= q1 - spread) & (values <= q3 + spread)]
    outliers = values[(values < q1 - spread) | (values > q3 + spread)]
    sd = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
    return ConfigurationSummary(configuration, int(values.size), int(n_excluded),
                                float(np.mean(values)), sd, float(q1), float(median), float(q3),
                                float(inside.min()), float(inside.max()),
                                tuple(float(value) for value in outliers))


def paired_values(records, baseline, comparison):
    """
    C-indices of two configurations on the same (site split, fold, client)
    cells; cells excluded in either configuration are skipped.
    :return: (baseline values, comparison values), ordered by cell key.
    """
    baseline_values = dict((record.pair_key, record.c_index) for record in records
                           if record.configuration == baseline and not record.excluded)
    comparison_values = dict((record.pair_key, record.c_index) for record in records
                             if record.configuration == comparison and not record.excluded)
    keys = sorted(set(baseline_values) & set(comparison_values))
    return [baseline_values[key] for key in keys], [comparison_values[key] for key in keys]


def comparison_pairs(configurations):
    """
    The compared (baseline, comparison) pairs present among configurations:
    Local to Fed(K), Fed(K) to Centralized-SRF and Local to Centralized-SRF,
    with K the largest federation.
    """
    sizes = [federated_size(name) for name in configurations if federated_size(name) is not None]
    largest = federated_configuration(max(sizes)) if sizes else None
    pairs = [(LOCAL, largest), (largest, CENTRALIZED_SRF), (LOCAL, CENTRALIZED_SRF)]
    return [(baseline, comparison) for baseline, comparison in pairs
            if baseline in configurations and comparison in configurations]


def report(records):
    """
    Builds the report of a record set.
    :param records: List of RunRecord.
    :return: Report.
    """
    records = list(records)
    if not records:
        raise FedSurvError("empty record set")

    configurations = sorted(set(record.configuration for record in records))
    summaries = []
    notes = []
    for configuration in configurations:
        own = [record for record in records if record.configuration == configuration]
        included = [record.c_index for record in own if not record.excluded]
        excluded = len(own) - len(included)
        if excluded:
            notes.append("{0}: {1} record(s) without comparable pairs excluded".format(
                configuration, excluded))
        summaries.append(summarize(configuration, included, excluded))
    summaries.sort(key=lambda summary: (summary.mean, summary.configuration))

    paired = []
    for baseline, comparison in comparison_pairs(configurations):
        baseline_values, comparison_values = paired_values(records, baseline, comparison)
        if len(baseline_values) < 2:
            logger.warning("too few paired records for %s -> %s", baseline, comparison)
            continue
        paired.append(paired_test(baseline_values, comparison_values, baseline, comparison))

    if any(federated_size(name) for name in configurations):
        notes.append(PARTICIPATION_NOTE)
    if CENTRALIZED_SRF in configurations:
        notes.append(SRF_IMPUTATION_NOTE)
    return Report(summaries, paired, CHANCE_LEVEL, notes)
