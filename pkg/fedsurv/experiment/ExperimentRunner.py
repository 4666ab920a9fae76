"""Contains the in-process simulation of a federation with withheld features."""
import logging
from collections import namedtuple

import numpy as np
import pandas as pd

from fedsurv.exceptions.DatasetError import DatasetError
from fedsurv.experiment import sampling
from fedsurv.experiment.datasets import one_hot
from fedsurv.experiment.RunRecord import (RunRecord, LOCAL, CENTRALIZED, CENTRALIZED_SRF,
                                          federated_configuration)
from fedsurv.federation.federator import federate
from fedsurv.federation.LocalModel import LocalModel
from fedsurv.forest.RandomSurvivalForest import fit_forest, forest_risk, usable_features
from fedsurv.schema.alignment import align_table
from fedsurv.schema.DatasetSchema import make_schema
from fedsurv.schema.FederatedSchema import merge_schemas
from fedsurv.survival.concordance import concordance_counts
from fedsurv.utils import consoleutils, randomutils

logger = logging.getLogger(__name__)

CLIENT_ID_FORMAT = "client_{0:02d}"
SRF_MISSING_VALUES = "train_fold_median"

# stream keys: (purpose, site split, ...)
PARTITION_STREAM = 0
WITHHOLD_STREAM = 1
FOLD_STREAM = 2
HOLDOUT_STREAM = 3
LOCAL_FOREST_STREAM = 4
FEDERATION_STREAM = 5
CENTRALIZED_SRF_STREAM = 6
CENTRALIZED_STREAM = 7

SiteSplit = namedtuple("SiteSplit", ["index", "partition", "retained", "clients", "aligned",
                                     "site_features", "centralized"])


class ExperimentRunner:
    """
    Runs every configuration over every (site split, fold) cell and emits
    one RunRecord per configuration, cell and evaluated client.
    """

    def __init__(self, config, dataset, is_quiet=False):
        """
        Creates new ExperimentRunner instance.
        :param config: ExperimentConfig.
        :param dataset: Dataset before one-hot encoding.
        :param is_quiet: If set to True, console output will be suppressed.
        """
        self.config = config
        self.dataset = dataset
        self.is_quiet = is_quiet
        self.entropy = randomutils.master_entropy(config.seed)
        self.manifest = None
        self.records = []

    @property
    def client_ids(self):
        return [CLIENT_ID_FORMAT.format(client) for client in range(self.config.n_clients)]

    @property
    def federated_sizes(self):
        """
        Client counts k of the Fed(k) configurations; a single client
        federates with itself.
        """
        return list(range(min(2, self.config.n_clients), self.config.n_clients + 1))

    def run(self):
        """
        Executes the experiment.
        :return: List of RunRecord in emission order.
        """
        config = self.config
        if not config.mccv and len(self.dataset) < config.n_clients * config.n_folds:
            raise DatasetError("too few rows: {0} rows for {1} clients of {2} folds".format(
                len(self.dataset), config.n_clients, config.n_folds))

        self.records = []
        self.manifest = {
            "config": config.to_dict(),
            "seed": int(self.entropy),
            "n_rows": len(self.dataset),
            "features": self.dataset.columns,
            "withheld_count": sampling.withheld_count(config.withhold_fraction,
                                                      len(self.dataset.columns)),
            "centralized_srf_missing_values": SRF_MISSING_VALUES,
            "site_splits": []
        }

        n_splits = 1 if config.mccv else config.n_site_splits
        n_cells = config.mccv_rounds if config.mccv else config.n_folds
        done = 0
        for split_index in range(n_splits):
            site_split = self.prepare_site_split(split_index)
            self.manifest["site_splits"].append(self._split_manifest(site_split))
            for cell_index, (train_rows, test_rows) in enumerate(self.cells(site_split)):
                self.evaluate_cell(site_split, cell_index, train_rows, test_rows)
                done += 1
                if not self.is_quiet:
                    consoleutils.print_progress("Running experiment...{0}", done, n_splits * n_cells)
        if not self.is_quiet:
            consoleutils.finish_progress()

        logger.info("experiment produced %d records (%d excluded)", len(self.records),
                    sum(record.excluded for record in self.records))
        return self.records

    def prepare_site_split(self, split_index):
        """
        Partitions the cohort, withholds features per client, encodes and
        aligns every client table to the union of retained features.
        :param split_index: Index of the site split.
        :return: SiteSplit.
        """
        config = self.config
        partition = sampling.partition_clients(
            len(self.dataset), config.n_clients,
            randomutils.child_stream(self.entropy, PARTITION_STREAM, split_index))

        retained = []
        encoded = []
        for client, rows in enumerate(partition):
            features = sampling.withhold_features(
                self.dataset.columns, config.withhold_fraction,
                randomutils.child_stream(self.entropy, WITHHOLD_STREAM, split_index, client))
            retained.append(features)
            encoded.append(one_hot(self.dataset.subset(rows).select(features)))

        schemas = dict((client_id, make_schema(table.columns))
                       for client_id, table in zip(self.client_ids, encoded))
        federated = merge_schemas(schemas)
        aligned = [align_table(table.frame, federated, client_id)
                   for client_id, table in zip(self.client_ids, encoded)]
        site_features = [usable_features(table) for table in aligned]

        clients = [self.dataset.subset(rows) for rows in partition]
        return SiteSplit(split_index, partition, retained, clients, aligned, site_features,
                         one_hot(self.dataset).frame)

    def cells(self, site_split):
        """
        Per-client train and test rows of every cell: the folds of
        cross-validation, or the holdout rounds in MCCV mode.
        :param site_split: SiteSplit.
        :return: Generator of (train rows per client, test rows per client).
        """
        config = self.config
        if config.mccv:
            for round_index in range(config.mccv_rounds):
                splits = [sampling.holdout_split(
                    len(rows), config.mccv_test_fraction,
                    randomutils.child_stream(self.entropy, HOLDOUT_STREAM, round_index, client))
                    for client, rows in enumerate(site_split.partition)]
                yield [train for train, _ in splits], [test for _, test in splits]
            return

        folds = [sampling.make_folds(
            len(rows), config.n_folds,
            randomutils.child_stream(self.entropy, FOLD_STREAM, site_split.index, client))
            for client, rows in enumerate(site_split.partition)]
        for fold in range(config.n_folds):
            yield ([np.flatnonzero(assignment != fold) for assignment in folds],
                   [np.flatnonzero(assignment == fold) for assignment in folds])

    def evaluate_cell(self, site_split, cell_index, train_rows, test_rows):
        """
        Fits and evaluates every configuration in one cell.
        :param site_split: SiteSplit.
        :param cell_index: Fold or MCCV round index.
        :param train_rows: Per-client local train row positions.
        :param test_rows: Per-client local test row positions.
        """
        split_index = site_split.index
        forests = []
        for client, client_id in enumerate(self.client_ids):
            table = site_split.aligned[client].iloc[train_rows[client]]
            outcomes = self._outcomes(site_split, client, train_rows[client])
            forests.append(fit_forest(table, outcomes, self.config.forest,
                                      site_split.site_features[client],
                                      self._seed(LOCAL_FOREST_STREAM, split_index, cell_index, client),
                                      client_id))

        for client, forest in enumerate(forests):
            test_table = site_split.aligned[client].iloc[test_rows[client]]
            self._record(LOCAL, site_split, cell_index, client, test_rows[client],
                         forest_risk(forest, test_table))

        for n_clients in self.federated_sizes:
            models = federate([self._local_model(site_split, forests[client], client)
                               for client in range(n_clients)],
                              self._seed(FEDERATION_STREAM, split_index, cell_index, n_clients))
            for client in range(n_clients):
                model = models[self.client_ids[client]]
                test_table = site_split.aligned[client].iloc[test_rows[client]]
                self._record(federated_configuration(n_clients), site_split, cell_index, client,
                             test_rows[client], model.predict_risk(test_table))

        self._evaluate_site_restricted(site_split, cell_index, train_rows, test_rows)
        self._evaluate_centralized(site_split, cell_index, train_rows, test_rows)

    def _evaluate_site_restricted(self, site_split, cell_index, train_rows, test_rows):
        # pooled train folds keep the stubs of every client; they are filled
        # with train-fold medians since trees reject partially missing columns
        train = pd.concat([table.iloc[rows] for table, rows in zip(site_split.aligned, train_rows)],
                          ignore_index=True)
        medians = train.median()
        train = train.fillna(medians)
        outcomes = self._pooled_outcomes(site_split, train_rows)
        forest = fit_forest(train, outcomes, self.config.forest, usable_features(train),
                            self._seed(CENTRALIZED_SRF_STREAM, site_split.index, cell_index))
        for client, rows in enumerate(test_rows):
            test_table = site_split.aligned[client].iloc[rows].fillna(medians)
            self._record(CENTRALIZED_SRF, site_split, cell_index, client, rows,
                         forest_risk(forest, test_table))

    def _evaluate_centralized(self, site_split, cell_index, train_rows, test_rows):
        full = site_split.centralized
        train = full.iloc[np.concatenate([site_split.partition[client][rows]
                                          for client, rows in enumerate(train_rows)])]
        outcomes = self._pooled_outcomes(site_split, train_rows)
        forest = fit_forest(train, outcomes, self.config.forest, usable_features(train),
                            self._seed(CENTRALIZED_STREAM, site_split.index, cell_index))
        for client, rows in enumerate(test_rows):
            test_table = full.iloc[site_split.partition[client][rows]]
            self._record(CENTRALIZED, site_split, cell_index, client, rows,
                         forest_risk(forest, test_table))

    def _local_model(self, site_split, forest, client):
        return LocalModel(forest, self.client_ids[client], site_split.site_features[client],
                          self.config.update_method, self.config.update_weighting)

    def _record(self, configuration, site_split, cell_index, client, rows, risk):
        times, events = self._outcomes(site_split, client, rows)
        score, n_pairs = concordance_counts(risk, times, events)
        record = RunRecord(configuration, site_split.index, cell_index, client,
                           score / n_pairs if n_pairs else None, int(len(rows)), n_pairs,
                           int(self.entropy))
        if record.excluded:
            logger.warning("%s: no comparable pairs for client %d in split %d, cell %d",
                           configuration, client, site_split.index, cell_index)
        self.records.append(record)
        return record

    def _outcomes(self, site_split, client, rows):
        dataset = site_split.clients[client]
        return dataset.times[rows], dataset.events[rows]

    def _pooled_outcomes(self, site_split, rows_per_client):
        parts = [self._outcomes(site_split, client, rows)
                 for client, rows in enumerate(rows_per_client)]
        return (np.concatenate([times for times, _ in parts]),
                np.concatenate([events for _, events in parts]))

    def _seed(self, *key):
        return int(randomutils.child_stream(self.entropy, *key).integers(2 ** 63 - 1))

    def _split_manifest(self, site_split):
        return {
            "site_split": site_split.index,
            "clients": [{
                "client": client,
                "client_id": self.client_ids[client],
                "n_rows": int(len(rows)),
                "retained_features": site_split.retained[client],
                "site_features": site_split.site_features[client]
            } for client, rows in enumerate(site_split.partition)]
        }


def run_experiment(config, dataset, is_quiet=False):
    """
    Runs the withholding simulation.
    :param config: ExperimentConfig.
    :param dataset: Dataset before one-hot encoding.
    :param is_quiet: If set to True, console output will be suppressed.
    :return: List of RunRecord.
    """
    return ExperimentRunner(config, dataset, is_quiet).run()
