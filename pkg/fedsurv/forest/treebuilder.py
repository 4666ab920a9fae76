"""Contains the recursive log-rank tree growing procedure."""
import logging

import numpy as np

from fedsurv.exceptions.TreeError import TreeError
from fedsurv.forest.SurvivalTree import SurvivalTree, InternalNode, LeafNode
from fedsurv.survival.estimators import (risk_table_from_arrays, nelson_aalen_from_table,
                                         kaplan_meier_from_table, risk_indicators,
                                         logrank_prefix_statistics)
from fedsurv.survival.SurvivalOutcome import to_arrays

logger = logging.getLogger(__name__)


def fit_tree(X, outcomes, params, available_features, rng, origin_site=None, low_memory=False):
    """
    Grows one survival tree on a feature table.
    :param X: pandas DataFrame with canonical column names.
    :param outcomes: Sequence of SurvivalOutcome, one per row.
    :param params: TreeParams.
    :param available_features: Ordered canonical names the tree may split on.
    :param rng: numpy Generator used for feature sampling.
    :param origin_site: Site identifier recorded on the tree.
    :param low_memory: If set to True, leaves do not keep survival values.
    :return: SurvivalTree.
    """
    available_features = list(available_features)
    if not available_features:
        raise TreeError("no usable features")
    if len(X) != len(outcomes):
        raise TreeError("feature table has {0} rows but {1} outcomes were given".format(
            len(X), len(outcomes)))
    missing = [feature for feature in available_features if feature not in X.columns]
    if missing:
        raise TreeError("available features not in table: {0}".format(", ".join(missing)))

    matrix = X[available_features].to_numpy(dtype=float)
    times, events = to_arrays(outcomes)
    return fit_tree_arrays(matrix, times, events, available_features, params, rng,
                           origin_site, low_memory)


def fit_tree_arrays(matrix, times, events, feature_names, params, rng,
                    origin_site=None, low_memory=False, train_size=None):
    """
    Array variant of fit_tree; columns of matrix follow feature_names.
    """
    if not feature_names:
        raise TreeError("no usable features")
    if matrix.shape[0] != times.shape[0] or times.shape != events.shape:
        raise TreeError("feature matrix and outcomes differ in length")
    if matrix.shape[0] == 0:
        raise TreeError("cannot fit a tree on zero samples")
    if np.isnan(matrix).any():
        column = feature_names[int(np.where(np.isnan(matrix).any(axis=0))[0][0])]
        raise TreeError("column '{0}' is partially missing; drop it from the usable features".format(column))

    builder = _TreeBuilder(matrix, times, events, feature_names, params, rng, low_memory)
    builder.build(np.arange(matrix.shape[0]), 0)
    if train_size is None:
        train_size = matrix.shape[0]
    return SurvivalTree(builder.nodes, origin_site, train_size)


class _TreeBuilder:
    """
    Grows nodes depth first; node ids are assigned in preorder so the root
    is always 0.
    """

    def __init__(self, matrix, times, events, feature_names, params, rng, low_memory):
        self.matrix = matrix
        self.times = times
        self.events = events
        self.feature_names = list(feature_names)
        self.params = params
        self.rng = rng
        self.low_memory = low_memory
        self.n_candidates = params.resolve_max_features(len(self.feature_names))
        self.nodes = []

    def build(self, indices, depth):
        node_id = len(self.nodes)
        self.nodes.append(None)

        split = self.find_split(indices, depth)
        if split is None:
            self.nodes[node_id] = self.make_leaf(indices)
            return node_id

        feature_index, threshold = split
        goes_left = self.matrix[indices, feature_index] <= threshold
        left = self.build(indices[goes_left], depth + 1)
        right = self.build(indices[~goes_left], depth + 1)
        self.nodes[node_id] = InternalNode(self.feature_names[feature_index],
                                           threshold, left, right)
        return node_id

    def find_split(self, indices, depth):
        """
        Best admissible (feature, threshold) by log-rank statistic, or None
        if the node must become a leaf. Ties go to the lower feature index,
        then to the smaller threshold.
        """
        params = self.params
        n_samples = indices.size
        if n_samples < params.min_samples_split:
            return None
        if params.max_depth is not None and depth >= params.max_depth:
            return None

        times = self.times[indices]
        events = self.events[indices]
        if np.all(times == times[0]) and np.all(events == events[0]):
            return None
        if not events.any():
            return None

        at_risk, died = risk_indicators(times, events)
        min_leaf = params.min_samples_leaf
        left_sizes = np.arange(1, n_samples)
        size_ok = (left_sizes >= min_leaf) & (n_samples - left_sizes >= min_leaf)
        if not size_ok.any():
            return None

        best_statistic = 0.0
        best = None
        for feature_index in self.draw_candidates():
            values = self.matrix[indices, feature_index]
            order = np.argsort(values, kind="stable")
            sorted_values = values[order]
            admissible = size_ok & (sorted_values[:-1] < sorted_values[1:])
            if not admissible.any():
                continue
            statistics = logrank_prefix_statistics(at_risk[order], died[order])
            statistics = np.where(admissible, statistics, -1.0)
            position = int(np.argmax(statistics))
            if statistics[position] > best_statistic:
                best_statistic = statistics[position]
                best = (feature_index, _midpoint(sorted_values[position], sorted_values[position + 1]))
        return best

    def draw_candidates(self):
        n_features = len(self.feature_names)
        if self.n_candidates >= n_features:
            return range(n_features)
        drawn = self.rng.choice(n_features, size=self.n_candidates, replace=False)
        return sorted(int(index) for index in drawn)

    def make_leaf(self, indices):
        table = risk_table_from_arrays(self.times[indices], self.events[indices])
        chf = nelson_aalen_from_table(table)
        surv = None if self.low_memory else kaplan_meier_from_table(table).values
        return LeafNode(table.event_times, chf.values, surv, indices.size)


def _midpoint(lower, upper):
    threshold = lower + (upper - lower) / 2.0
    # keep every training value of the lower side routed left
    if threshold >= upper:
        threshold = lower
    return float(threshold)
