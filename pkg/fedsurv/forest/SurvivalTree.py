"""Contains the fitted survival tree, its nodes and its canonical document form."""
import math

import numpy as np
import pandas as pd

from fedsurv.exceptions.TreeError import TreeError, IncompatibleRowError
from fedsurv.survival.StepFunction import StepFunction
from fedsurv.utils.documentutils import floats


class InternalNode:
    """Split node; rows with value <= threshold go to the left child."""
    __slots__ = ("feature", "threshold", "left", "right")

    def __init__(self, feature, threshold, left, right):
        self.feature = feature
        self.threshold = float(threshold)
        self.left = int(left)
        self.right = int(right)

    is_leaf = False


class LeafNode:
    """
    Terminal node with the Nelson-Aalen and Kaplan-Meier estimates of its
    training samples on their event-time grid. surv is None for low-memory trees.
    """
    __slots__ = ("times", "chf", "surv", "n_node_samples", "risk")

    def __init__(self, times, chf, surv, n_node_samples):
        self.times = np.asarray(times, dtype=float)
        self.chf = np.asarray(chf, dtype=float)
        self.surv = None if surv is None else np.asarray(surv, dtype=float)
        self.n_node_samples = int(n_node_samples)
        self.risk = math.fsum(self.chf)

    is_leaf = True

    def cumulative_hazard(self):
        return StepFunction(self.times, self.chf, 0.0)

    def survival(self):
        if self.surv is None:
            raise TreeError("low_memory forest: survival function was not stored")
        return StepFunction(self.times, self.surv, 1.0)


class SurvivalTree:
    """
    Survival tree stored as a node array rooted at index 0, together with
    the site it was trained at and that site's training set size.
    """

    def __init__(self, nodes, origin_site=None, train_size=0):
        self.nodes = list(nodes)
        self.origin_site = origin_site
        self.train_size = int(train_size)
        self._validate()
        self.split_features = frozenset(node.feature for node in self.nodes
                                        if not node.is_leaf)

    def _validate(self):
        if not self.nodes:
            raise TreeError("tree has no nodes")
        seen = set()
        stack = [0]
        while stack:
            node_id = stack.pop()
            if node_id in seen or not 0 <= node_id < len(self.nodes):
                raise TreeError("node {0} is not part of a proper binary tree".format(node_id))
            seen.add(node_id)
            node = self.nodes[node_id]
            if not node.is_leaf:
                stack.extend((node.right, node.left))
        if len(seen) != len(self.nodes):
            raise TreeError("tree contains unreachable nodes")

    @property
    def leaves(self):
        return [node for node in self.nodes if node.is_leaf]

    def is_compatible(self, features):
        """
        Checks whether every split feature is among the given features.
        :param features: Set of feature names available at a site.
        """
        return self.split_features <= set(features)

    def apply(self, frame):
        """
        Routes every row of a table to its leaf.
        :param frame: pandas DataFrame with named feature columns.
        :return: Array of leaf node indices, one per row.
        """
        self.check_rows(frame)
        node_ids = np.zeros(len(frame), dtype=np.int64)
        pending = np.arange(len(frame))
        columns = dict((feature, frame[feature].to_numpy(dtype=float))
                       for feature in self.split_features)
        while pending.size:
            still_pending = []
            for node_id in np.unique(node_ids[pending]):
                node = self.nodes[node_id]
                if node.is_leaf:
                    continue
                rows = pending[node_ids[pending] == node_id]
                goes_left = columns[node.feature][rows] <= node.threshold
                node_ids[rows] = np.where(goes_left, node.left, node.right)
                still_pending.append(rows)
            pending = np.concatenate(still_pending) if still_pending else np.empty(0, dtype=np.int64)
        return node_ids

    def check_rows(self, frame):
        """
        Raises IncompatibleRowError, if a split feature is absent or missing.
        :param frame: pandas DataFrame.
        """
        for feature in sorted(self.split_features):
            if feature not in frame.columns or frame[feature].isna().any():
                raise IncompatibleRowError(self.origin_site, feature)

    def risk(self, frame):
        """
        Per-row risk: sum of the routed leaf's cumulative hazard over its grid.
        :param frame: pandas DataFrame.
        :return: Float array.
        """
        leaf_risk = np.array([node.risk if node.is_leaf else np.nan for node in self.nodes])
        return leaf_risk[self.apply(frame)]

    def route(self, row):
        """
        Routes a single row given as a mapping of feature name to value.
        :param row: Mapping or pandas Series.
        :return: LeafNode.
        """
        node = self.nodes[0]
        while not node.is_leaf:
            value = row[node.feature] if node.feature in row else None
            if value is None or pd.isna(value):
                raise IncompatibleRowError(self.origin_site, node.feature)
            node = self.nodes[node.left if value <= node.threshold else node.right]
        # a compatible row supplies every split feature, not only those on its path
        for feature in self.split_features:
            if feature not in row or pd.isna(row[feature]):
                raise IncompatibleRowError(self.origin_site, feature)
        return node

    def to_document(self):
        """
        Canonical document: node array plus origin_site and train_size.
        :return: JSON-compatible dict.
        """
        nodes = []
        for node_id, node in enumerate(self.nodes):
            if node.is_leaf:
                nodes.append({
                    "id": node_id,
                    "leaf": True,
                    "times": floats(node.times),
                    "chf": floats(node.chf),
                    "surv": None if node.surv is None else floats(node.surv),
                    "n": node.n_node_samples
                })
            else:
                nodes.append({
                    "id": node_id,
                    "feature": node.feature,
                    "threshold": node.threshold,
                    "left": node.left,
                    "right": node.right
                })
        return {
            "origin_site": self.origin_site,
            "train_size": self.train_size,
            "nodes": nodes
        }

    @classmethod
    def from_document(cls, document):
        """
        Rebuilds a tree from its canonical document. split_features is
        recomputed from the nodes, never read from the document.
        :param document: Dict as produced by to_document.
        :return: SurvivalTree.
        """
        try:
            raw_nodes = sorted(document["nodes"], key=lambda raw: raw["id"])
            if [raw["id"] for raw in raw_nodes] != list(range(len(raw_nodes))):
                raise TreeError("node ids must be 0..n-1")
            nodes = []
            for raw in raw_nodes:
                if raw.get("leaf"):
                    nodes.append(LeafNode(raw["times"], raw["chf"], raw.get("surv"), raw["n"]))
                else:
                    nodes.append(InternalNode(raw["feature"], raw["threshold"],
                                              raw["left"], raw["right"]))
            return cls(nodes, document.get("origin_site"), document.get("train_size", 0))
        except (KeyError, TypeError, ValueError) as exception:
            raise TreeError("malformed tree document: {0}".format(exception))


def tree_risk(tree, row):
    """
    Risk of a single row under one tree.
    :param tree: SurvivalTree.
    :param row: Mapping of canonical feature name to value.
    :return: Non-negative float.
    """
    return tree.route(row).risk


def tree_chf(tree, row):
    """
    Cumulative hazard function of the leaf a row is routed to.
    :return: StepFunction.
    """
    return tree.route(row).cumulative_hazard()


def tree_survival(tree, row):
    """
    Survival function of the leaf a row is routed to.
    :return: StepFunction.
    """
    return tree.route(row).survival()
