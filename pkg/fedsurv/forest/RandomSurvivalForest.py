"""Contains the random survival forest trained at a single site."""
import logging
import math

import numpy as np
from joblib import Parallel, delayed

from fedsurv.exceptions.TreeError import TreeError
from fedsurv.forest.ForestParams import ForestParams
from fedsurv.forest.SurvivalTree import SurvivalTree
from fedsurv.forest.treebuilder import fit_tree_arrays
from fedsurv.survival.concordance import concordance_from_arrays, CONCORDANCE_CONVENTION
from fedsurv.survival.SurvivalOutcome import to_arrays
from fedsurv.utils import randomutils
from fedsurv.utils.documentutils import dumps, loads

logger = logging.getLogger(__name__)

RISK_RULE = "mean-of-leaf-chf-sums"

MODEL_METADATA = {
    "risk_rule": RISK_RULE,
    "c_index": CONCORDANCE_CONVENTION
}


class RandomSurvivalForest:
    """
    Bootstrap ensemble of log-rank survival trees. Once fitted, the forest
    is not modified and can be shared between threads.
    """

    def __init__(self, params=None, origin_site=None):
        """
        Creates new RandomSurvivalForest instance.
        :param params: ForestParams, defaults when None.
        :param origin_site: Site identifier recorded on every tree.
        """
        self.params = params or ForestParams()
        self.origin_site = origin_site
        self.trees = []
        self.feature_order = []
        self.available_features = []
        self.train_size = 0
        self.oob_c_index = None
        self.in_bag = None

    def fit(self, X, outcomes, available_features=None):
        """
        Fits n_estimators trees, tree t on a resample drawn from the child
        stream (seed, t). Serial and parallel fits give identical trees.
        :param X: pandas DataFrame aligned to the canonical feature order.
        :param outcomes: Sequence of SurvivalOutcome, or a (times, events) tuple.
        :param available_features: Canonical names without missing values;
                                   derived from X when None.
        :return: self
        """
        times, events = _outcome_arrays(outcomes)
        if available_features is None:
            available_features = usable_features(X)
        available_features = list(available_features)
        if not available_features:
            raise TreeError("no usable features")
        if len(X) != times.size:
            raise TreeError("feature table has {0} rows but {1} outcomes were given".format(
                len(X), times.size))
        if times.size < self.params.tree.min_samples_leaf:
            raise TreeError("{0} samples are fewer than min_samples_leaf".format(times.size))

        matrix = X[available_features].to_numpy(dtype=float)
        n_samples = times.size
        sample_count = self.params.resolve_max_samples(n_samples)
        entropy = randomutils.master_entropy(self.params.random_state)

        logger.debug("fitting %d trees at site %s on %d samples, %d features",
                     self.params.n_estimators, self.origin_site, n_samples,
                     len(available_features))
        results = Parallel(n_jobs=self.params.n_jobs)(
            delayed(_fit_single_tree)(matrix, times, events, available_features,
                                      self.params, entropy, tree_index, sample_count,
                                      self.origin_site)
            for tree_index in range(self.params.n_estimators))

        self.trees = [tree for tree, _ in results]
        self.in_bag = [mask for _, mask in results] if self.params.bootstrap else None
        self.feature_order = list(X.columns)
        self.available_features = available_features
        self.train_size = n_samples

        if self.params.oob_score:
            self.oob_c_index = self.compute_oob_c_index(X, (times, events))
        return self

    def predict_risk(self, X, trees=None):
        """
        Mean per-tree risk of every row.
        :param X: pandas DataFrame.
        :param trees: Trees to average, the forest's own trees when None.
        :return: Float array.
        """
        return forest_risk(self.trees if trees is None else trees, X)

    def predict_cumulative_hazard(self, X, times, trees=None):
        """
        Ensemble cumulative hazard evaluated on a time grid.
        :param X: pandas DataFrame.
        :param times: Grid of evaluation times.
        :return: Array of shape (rows, len(times)).
        """
        return self._average_step_functions(X, times, trees, "chf")

    def predict_survival(self, X, times, trees=None):
        """
        Ensemble survival function evaluated on a time grid.
        :param X: pandas DataFrame.
        :param times: Grid of evaluation times.
        :return: Array of shape (rows, len(times)).
        """
        return self._average_step_functions(X, times, trees, "surv")

    def _average_step_functions(self, X, times, trees, kind):
        if self.params.low_memory:
            raise TreeError("low_memory forest: function prediction is disabled")
        trees = self.trees if trees is None else trees
        grid = np.asarray(times, dtype=float)
        total = np.zeros((len(X), grid.size))
        for tree in trees:
            leaf_ids = tree.apply(X)
            for leaf_id in np.unique(leaf_ids):
                leaf = tree.nodes[leaf_id]
                function = leaf.cumulative_hazard() if kind == "chf" else leaf.survival()
                total[leaf_ids == leaf_id] += function(grid)
        return total / len(trees)

    def compute_oob_c_index(self, X, outcomes):
        """
        C-index of out-of-bag mean risks; rows that are in-bag for every
        tree are left out.
        :param X: The training table.
        :param outcomes: The training outcomes.
        :return: C-index.
        """
        if not self.params.bootstrap:
            raise TreeError("OOB requires bootstrap")
        if self.in_bag is None:
            raise TreeError("forest holds no in-bag masks")
        times, events = _outcome_arrays(outcomes)

        risk_sum = np.zeros(len(X))
        oob_count = np.zeros(len(X), dtype=np.int64)
        for tree, mask in zip(self.trees, self.in_bag):
            out_of_bag = ~mask
            if not out_of_bag.any():
                continue
            risk_sum[out_of_bag] += tree.risk(X.iloc[np.where(out_of_bag)[0]])
            oob_count[out_of_bag] += 1

        rows = oob_count > 0
        if not rows.any():
            raise TreeError("no OOB rows")
        return concordance_from_arrays(risk_sum[rows] / oob_count[rows], times[rows], events[rows])

    def to_document(self):
        """
        Forest document: tree documents plus params, feature order and metadata.
        :return: JSON-compatible dict.
        """
        return {
            "origin_site": self.origin_site,
            "params": self.params.to_dict(),
            "feature_order": list(self.feature_order),
            "available_features": list(self.available_features),
            "train_size": self.train_size,
            "metadata": dict(MODEL_METADATA),
            "trees": [tree.to_document() for tree in self.trees]
        }

    @classmethod
    def from_document(cls, document):
        """
        Rebuilds a fitted forest from its document.
        :param document: Dict as produced by to_document.
        :return: RandomSurvivalForest without in-bag masks.
        """
        try:
            forest = cls(ForestParams.from_dict(document["params"]), document.get("origin_site"))
            forest.trees = [SurvivalTree.from_document(tree) for tree in document["trees"]]
            forest.feature_order = list(document["feature_order"])
            forest.available_features = list(document.get("available_features", []))
            forest.train_size = int(document["train_size"])
        except (KeyError, TypeError, ValueError) as exception:
            raise TreeError("malformed forest document: {0}".format(exception))
        return forest

    def save(self, destination_file):
        """
        Writes the canonical document to an open text file.
        :param destination_file: File object.
        """
        destination_file.write(dumps(self.to_document()))

    @classmethod
    def load(cls, source_file):
        return cls.from_document(loads(source_file.read()))


def fit_forest(X, outcomes, params, available_features, seed, origin_site=None):
    """
    Fits a random survival forest.
    :param X: Aligned pandas DataFrame.
    :param outcomes: Sequence of SurvivalOutcome or (times, events).
    :param params: ForestParams; random_state is replaced by seed.
    :param available_features: Canonical names usable for splitting.
    :param seed: Master seed of all per-tree streams.
    :param origin_site: Site identifier.
    :return: Fitted RandomSurvivalForest.
    """
    forest = RandomSurvivalForest(params.replace(random_state=seed), origin_site)
    return forest.fit(X, outcomes, available_features)


def forest_risk(trees, X):
    """
    Mean of the per-tree risks of every row. The sum is exactly rounded,
    so the result does not depend on the order of the trees.
    :param trees: A RandomSurvivalForest or a list of SurvivalTree.
    :param X: pandas DataFrame.
    :return: Float array.
    """
    if isinstance(trees, RandomSurvivalForest):
        trees = trees.trees
    trees = list(trees)
    if not trees:
        raise TreeError("cannot predict with zero trees")
    per_tree = np.vstack([tree.risk(X) for tree in trees])
    return np.array([math.fsum(column) for column in per_tree.T]) / len(trees)


def oob_c_index(forest, X, outcomes):
    return forest.compute_oob_c_index(X, outcomes)


def usable_features(X):
    """
    Columns without any missing value, in table order.
    :param X: pandas DataFrame.
    :return: List of column names.
    """
    complete = X.notna().all(axis=0)
    return [column for column in X.columns if complete[column]]


def _fit_single_tree(matrix, times, events, feature_names, params, entropy,
                     tree_index, sample_count, origin_site):
    rng = randomutils.child_stream(entropy, tree_index)
    n_samples = times.size
    if params.bootstrap:
        indices = np.sort(rng.integers(0, n_samples, size=sample_count))
    else:
        indices = np.arange(n_samples)
    tree = fit_tree_arrays(matrix[indices], times[indices], events[indices], feature_names,
                           params.tree, rng, origin_site, params.low_memory, train_size=n_samples)
    in_bag = np.zeros(n_samples, dtype=bool)
    in_bag[indices] = True
    return tree, in_bag


def _outcome_arrays(outcomes):
    if isinstance(outcomes, tuple) and len(outcomes) == 2 and hasattr(outcomes[0], "shape"):
        return np.asarray(outcomes[0], dtype=float), np.asarray(outcomes[1], dtype=bool)
    return to_arrays(outcomes)
