"""Contains a site's forest together with the trees it received from peers."""
import logging

import numpy as np

from fedsurv.exceptions.FederationError import FederationError
from fedsurv.forest.RandomSurvivalForest import RandomSurvivalForest, forest_risk

logger = logging.getLogger(__name__)

UPDATE_METHODS = ("all", "constant")
UPDATE_WEIGHTINGS = ("equal", "site_size")


class LocalModel:
    """
    Local forest of one site, the site's available canonical features and
    the estimator list used at predict time.
    """

    def __init__(self, forest, site_id, site_features, update_method="all",
                 update_weighting="equal"):
        """
        Creates new LocalModel instance.
        :param forest: Fitted RandomSurvivalForest of the site.
        :param site_id: Opaque site identifier.
        :param site_features: Canonical names observed (not stubbed) at the site.
        :param update_method: "all" or "constant".
        :param update_weighting: "equal" or "site_size"; used by "constant".
        """
        _check_strategy(update_method, update_weighting)
        self.forest = forest
        self.site_id = site_id
        self.site_features = frozenset(site_features)
        self.update_method = update_method
        self.update_weighting = update_weighting
        self.federated_trees = []
        self.integrated_set = None
        self.active_set = list(forest.trees)

        for tree in forest.trees:
            if not tree.is_compatible(self.site_features):
                raise FederationError("local tree of site {0} splits on unavailable features {1}".format(
                    site_id, sorted(tree.split_features - self.site_features)))

    @property
    def train_size(self):
        return self.forest.train_size

    @property
    def n_estimators(self):
        return self.forest.params.n_estimators

    @property
    def feature_order(self):
        return self.forest.feature_order

    def integrate(self, received, rng):
        """
        Integrates compatible remote trees under the update method.
        "all" keeps local plus received trees; "constant" samples
        n_estimators trees without replacement from local plus received.
        :param received: Compatible SurvivalTree list from other sites.
        :param rng: numpy Generator used by "constant".
        :return: self, with active_set populated.
        """
        received = list(received)
        combined = list(self.forest.trees) + received
        selected = select_estimators(combined, self.n_estimators, self.update_method,
                                     self.update_weighting, rng)
        self.apply_selection(received, selected)
        return self

    def apply_selection(self, received, selected):
        """
        Stores received trees and activates the chosen positions of the
        combined local plus received list.
        :param received: SurvivalTree list.
        :param selected: Ascending positions into local + received.
        """
        received = list(received)
        for tree in received:
            if not tree.is_compatible(self.site_features):
                raise FederationError("site {0} received a tree from {1} splitting on {2}".format(
                    self.site_id, tree.origin_site, sorted(tree.split_features - self.site_features)))

        combined = list(self.forest.trees) + received
        self.federated_trees = received
        self.integrated_set = [combined[position] for position in selected]
        self.active_set = list(self.integrated_set)
        logger.debug("site %s: %d local + %d received -> %d active trees", self.site_id,
                     len(self.forest.trees), len(received), len(self.active_set))
        return self

    def use_federated_estimators(self):
        if self.integrated_set is None:
            raise FederationError("site {0} has not integrated federated trees".format(self.site_id))
        self.active_set = list(self.integrated_set)
        return self

    def use_local_estimators(self):
        self.active_set = list(self.forest.trees)
        return self

    def predict_risk(self, X):
        """
        Mean risk over the active estimator set.
        :param X: Aligned pandas DataFrame.
        :return: Float array.
        """
        return forest_risk(self.active_set, X)

    def to_document(self):
        return {
            "site_id": self.site_id,
            "site_features": sorted(self.site_features),
            "update_method": self.update_method,
            "update_weighting": self.update_weighting,
            "forest": self.forest.to_document()
        }

    @classmethod
    def from_document(cls, document):
        try:
            forest = RandomSurvivalForest.from_document(document["forest"])
            return cls(forest, document["site_id"], document["site_features"],
                       document.get("update_method", "all"),
                       document.get("update_weighting", "equal"))
        except (KeyError, TypeError) as exception:
            raise FederationError("malformed model document: {0}".format(exception))

    def active_documents(self):
        return [tree.to_document() for tree in self.active_set]


def integrate(model, received, rng):
    return model.integrate(received, rng)


def select_estimators(trees, n_estimators, update_method, update_weighting, rng):
    """
    Positions of the trees an update method keeps.
    :param trees: Local followed by received trees.
    :param n_estimators: Target size for "constant".
    :param update_method: "all" or "constant".
    :param update_weighting: "equal" or "site_size".
    :param rng: numpy Generator.
    :return: Ascending list of positions.
    """
    _check_strategy(update_method, update_weighting)
    if update_method == "all" or len(trees) <= n_estimators:
        return list(range(len(trees)))

    if update_weighting == "equal":
        weights = np.ones(len(trees))
    else:
        weights = np.array([tree.train_size for tree in trees], dtype=float)
        if np.any(weights <= 0):
            raise FederationError("site_size weighting needs positive train sizes")

    # exponential keys: the n largest u ** (1 / w) form a weighted sample without replacement
    keys = np.log(rng.random(len(trees))) / weights
    chosen = np.argsort(-keys, kind="stable")[:n_estimators]
    return sorted(int(position) for position in chosen)


def _check_strategy(update_method, update_weighting):
    if update_method not in UPDATE_METHODS:
        raise FederationError("unknown update method '{0}'".format(update_method))
    if update_weighting not in UPDATE_WEIGHTINGS:
        raise FederationError("unknown update weighting '{0}'".format(update_weighting))
