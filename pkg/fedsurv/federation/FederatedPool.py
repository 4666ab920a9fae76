"""Contains the pool of all sites' trees and the compatibility filter."""
from fedsurv.exceptions.FederationError import FederationError


class FederatedPool:
    """
    Trees of all local forests with their provenance. Holds model
    artifacts only: no covariates, times or event indicators.
    """

    def __init__(self, trees, origins, site_features, site_sizes, feature_order):
        self.trees = list(trees)
        self.origins = list(origins)
        self.site_features = dict((site, frozenset(features))
                                  for site, features in site_features.items())
        self.site_sizes = dict(site_sizes)
        self.feature_order = list(feature_order)

    def __len__(self):
        return len(self.trees)

    def compatible_trees(self, target_site_id):
        """
        Trees of other sites whose split features the target site has.
        :param target_site_id: Site id.
        :return: List of SurvivalTree in pool order.
        """
        if target_site_id not in self.site_features:
            raise FederationError("unknown site '{0}'".format(target_site_id))
        features = self.site_features[target_site_id]
        return [tree for tree, origin in zip(self.trees, self.origins)
                if origin != target_site_id and tree.split_features <= features]


def pool_models(models):
    """
    Concatenates the trees of all local models.
    :param models: List of LocalModel sharing one feature order.
    :return: FederatedPool.
    """
    if not models:
        raise FederationError("no models to pool")
    feature_order = list(models[0].feature_order)
    site_ids = [model.site_id for model in models]
    if len(set(site_ids)) != len(site_ids):
        raise FederationError("duplicate site ids in federation")

    trees = []
    origins = []
    for model in models:
        if list(model.feature_order) != feature_order:
            raise FederationError("unaligned models: site {0} has a different feature order".format(
                model.site_id))
        trees.extend(model.forest.trees)
        origins.extend([model.site_id] * len(model.forest.trees))

    return FederatedPool(trees, origins,
                         dict((model.site_id, model.site_features) for model in models),
                         dict((model.site_id, model.train_size) for model in models),
                         feature_order)


def compatible_trees(pool, target_site_id):
    return pool.compatible_trees(target_site_id)
