"""Contains the redistribution of pooled trees to every site."""
import logging

from fedsurv.federation.FederatedPool import pool_models
from fedsurv.federation.LocalModel import select_estimators
from fedsurv.utils import randomutils

logger = logging.getLogger(__name__)


def federate(models, seed=None):
    """
    Pools all local models, filters the pool per site and integrates the
    compatible trees. The stream of a site is keyed by its position among
    the sorted site ids.
    :param models: List of LocalModel.
    :param seed: Master seed of the constant-sampling streams.
    :return: Map of site id to integrated LocalModel.
    """
    plan = federation_plan(models, seed)
    result = {}
    for model in models:
        received, selected = plan[model.site_id]
        result[model.site_id] = model.apply_selection(received, selected)
    return result


def federation_plan(models, seed=None):
    """
    Decides, without touching the models, which trees every site receives
    and which positions of local + received it activates.
    :param models: List of LocalModel.
    :param seed: Master seed.
    :return: Map of site id to (received trees, selected positions).
    """
    pool = pool_models(models)
    entropy = randomutils.master_entropy(seed)
    positions = dict((site_id, index) for index, site_id in enumerate(sorted(pool.site_features)))

    plan = {}
    for model in models:
        received = pool.compatible_trees(model.site_id)
        rng = randomutils.child_stream(entropy, positions[model.site_id])
        selected = select_estimators(list(model.forest.trees) + received, model.n_estimators,
                                     model.update_method, model.update_weighting, rng)
        plan[model.site_id] = (received, selected)
        logger.info("site %s receives %d of %d pooled trees", model.site_id, len(received), len(pool))
    return plan
