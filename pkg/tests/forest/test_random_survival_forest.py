"""Contains tests for RandomSurvivalForest class"""
from io import StringIO

import numpy as np
import pandas as pd
import pytest

from fedsurv.exceptions.TreeError import TreeError
from fedsurv.forest.ForestParams import ForestParams
from fedsurv.forest.RandomSurvivalForest import (RandomSurvivalForest, MODEL_METADATA, fit_forest,
                                                 forest_risk, oob_c_index, usable_features)
from fedsurv.experiment.datasets import one_hot
from fedsurv.survival.concordance import concordance_from_arrays

SMALL = ForestParams(n_estimators=8)


@pytest.fixture
def training(cohort):
    encoded = one_hot(cohort)
    return encoded.frame, (encoded.times, encoded.events)


def test_usable_features_skips_missing_columns():
    frame = pd.DataFrame({"a": [1.0, 2.0], "b": [np.nan, np.nan], "c": [1.0, np.nan]})

    assert ["a"] == usable_features(frame)


def test_fit_is_reproducible(training):
    frame, outcomes = training

    first = fit_forest(frame, outcomes, SMALL, list(frame.columns), seed=3, origin_site="a")
    second = fit_forest(frame, outcomes, SMALL, list(frame.columns), seed=3, origin_site="a")

    assert first.to_document() == second.to_document()
    assert 8 == len(first.trees)
    assert all("a" == tree.origin_site and len(frame) == tree.train_size for tree in first.trees)


def test_parallel_fit_equals_serial_fit(training):
    frame, outcomes = training

    serial = fit_forest(frame, outcomes, SMALL.replace(n_jobs=1), None, seed=5)
    parallel = fit_forest(frame, outcomes, SMALL.replace(n_jobs=2), None, seed=5)

    assert ([tree.to_document() for tree in serial.trees]
            == [tree.to_document() for tree in parallel.trees])


def test_risk_does_not_depend_on_tree_order(training):
    frame, outcomes = training
    forest = fit_forest(frame, outcomes, SMALL, None, seed=1)

    forward = forest_risk(forest.trees, frame)
    backward = forest_risk(list(reversed(forest.trees)), frame)

    np.testing.assert_array_equal(forward, backward)
    np.testing.assert_array_equal(forward, forest.predict_risk(frame))


def test_risk_needs_trees(training):
    frame, _ = training

    with pytest.raises(TreeError):
        forest_risk([], frame)


def test_bootstrap_draws_max_samples(training):
    frame, outcomes = training
    forest = fit_forest(frame, outcomes, SMALL.replace(max_samples=0.5), None, seed=2)

    assert all(mask.sum() <= len(frame) // 2 for mask in forest.in_bag)
    assert all(sum(leaf.n_node_samples for leaf in tree.leaves) == len(frame) // 2
               for tree in forest.trees)


def test_oob_c_index(training):
    frame, outcomes = training
    forest = fit_forest(frame, outcomes, SMALL.replace(oob_score=True), None, seed=4)

    assert 0.0 <= forest.oob_c_index <= 1.0
    assert forest.oob_c_index == oob_c_index(forest, frame, outcomes)


def test_oob_requires_bootstrap(training):
    frame, outcomes = training
    forest = fit_forest(frame, outcomes, SMALL.replace(bootstrap=False), None, seed=4)

    with pytest.raises(TreeError) as error:
        forest.compute_oob_c_index(frame, outcomes)
    assert "OOB requires bootstrap" == error.value.message


def test_survival_and_hazard_predictions(training):
    frame, outcomes = training
    forest = fit_forest(frame, outcomes, SMALL, None, seed=6)
    grid = np.linspace(0.0, 3.0, 7)

    hazard = forest.predict_cumulative_hazard(frame.iloc[:5], grid)
    survival = forest.predict_survival(frame.iloc[:5], grid)

    assert (5, 7) == hazard.shape
    assert np.all(np.diff(hazard, axis=1) >= 0)
    assert np.all(np.diff(survival, axis=1) <= 0)
    np.testing.assert_array_equal(np.ones(5), survival[:, 0])


def test_low_memory_forest_rejects_function_prediction(training):
    frame, outcomes = training
    forest = fit_forest(frame, outcomes, SMALL.replace(low_memory=True), None, seed=6)

    with pytest.raises(TreeError):
        forest.predict_survival(frame, [1.0])
    assert forest.predict_risk(frame).shape == (len(frame),)


def test_save_and_load(training):
    frame, outcomes = training
    forest = fit_forest(frame, outcomes, SMALL, None, seed=8, origin_site="site")
    stream = StringIO()

    forest.save(stream)
    stream.seek(0)
    loaded = RandomSurvivalForest.load(stream)

    assert MODEL_METADATA == forest.to_document()["metadata"]
    assert forest.params == loaded.params
    np.testing.assert_array_equal(forest.predict_risk(frame), loaded.predict_risk(frame))


def test_fit_rejects_mismatched_outcomes(training):
    frame, (times, events) = training

    with pytest.raises(TreeError):
        RandomSurvivalForest(SMALL).fit(frame, (times[:-1], events[:-1]))


def exponential_cohort(rng, n, log_hazard, censor_at=None):
    """
    Exponential survival times with the given per-row log hazard; rows are
    censored at censor_at when given.
    """
    times = rng.exponential(np.exp(-log_hazard))
    if censor_at is None:
        return times, np.ones(n, dtype=bool)
    return np.minimum(times, censor_at), times <= censor_at


def proportional_hazards_data(rng, n):
    frame = pd.DataFrame(rng.normal(size=(n, 3)), columns=["x0", "x1", "x2"])
    censor_at = rng.uniform(0.2, 2.0, size=n)
    times, events = exponential_cohort(rng, n, 2.0 * frame["x0"].to_numpy(), censor_at)
    return frame, (times, events)


@pytest.mark.slow
def test_forest_discriminates_proportional_hazards():
    rng = np.random.default_rng(42)
    train_frame, train_outcomes = proportional_hazards_data(rng, 500)
    test_frame, (test_times, test_events) = proportional_hazards_data(rng, 500)

    forest = fit_forest(train_frame, train_outcomes,
                        ForestParams(n_estimators=50).replace(max_features="all"), None, seed=1)

    assert concordance_from_arrays(forest.predict_risk(test_frame), test_times, test_events) > 0.7


@pytest.mark.slow
def test_oob_on_noise_features_is_near_chance():
    rng = np.random.default_rng(17)
    frame = pd.DataFrame(rng.normal(size=(300, 3)), columns=["n0", "n1", "n2"])
    outcomes = exponential_cohort(rng, 300, np.zeros(300), rng.uniform(0.2, 2.0, size=300))

    forest = fit_forest(frame, outcomes, ForestParams(n_estimators=30, oob_score=True), None,
                        seed=2)

    assert 0.4 <= forest.oob_c_index <= 0.6


@pytest.mark.slow
def test_oob_on_two_risk_groups_reaches_group_concordance():
    # Within a group every predictor orders pairs at chance, so the true
    # group indicator bounds the attainable C-index well below 0.9.
    rng = np.random.default_rng(400)
    group = np.repeat([0.0, 1.0], 200)
    frame = pd.DataFrame({"group": group})
    times, events = exponential_cohort(rng, 400, np.log(10.0) * group, censor_at=0.5)

    forest = fit_forest(frame, (times, events), ForestParams(n_estimators=50, oob_score=True),
                        None, seed=3)
    group_concordance = concordance_from_arrays(group, times, events)

    assert forest.oob_c_index > 0.6
    assert abs(forest.oob_c_index - group_concordance) < 0.06
