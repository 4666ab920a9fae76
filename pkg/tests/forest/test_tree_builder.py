"""Contains tests for growing survival trees"""
import numpy as np
import pandas as pd
import pytest

from fedsurv.exceptions.TreeError import TreeError, IncompatibleRowError
from fedsurv.forest.SurvivalTree import SurvivalTree
from fedsurv.forest.treebuilder import fit_tree, fit_tree_arrays
from fedsurv.forest.SurvivalTree import tree_risk, tree_chf, tree_survival
from fedsurv.forest.TreeParams import TreeParams
from fedsurv.survival.estimators import logrank_statistic
from fedsurv.survival.SurvivalOutcome import from_arrays

ALL_FEATURES = TreeParams(min_samples_split=2, min_samples_leaf=1, max_features="all")


def separable_data():
    frame = pd.DataFrame({"x": np.arange(10, dtype=float), "noise": np.zeros(10)})
    times = np.where(frame["x"] < 5, 1.0, 10.0)
    outcomes = from_arrays(times, np.ones(10, dtype=bool))
    return frame, outcomes


def random_data(seed, n=80, n_features=5):
    rng = np.random.default_rng(seed)
    matrix = rng.normal(size=(n, n_features))
    times = rng.exponential(np.exp(-matrix[:, 0])) + 0.01
    events = rng.random(n) < 0.7
    names = ["f{0}".format(index) for index in range(n_features)]
    return pd.DataFrame(matrix, columns=names), from_arrays(times, events)


def test_separating_feature_is_chosen():
    frame, outcomes = separable_data()

    tree = fit_tree(frame, outcomes, ALL_FEATURES, ["x", "noise"], np.random.default_rng(0))

    root = tree.nodes[0]
    assert not root.is_leaf
    assert "x" == root.feature
    assert 4.5 == root.threshold
    assert {"x"} == set(tree.split_features)


def test_value_equal_to_threshold_goes_left():
    frame, outcomes = separable_data()
    tree = fit_tree(frame, outcomes, TreeParams(min_samples_split=2, min_samples_leaf=5,
                                                max_features="all"),
                    ["x"], np.random.default_rng(0))
    root = tree.nodes[0]

    assert tree.route({"x": root.threshold}) is tree.nodes[root.left]
    assert tree.route({"x": root.threshold + 1e-9}) is tree.nodes[root.right]


def test_identical_columns_split_on_lower_index():
    frame, outcomes = separable_data()
    frame["copy"] = frame["x"]

    tree = fit_tree(frame, outcomes, TreeParams(min_samples_split=2, min_samples_leaf=5,
                                                max_features="all"),
                    ["copy", "x"], np.random.default_rng(0))

    assert "copy" == tree.nodes[0].feature


@pytest.mark.parametrize(["times", "events"], [
    ([1.0, 2.0, 3.0, 4.0], [False, False, False, False]),
    ([2.0, 2.0, 2.0, 2.0], [True, True, True, True])
])
def test_uninformative_node_becomes_leaf(times, events):
    frame = pd.DataFrame({"x": [1.0, 2.0, 3.0, 4.0]})

    tree = fit_tree(frame, from_arrays(times, events), ALL_FEATURES, ["x"],
                    np.random.default_rng(0))

    assert 1 == len(tree.nodes)
    assert tree.nodes[0].is_leaf


def test_small_node_becomes_leaf():
    frame, outcomes = separable_data()

    tree = fit_tree(frame, outcomes, TreeParams(min_samples_split=11), ["x"],
                    np.random.default_rng(0))

    assert 1 == len(tree.nodes)


def test_max_depth_limits_tree():
    frame, outcomes = random_data(3)

    tree = fit_tree(frame, outcomes, TreeParams(max_depth=1, min_samples_split=2,
                                                min_samples_leaf=1, max_features="all"),
                    list(frame.columns), np.random.default_rng(0))

    assert 3 == len(tree.nodes)


def test_leaves_respect_min_samples_leaf():
    frame, outcomes = random_data(4)

    tree = fit_tree(frame, outcomes, TreeParams(min_samples_leaf=7), list(frame.columns),
                    np.random.default_rng(1))

    assert all(leaf.n_node_samples >= 7 for leaf in tree.leaves)
    assert len(outcomes) == sum(leaf.n_node_samples for leaf in tree.leaves)


def test_leaf_risk_is_sum_of_cumulative_hazard():
    frame, outcomes = random_data(5)
    tree = fit_tree(frame, outcomes, TreeParams(), list(frame.columns), np.random.default_rng(2))
    row = frame.iloc[0]

    leaf = tree.route(row)

    assert sum(leaf.chf) == pytest.approx(tree_risk(tree, row))
    assert leaf.cumulative_hazard() == tree_chf(tree, row)
    assert tree_survival(tree, row)(0.0) == 1.0


def test_same_stream_grows_same_tree():
    frame, outcomes = random_data(6)

    first = fit_tree(frame, outcomes, TreeParams(), list(frame.columns), np.random.default_rng(9))
    second = fit_tree(frame, outcomes, TreeParams(), list(frame.columns), np.random.default_rng(9))

    assert first.to_document() == second.to_document()


def test_document_rebuilds_tree():
    frame, outcomes = random_data(7)
    tree = fit_tree(frame, outcomes, TreeParams(), list(frame.columns), np.random.default_rng(3),
                    origin_site="site_a")

    rebuilt = SurvivalTree.from_document(tree.to_document())

    assert tree.to_document() == rebuilt.to_document()
    assert tree.split_features == rebuilt.split_features
    assert "site_a" == rebuilt.origin_site
    np.testing.assert_array_equal(tree.risk(frame), rebuilt.risk(frame))


def test_low_memory_tree_has_no_survival():
    frame, outcomes = random_data(8)
    tree = fit_tree(frame, outcomes, TreeParams(), list(frame.columns), np.random.default_rng(3),
                    low_memory=True)

    with pytest.raises(TreeError):
        tree_survival(tree, frame.iloc[0])


def test_missing_split_feature_is_incompatible():
    frame, outcomes = separable_data()
    tree = fit_tree(frame, outcomes, ALL_FEATURES, ["x"], np.random.default_rng(0),
                    origin_site="site_b")

    with pytest.raises(IncompatibleRowError) as error:
        tree.risk(pd.DataFrame({"x": [1.0, np.nan]}))
    assert "site_b" == error.value.origin_site
    assert "x" == error.value.feature
    with pytest.raises(IncompatibleRowError):
        tree.route({"noise": 0.0})


def test_partially_missing_column_is_rejected():
    frame, outcomes = separable_data()
    frame.loc[3, "x"] = np.nan

    with pytest.raises(TreeError):
        fit_tree(frame, outcomes, ALL_FEATURES, ["x"], np.random.default_rng(0))


def test_no_usable_features():
    frame, outcomes = separable_data()

    with pytest.raises(TreeError) as error:
        fit_tree(frame, outcomes, ALL_FEATURES, [], np.random.default_rng(0))
    assert "no usable features" == error.value.message


def test_arrays_of_different_length():
    with pytest.raises(TreeError):
        fit_tree_arrays(np.zeros((3, 1)), np.ones(2), np.ones(2, dtype=bool), ["x"],
                        ALL_FEATURES, np.random.default_rng(0))


def test_malformed_document():
    with pytest.raises(TreeError):
        SurvivalTree.from_document({"nodes": [{"id": 0, "feature": "x", "threshold": 1.0,
                                               "left": 1, "right": 2}]})


def brute_force_root_split(frame, outcomes, min_samples_leaf):
    best = (0.0, None, None)
    for feature in frame.columns:
        values = frame[feature].to_numpy()
        distinct = np.unique(values)
        for lower, upper in zip(distinct[:-1], distinct[1:]):
            goes_left = values <= (lower + upper) / 2.0
            n_left = int(goes_left.sum())
            if n_left < min_samples_leaf or len(values) - n_left < min_samples_leaf:
                continue
            statistic = logrank_statistic([outcomes[i] for i in np.flatnonzero(goes_left)],
                                          [outcomes[i] for i in np.flatnonzero(~goes_left)])
            if statistic > best[0]:
                best = (statistic, feature, goes_left)
    return best


def test_root_split_matches_exhaustive_search():
    rng = np.random.default_rng(12)
    for seed in range(30):
        n = int(rng.integers(10, 101))
        n_features = int(rng.integers(1, 6))
        min_samples_leaf = int(rng.integers(1, 6))
        frame, outcomes = random_data(seed, n, n_features)
        # coarse values so ties between candidate thresholds occur
        frame = frame.round(1)
        params = TreeParams(min_samples_split=2, min_samples_leaf=min_samples_leaf,
                            max_features="all")

        tree = fit_tree(frame, outcomes, params, list(frame.columns), np.random.default_rng(0))
        statistic, _, _ = brute_force_root_split(frame, outcomes, min_samples_leaf)

        root = tree.nodes[0]
        if root.is_leaf:
            assert statistic == pytest.approx(0.0, abs=1e-9)
            continue
        chosen = frame[root.feature].to_numpy() <= root.threshold
        chosen_statistic = logrank_statistic([outcomes[i] for i in np.flatnonzero(chosen)],
                                             [outcomes[i] for i in np.flatnonzero(~chosen)])
        assert statistic == pytest.approx(chosen_statistic, rel=1e-9, abs=1e-9)
        assert min(chosen.sum(), (~chosen).sum()) >= min_samples_leaf
