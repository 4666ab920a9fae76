"""Contains tests for Harrell's concordance index"""
import numpy as np
import pytest

from fedsurv.exceptions.SurvivalError import NoComparablePairsError
from fedsurv.survival.concordance import concordance_index, concordance_counts
from fedsurv.survival.SurvivalOutcome import SurvivalOutcome, from_arrays


def brute_force_concordance(risk, sample):
    score = 0.0
    pairs = 0
    for i, first in enumerate(sample):
        for j, second in enumerate(sample):
            if i == j or not first.event:
                continue
            if first.time < second.time or (first.time == second.time and not second.event):
                pairs += 1
                if risk[i] > risk[j]:
                    score += 1.0
                elif risk[i] == risk[j]:
                    score += 0.5
    return score, pairs


@pytest.mark.parametrize(["risk", "expected"], [
    ([3.0, 2.0, 1.0], 1.0),
    ([1.0, 2.0, 3.0], 0.0),
    ([1.0, 1.0, 1.0], 0.5)
])
def test_concordance_ordering(risk, expected):
    sample = [SurvivalOutcome(1, True), SurvivalOutcome(2, True), SurvivalOutcome(3, True)]

    assert expected == concordance_index(risk, sample)


def test_tied_times_with_one_event_are_comparable():
    sample = [SurvivalOutcome(2, True), SurvivalOutcome(2, False)]

    assert 1.0 == concordance_index([2.0, 1.0], sample)
    assert (1.0, 1) == concordance_counts([2.0, 1.0], [2, 2], [True, False])


def test_tied_event_times_are_not_comparable():
    sample = [SurvivalOutcome(2, True), SurvivalOutcome(2, True)]

    with pytest.raises(NoComparablePairsError):
        concordance_index([2.0, 1.0], sample)


def test_all_censored():
    sample = [SurvivalOutcome(1, False), SurvivalOutcome(2, False)]

    with pytest.raises(NoComparablePairsError):
        concordance_index([1.0, 2.0], sample)


def test_concordance_matches_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        n = int(rng.integers(2, 51))
        sample = from_arrays(rng.integers(1, 10, size=n).astype(float), rng.random(n) < 0.5)
        risk = rng.integers(0, 5, size=n).astype(float)
        score, pairs = brute_force_concordance(risk, sample)

        assert (score, pairs) == concordance_counts(risk, [o.time for o in sample],
                                                    [o.event for o in sample])
        if pairs:
            assert score / pairs == pytest.approx(concordance_index(risk, sample), abs=1e-12)


def test_negated_risk_is_complementary():
    rng = np.random.default_rng(23)
    for _ in range(200):
        n = int(rng.integers(2, 40))
        times = rng.integers(1, 10, size=n).astype(float)
        events = rng.random(n) < 0.6
        # continuous risks never tie
        risk = rng.normal(size=n)
        _, pairs = concordance_counts(risk, times, events)
        if not pairs:
            continue
        sample = from_arrays(times, events)

        assert 1.0 == pytest.approx(concordance_index(risk, sample)
                                    + concordance_index(-risk, sample), abs=1e-12)
