"""Contains Harrell's concordance index for right-censored outcomes."""
import numpy as np

from fedsurv.exceptions.SurvivalError import NoComparablePairsError, SurvivalError
from fedsurv.survival.SurvivalOutcome import to_arrays

# Recorded with every evaluation so alternative pair rules stay distinguishable.
CONCORDANCE_CONVENTION = "harrell-tied-times-half-credit"


def concordance_index(risk, outcomes):
    """
    Harrell's C-index: share of comparable pairs whose risks are ordered
    like their times. Equal risks earn half credit.
    :param risk: Predicted risk per subject, higher means earlier event.
    :param outcomes: Sequence of SurvivalOutcome.
    :return: C-index in [0, 1].
    """
    times, events = to_arrays(outcomes)
    return concordance_from_arrays(risk, times, events)


def concordance_from_arrays(risk, times, events):
    score, n_pairs = concordance_counts(risk, times, events)
    if n_pairs == 0:
        raise NoComparablePairsError()
    return score / n_pairs


def concordance_counts(risk, times, events):
    """
    Sums pair scores over all comparable pairs. A pair (i, j) is comparable
    when time_i < time_j and i had the event, or when the times tie and
    only i had the event.
    :param risk: Predicted risks.
    :param times: Observed times.
    :param events: Event indicators.
    :return: Tuple of summed score and number of comparable pairs.
    """
    risk = np.asarray(risk, dtype=float)
    times = np.asarray(times, dtype=float)
    events = np.asarray(events, dtype=bool)
    if not (risk.shape == times.shape == events.shape):
        raise SurvivalError("risk and outcomes differ in length")

    earlier = times[:, None] < times[None, :]
    tied = (times[:, None] == times[None, :]) & ~events[None, :]
    comparable = (earlier | tied) & events[:, None]

    higher = risk[:, None] > risk[None, :]
    equal = risk[:, None] == risk[None, :]
    score = higher[comparable].sum() + 0.5 * equal[comparable].sum()
    return float(score), int(comparable.sum())
