"""Contains censoring-aware estimators and the log-rank split statistic."""
import numpy as np

from fedsurv.exceptions.SurvivalError import EmptyCohortError, DegenerateSplitError
from fedsurv.survival.RiskTable import RiskTable
from fedsurv.survival.StepFunction import StepFunction
from fedsurv.survival.SurvivalOutcome import to_arrays


def build_risk_table(outcomes):
    """
    Counts subjects at risk and events at every distinct event time.
    :param outcomes: Sequence of SurvivalOutcome.
    :return: RiskTable over the full input.
    """
    times, events = to_arrays(outcomes)
    return risk_table_from_arrays(times, events)


def risk_table_from_arrays(times, events):
    """
    Array variant of build_risk_table.
    :param times: Float array of observed times.
    :param events: Boolean array of event indicators.
    :return: RiskTable.
    """
    times = np.asarray(times, dtype=float)
    events = np.asarray(events, dtype=bool)
    if times.size == 0:
        raise EmptyCohortError()

    event_times = np.unique(times[events])
    sorted_times = np.sort(times)
    at_risk = times.size - np.searchsorted(sorted_times, event_times, side="left")
    sorted_event_times = np.sort(times[events])
    event_counts = (np.searchsorted(sorted_event_times, event_times, side="right")
                    - np.searchsorted(sorted_event_times, event_times, side="left"))

    return RiskTable(event_times, at_risk, event_counts)


def kaplan_meier(outcomes):
    """
    Product-limit estimate of the survival function S(t).
    :param outcomes: Sequence of SurvivalOutcome.
    :return: StepFunction starting at 1.
    """
    return kaplan_meier_from_table(build_risk_table(outcomes))


def kaplan_meier_from_table(table):
    survival = np.cumprod(1.0 - table.events / table.at_risk)
    return StepFunction(table.event_times, survival, 1.0)


def nelson_aalen(outcomes):
    """
    Nelson-Aalen estimate of the cumulative hazard H(t).
    :param outcomes: Sequence of SurvivalOutcome.
    :return: StepFunction starting at 0.
    """
    return nelson_aalen_from_table(build_risk_table(outcomes))


def nelson_aalen_from_table(table):
    cumulative_hazard = np.cumsum(table.events / table.at_risk)
    return StepFunction(table.event_times, cumulative_hazard, 0.0)


def logrank_statistic(left, right):
    """
    Standardized log-rank statistic |N| / sqrt(V) between two groups.
    :param left: Outcomes of the left group.
    :param right: Outcomes of the right group.
    :return: Non-negative statistic, 0 when no event discriminates.
    """
    if len(left) == 0 or len(right) == 0:
        raise DegenerateSplitError()

    left_times, left_events = to_arrays(left)
    right_times, right_events = to_arrays(right)
    times = np.concatenate((left_times, right_times))
    events = np.concatenate((left_events, right_events))
    in_left = np.zeros(times.size, dtype=bool)
    in_left[:left_times.size] = True

    at_risk, died = risk_indicators(times, events)
    if at_risk.shape[1] == 0:
        return 0.0

    y_left = at_risk[in_left].sum(axis=0)
    d_left = died[in_left].sum(axis=0)
    numerator, variance = _logrank_terms(y_left, d_left,
                                         at_risk.sum(axis=0), died.sum(axis=0))
    if variance <= 0:
        return 0.0
    return float(abs(numerator) / np.sqrt(variance))


def risk_indicators(times, events):
    """
    Builds subject-by-event-time indicator matrices.
    :param times: Float array of observed times.
    :param events: Boolean array of event indicators.
    :return: Tuple of at_risk[i, j] (time_i >= u_j) and died[i, j]
             (event_i and time_i == u_j) over distinct event times u.
    """
    event_times = np.unique(times[events])
    at_risk = times[:, None] >= event_times[None, :]
    died = (times[:, None] == event_times[None, :]) & events[:, None]
    return at_risk, died


def logrank_prefix_statistics(at_risk, died):
    """
    Log-rank statistic of every split of the rows into a prefix (left)
    and the remaining suffix (right), in the given row order.
    :param at_risk: Indicator matrix from risk_indicators, rows ordered.
    :param died: Indicator matrix from risk_indicators, rows ordered.
    :return: Array of length n - 1; entry m splits after row m.
    """
    n_rows = at_risk.shape[0]
    statistics = np.zeros(max(n_rows - 1, 0))
    if n_rows < 2 or at_risk.shape[1] == 0:
        return statistics

    y_left = np.cumsum(at_risk, axis=0, dtype=float)[:-1]
    d_left = np.cumsum(died, axis=0, dtype=float)[:-1]
    numerator, variance = _logrank_terms(y_left, d_left,
                                         at_risk.sum(axis=0), died.sum(axis=0))
    positive = variance > 0
    statistics[positive] = np.abs(numerator[positive]) / np.sqrt(variance[positive])
    return statistics


def _logrank_terms(y_left, d_left, y_total, d_total):
    y_total = y_total.astype(float)
    d_total = d_total.astype(float)
    # hypergeometric variance term is 0 when a single subject is at risk
    correction = np.zeros_like(y_total)
    several = y_total > 1
    correction[several] = (y_total[several] - d_total[several]) / (y_total[several] - 1)

    ratio = y_left / y_total
    numerator = (d_left - ratio * d_total).sum(axis=-1)
    variance = (ratio * (1.0 - ratio) * correction * d_total).sum(axis=-1)
    return numerator, variance
