"""Contains the observed time and event indicator of a single subject."""
import math
from collections import namedtuple

import numpy as np

from fedsurv.exceptions.SurvivalError import SurvivalError


class SurvivalOutcome(namedtuple("SurvivalOutcome", ["time", "event"])):
    """
    Right-censored outcome of one subject. event is True when the time is
    an observed event and False when it is a censoring time.
    """
    __slots__ = ()

    def __new__(cls, time, event):
        time = float(time)
        if not math.isfinite(time) or time <= 0:
            raise SurvivalError("survival time must be positive and finite, got {0!r}".format(time))
        return super(SurvivalOutcome, cls).__new__(cls, time, bool(event))


def to_arrays(outcomes):
    """
    Splits outcomes into a float array of times and a boolean array of events.
    :param outcomes: Sequence of SurvivalOutcome.
    :return: Tuple of times and events.
    """
    times = np.fromiter((outcome.time for outcome in outcomes), dtype=float)
    events = np.fromiter((outcome.event for outcome in outcomes), dtype=bool)
    return times, events


def from_arrays(times, events):
    """
    Builds validated outcomes from parallel time and event arrays.
    :param times: Observed times.
    :param events: Event indicators.
    :return: List of SurvivalOutcome.
    """
    if len(times) != len(events):
        raise SurvivalError("times and events differ in length")
    return [SurvivalOutcome(time, event) for time, event in zip(times, events)]
