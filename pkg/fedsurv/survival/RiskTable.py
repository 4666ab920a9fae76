"""Contains the per-event-time counts all estimators are built from."""
import numpy as np


class RiskTable:
    """
    Number at risk (Y_i) and number of events (d_i) at every distinct
    event time. Censored subjects at time t count as at risk for events at t.
    """

    def __init__(self, event_times, at_risk, events):
        self.event_times = np.asarray(event_times, dtype=float)
        self.at_risk = np.asarray(at_risk, dtype=np.int64)
        self.events = np.asarray(events, dtype=np.int64)

    def __len__(self):
        return len(self.event_times)

    def __eq__(self, other):
        if not isinstance(other, RiskTable):
            return NotImplemented
        return (np.array_equal(self.event_times, other.event_times)
                and np.array_equal(self.at_risk, other.at_risk)
                and np.array_equal(self.events, other.events))

    def __repr__(self):
        return "RiskTable(event_times={0}, at_risk={1}, events={2})".format(
            self.event_times.tolist(), self.at_risk.tolist(), self.events.tolist())
