"""Contains the right-continuous step function carrying S(t) and H(t)."""
import numpy as np


class StepFunction:
    """
    Right-continuous step function. Evaluates to value_before_first for
    t < times[0], else to values[j] for the largest times[j] <= t.
    """

    def __init__(self, times, values, value_before_first):
        self.times = np.asarray(times, dtype=float)
        self.values = np.asarray(values, dtype=float)
        self.value_before_first = float(value_before_first)
        if self.times.shape != self.values.shape:
            raise ValueError("times and values differ in length")

    def __call__(self, t):
        """
        Evaluates the function.
        :param t: Scalar or array of time points.
        :return: Value(s) at t, shaped like t.
        """
        points = np.asarray(t, dtype=float)
        index = np.searchsorted(self.times, points, side="right") - 1
        padded = np.concatenate(([self.value_before_first], self.values))
        result = padded[index + 1]
        if result.ndim == 0:
            return float(result)
        return result

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return (np.array_equal(self.times, other.times)
                and np.array_equal(self.values, other.values)
                and self.value_before_first == other.value_before_first)

    def __repr__(self):
        return "StepFunction(times={0}, values={1}, value_before_first={2})".format(
            self.times.tolist(), self.values.tolist(), self.value_before_first)
