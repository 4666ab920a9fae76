"""Contains the paired significance tests used to compare configurations."""
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

EXACT_WILCOXON_LIMIT = 25


@dataclass(frozen=True)
class PairedTestResult:
    """
    Comparison of two configurations over paired evaluations; deltas are
    comparison minus baseline.
    """
    baseline: str
    comparison: str
    n_pairs: int
    mean_delta: float
    median_delta: float
    wilcoxon_p: float
    paired_t_p: float


def wilcoxon_signed_rank(deltas):
    """
    Two-sided Wilcoxon signed-rank p-value. Zero deltas are dropped and
    tied magnitudes get average ranks; up to 25 remaining deltas the null
    distribution is enumerated exactly, above that the tie-corrected
    normal approximation is used. All-zero deltas give 1.0.
    :param deltas: Paired differences.
    :return: p-value in (0, 1].
    """
    deltas = np.asarray(deltas, dtype=float)
    if deltas.size < 2:
        raise ValueError("at least two deltas are needed")
    deltas = deltas[deltas != 0]
    n = deltas.size
    if n == 0:
        return 1.0

    ranks = stats.rankdata(np.abs(deltas))
    w_plus = float(ranks[deltas > 0].sum())

    if n <= EXACT_WILCOXON_LIMIT:
        return _exact_signed_rank_p(ranks, w_plus)

    _, tie_counts = np.unique(ranks, return_counts=True)
    mean = n * (n + 1) / 4.0
    variance = n * (n + 1) * (2 * n + 1) / 24.0 - float(np.sum(tie_counts ** 3 - tie_counts)) / 48.0
    if variance <= 0:
        return 1.0
    z = (w_plus - mean) / math.sqrt(variance)
    return min(1.0, float(2 * stats.norm.sf(abs(z))))


def _exact_signed_rank_p(ranks, w_plus):
    # average ranks are multiples of 1/2, so doubled ranks index an integer table
    doubled = np.rint(2 * ranks).astype(np.int64)
    counts = np.zeros(int(doubled.sum()) + 1)
    counts[0] = 1.0
    for rank in doubled:
        shifted = np.zeros_like(counts)
        shifted[rank:] = counts[:-rank]
        counts = counts + shifted
    probabilities = counts / counts.sum()

    observed = int(round(2 * w_plus))
    lower = probabilities[:observed + 1].sum()
    upper = probabilities[observed:].sum()
    return min(1.0, float(2 * min(lower, upper)))


def paired_t(deltas):
    """
    Two-sided paired t-test p-value of the mean delta against zero.
    Zero-variance deltas give 1.0.
    :param deltas: Paired differences.
    :return: p-value in (0, 1].
    """
    deltas = np.asarray(deltas, dtype=float)
    n = deltas.size
    if n < 2:
        raise ValueError("at least two deltas are needed")
    sd = float(np.std(deltas, ddof=1))
    if sd == 0:
        return 1.0
    statistic = float(np.mean(deltas)) / (sd / math.sqrt(n))
    return min(1.0, float(2 * stats.t.sf(abs(statistic), n - 1)))


def paired_test(baseline, comparison, baseline_name, comparison_name):
    """
    Runs both tests on deltas comparison - baseline.
    :param baseline: Baseline C-indices, paired by position with comparison.
    :param comparison: Comparison C-indices.
    :return: PairedTestResult.
    """
    baseline = np.asarray(baseline, dtype=float)
    comparison = np.asarray(comparison, dtype=float)
    if baseline.shape != comparison.shape:
        raise ValueError("paired samples differ in length")
    deltas = comparison - baseline
    return PairedTestResult(baseline_name, comparison_name, int(deltas.size),
                            float(np.mean(deltas)), float(np.median(deltas)),
                            wilcoxon_signed_rank(deltas), paired_t(deltas))
