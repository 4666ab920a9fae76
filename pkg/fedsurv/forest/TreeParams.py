"""Contains the growth parameters of a single survival tree."""
import math
from dataclasses import dataclass, asdict
from numbers import Integral, Real
from typing import Optional, Union


@dataclass(frozen=True)
class TreeParams:
    """
    Stopping and feature sampling rules of a survival tree.
    max_features is "sqrt", "log2", "all", an absolute count or a fraction.
    """
    max_depth: Optional[int] = None
    min_samples_split: int = 6
    min_samples_leaf: int = 3
    max_features: Union[str, int, float, None] = "sqrt"

    def __post_init__(self):
        if self.max_depth is not None and (_is_bool(self.max_depth) or self.max_depth < 1):
            raise ValueError("max_depth must be a positive integer or None")
        if self.min_samples_split < 2:
            raise ValueError("min_samples_split must be at least 2")
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be at least 1")
        self.resolve_max_features(1)

    def resolve_max_features(self, n_features):
        """
        Number of candidate features drawn at every node.
        :param n_features: Number of usable features.
        :return: Count in [1, n_features].
        """
        rule = self.max_features
        if rule is None or rule == "all":
            count = n_features
        elif rule == "sqrt":
            count = int(math.sqrt(n_features))
        elif rule == "log2":
            count = int(math.log2(n_features)) if n_features > 0 else 0
        elif isinstance(rule, Integral) and not _is_bool(rule):
            if rule < 1:
                raise ValueError("max_features count must be positive")
            count = rule
        elif isinstance(rule, Real) and not _is_bool(rule):
            if not 0 < rule <= 1:
                raise ValueError("max_features fraction must lie in (0, 1]")
            count = int(rule * n_features)
        else:
            raise ValueError("unknown max_features rule {0!r}".format(rule))
        return max(1, min(count, n_features))

    def to_dict(self):
        return asdict(self)


def _is_bool(value):
    return isinstance(value, bool)
