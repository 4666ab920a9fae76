"""Contains the parameters of a random survival forest."""
from dataclasses import dataclass, field, asdict
from numbers import Integral, Real
from typing import Optional, Union

from fedsurv.forest.TreeParams import TreeParams


@dataclass(frozen=True)
class ForestParams:
    """
    Ensemble parameters of a random survival forest with embedded tree
    parameters. Defaults match the local forest used for every experiment.
    """
    n_estimators: int = 100
    bootstrap: bool = True
    max_samples: Union[int, float, None] = None
    oob_score: bool = False
    n_jobs: Optional[int] = None
    random_state: Optional[int] = None
    low_memory: bool = False
    tree: TreeParams = field(default_factory=TreeParams)

    def __post_init__(self):
        if self.n_estimators < 1:
            raise ValueError("n_estimators must be at least 1")
        if self.oob_score and not self.bootstrap:
            raise ValueError("oob_score requires bootstrap")
        if self.max_samples is not None:
            self.resolve_max_samples(1)

    def resolve_max_samples(self, n_samples):
        """
        Size of every bootstrap resample.
        :param n_samples: Number of training samples.
        :return: Sample count; fractions round to max(1, floor(f * n)).
        """
        value = self.max_samples
        if value is None:
            return n_samples
        if isinstance(value, bool):
            raise ValueError("max_samples must be an int or a fraction")
        if isinstance(value, Integral):
            if value < 1:
                raise ValueError("max_samples must be positive")
            return int(value)
        if isinstance(value, Real):
            if not 0 < value <= 1:
                raise ValueError("max_samples fraction must lie in (0, 1]")
            return max(1, int(value * n_samples))
        raise ValueError("max_samples must be an int or a fraction")

    def replace(self, **changes):
        """
        Copy with changed fields; tree fields may be passed directly.
        :return: New ForestParams.
        """
        tree_fields = set(TreeParams.__dataclass_fields__)
        tree_changes = dict((k, v) for k, v in changes.items() if k in tree_fields)
        forest_changes = dict((k, v) for k, v in changes.items() if k not in tree_fields)
        values = asdict(self)
        values.pop("tree")
        values.update(forest_changes)
        tree = forest_changes.get("tree", self.tree)
        if tree_changes:
            tree_values = tree.to_dict()
            tree_values.update(tree_changes)
            tree = TreeParams(**tree_values)
        values["tree"] = tree
        return ForestParams(**values)

    def to_dict(self):
        values = asdict(self)
        values["tree"] = self.tree.to_dict()
        return values

    @classmethod
    def from_dict(cls, values):
        """
        Builds parameters from a flat or nested mapping, e.g. a TOML table.
        Tree keys may sit at top level or under "tree".
        :param values: Mapping of parameter names to values.
        :return: ForestParams.
        """
        values = dict(values)
        tree_values = dict(values.pop("tree", {}) or {})
        known_tree = set(TreeParams.__dataclass_fields__)
        known_forest = set(cls.__dataclass_fields__) - {"tree"}
        for key in list(values):
            if key in known_tree:
                tree_values[key] = values.pop(key)
            elif key not in known_forest:
                raise ValueError("unknown forest parameter '{0}'".format(key))
        return cls(tree=TreeParams(**tree_values), **values)
