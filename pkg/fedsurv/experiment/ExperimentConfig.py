"""Contains the configuration of a simulated federation experiment."""
import sys
from dataclasses import dataclass, field, fields, replace
from typing import Optional

from fedsurv.federation.LocalModel import UPDATE_METHODS, UPDATE_WEIGHTINGS
from fedsurv.forest.ForestParams import ForestParams

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Settings of the withholding simulation. The defaults simulate ten
    clients, each missing 35% of the pre-encoding covariates, over five
    site splits of five folds.
    """
    n_clients: int = 10
    withhold_fraction: float = 0.35
    n_site_splits: int = 5
    n_folds: int = 5
    forest: ForestParams = field(default_factory=ForestParams)
    update_method: str = "constant"
    update_weighting: str = "equal"
    seed: Optional[int] = 0
    mccv: bool = False
    mccv_rounds: int = 50
    mccv_test_fraction: float = 0.3
    time_column: str = "time"
    event_column: str = "event"
    categorical_columns: Optional[tuple] = None

    def __post_init__(self):
        if self.n_clients < 1:
            raise ValueError("n_clients must be at least 1")
        if not 0 <= self.withhold_fraction < 1:
            raise ValueError("withhold_fraction must lie in [0, 1)")
        if self.n_site_splits < 1:
            raise ValueError("n_site_splits must be at least 1")
        if self.n_folds < 2:
            raise ValueError("n_folds must be at least 2")
        if self.update_method not in UPDATE_METHODS:
            raise ValueError("unknown update_method '{0}'".format(self.update_method))
        if self.update_weighting not in UPDATE_WEIGHTINGS:
            raise ValueError("unknown update_weighting '{0}'".format(self.update_weighting))
        if self.mccv_rounds < 1:
            raise ValueError("mccv_rounds must be at least 1")
        if not 0 < self.mccv_test_fraction < 1:
            raise ValueError("mccv_test_fraction must lie in (0, 1)")
        if self.categorical_columns is not None:
            object.__setattr__(self, "categorical_columns", tuple(self.categorical_columns))

    def replace(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        values = dict((item.name, getattr(self, item.name)) for item in fields(self))
        values["forest"] = self.forest.to_dict()
        if self.categorical_columns is not None:
            values["categorical_columns"] = list(self.categorical_columns)
        return values

    @classmethod
    def from_dict(cls, values):
        """
        Builds a configuration from a mapping with the field names as keys;
        "forest" holds ForestParams keys.
        :param values: Mapping, e.g. a parsed TOML document.
        :return: ExperimentConfig.
        """
        values = dict(values)
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(values) - known)
        if unknown:
            raise ValueError("unknown configuration key(s): {0}".format(", ".join(unknown)))
        if "forest" in values:
            values["forest"] = ForestParams.from_dict(values["forest"])
        return cls(**values)

    @classmethod
    def from_toml(cls, path):
        """
        Reads a TOML configuration file.
        :param path: Path of the file.
        :return: ExperimentConfig.
        """
        with open(path, "rb") as config_file:
            return cls.from_dict(tomllib.load(config_file))
