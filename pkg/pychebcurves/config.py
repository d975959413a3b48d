"""
Run configuration shared by the library and the command line.

The active `RunConfig` is process-global; library functions read their caps
from `current()` unless a value is passed explicitly. Worker processes spawned
for a scan receive the configuration as an argument and install it with `use`.
"""

import os
from contextlib import contextmanager
from dataclasses import dataclass, asdict, fields
from logging import getLogger
from pathlib import Path
from typing import Any, Dict, Iterator, Optional, Union

from pychebcurves import routines

logger = getLogger("pychebcurves.config")

CONFIG_ENV = "CHEBCURVES_CONFIG"
OUTPUT_FORMATS = ("table", "json", "csv")
# defining polynomials are the lexicographically first monic irreducibles
FIELD_CONVENTION = "lex-first monic irreducible, coefficients low-to-high"


@dataclass
class RunConfig:
    """
    Caps and runtime options for a computation.

    Attributes
    ----------
    enumeration_cap : int
        Largest field size whose elements may be enumerated.
    extension_cap : int
        Largest extension degree for field construction and splitting-degree
        searches.
    lift_extension_cap : int
        Largest extension degree tried over the splitting field when a d-th
        root is needed to lift a Moebius map.
    root_search_cap : int
        Fields up to this size find roots by exhaustive evaluation; larger
        fields use equal-degree splitting.
    jobs : int
        Number of worker processes for grid scans; -1 uses every core.
    output_format : str
        One of "table", "json", "csv".
    seed : int
        Seed for every randomized step.
    log_level : str
        Level name for the package logger.
    log_file : str, optional
        Additional log file written by the command line.
    """

    enumeration_cap: int = 2**22
    extension_cap: int = 24
    lift_extension_cap: int = 12
    root_search_cap: int = 2**16
    jobs: int = 1
    output_format: str = "table"
    seed: int = 0
    log_level: str = "WARNING"
    log_file: Optional[str] = None

    def __post_init__(self):
        self.validate()

    def validate(self):
        for name in (
            "enumeration_cap",
            "extension_cap",
            "lift_extension_cap",
            "root_search_cap",
        ):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}.")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(
                f"output_format must be one of {OUTPUT_FORMATS}, got {self.output_format!r}."
            )
        if self.jobs == 0 or self.jobs < -1:
            raise ValueError(f"jobs must be positive or -1, got {self.jobs}.")

    @classmethod
    def _from_mapping(cls, data: Dict[str, Any], source) -> "RunConfig":
        unknown = set(data) - {f.name for f in fields(cls)}
        if unknown:
            raise ValueError(f"Unknown configuration keys in {source}: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_yaml(cls, filepath: Union[str, Path]) -> "RunConfig":
        """
        Read a configuration from a YAML file. Keys that are not fields of
        `RunConfig` raise a `ValueError`.

        Parameters
        ----------
        filepath: str
            Filepath to the YAML settings file

        Returns
        -------
        RunConfig object
        """
        data = routines.read_yaml(filepath)
        logger.info(f"Read configuration from {filepath}.")
        return cls._from_mapping(data, filepath)

    @classmethod
    def from_report(cls, filepath: Union[str, Path]) -> "RunConfig":
        """
        The configuration a JSON report was produced with, so that the run
        can be repeated. Logging options are not part of a report and take
        their defaults.
        """
        report = routines.read_json(filepath)
        if not isinstance(report, dict) or not isinstance(report.get("config"), dict):
            raise ValueError(f"{filepath} is not a report; it has no config section.")
        data = dict(report["config"])
        convention = data.pop("field_convention", FIELD_CONVENTION)
        if convention != FIELD_CONVENTION:
            raise ValueError(f"{filepath} was written under another field convention: {convention!r}")
        logger.info(f"Read configuration from the report {filepath}.")
        return cls._from_mapping(data, filepath)

    @classmethod
    def load(cls, filepath: Union[str, Path]) -> "RunConfig":
        """A YAML configuration, or the configuration of a `.json` report."""
        if Path(filepath).suffix.lower() == ".json":
            return cls.from_report(filepath)
        return cls.from_yaml(filepath)

    @classmethod
    def from_env(cls) -> "RunConfig":
        """Configuration named by the CHEBCURVES_CONFIG variable, or defaults."""
        path = os.environ.get(CONFIG_ENV)
        if path:
            return cls.load(path)
        return cls()

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_yaml(self, filepath: Union[str, Path]):
        routines.dump_yaml(filepath, self.to_dict())

    def snapshot(self) -> Dict[str, Any]:
        """The reproducibility record embedded in every report."""
        data = self.to_dict()
        # logging destinations do not influence results
        data.pop("log_file")
        data.pop("log_level")
        data["field_convention"] = FIELD_CONVENTION
        return data

    def replace(self, **overrides) -> "RunConfig":
        data = self.to_dict()
        data.update({key: value for key, value in overrides.items() if value is not None})
        return RunConfig(**data)


_active = RunConfig()


def current() -> RunConfig:
    return _active


def set_current(config: RunConfig):
    global _active
    config.validate()
    _active = config


@contextmanager
def use(config: RunConfig) -> Iterator[RunConfig]:
    """Temporarily install `config` as the active configuration."""
    previous = current()
    set_current(config)
    try:
        yield config
    finally:
        set_current(previous)
