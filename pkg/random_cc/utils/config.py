import logging
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, Optional

import yaml

from random_cc.errors import InvalidInputError

logger = logging.getLogger(__name__)

# Default values, can be overridden by a config file or CLI arguments


@dataclass
class SamplingSettings:
    trees: int = 1000
    approximation: str = "fast"  # fast | estimated | exact
    threshold: int = 4  # minimum occurrences o_l for a length to be eligible
    cells_per_node: float = 10.0  # nu = cells_per_node * n for bench runs


@dataclass
class OracleSettings:
    max_cycle_space_dimension: int = 40  # refuse exact enumeration when m - n + 1 exceeds this
    max_visited_path_nodes: int = 20_000_000
    tree_enumeration_budget: int = 100_000
    monte_carlo_trials: int = 100_000
    rejection_max_attempts: int = 1_000_000


@dataclass
class PerformanceSettings:
    """Thread pool sizing; never changes output bytes"""
    workers: int = 1


@dataclass
class OutputSettings:
    directory: str = "."  # base for relative --out paths
    manifest_suffix: str = ".manifest.json"


@dataclass
class MonitoringSettings:
    log_level: str = "INFO"
    structured_logs: bool = False
    log_file: Optional[str] = None


@dataclass
class Config:
    sampling: SamplingSettings = field(default_factory=SamplingSettings)
    oracle: OracleSettings = field(default_factory=OracleSettings)
    performance: PerformanceSettings = field(default_factory=PerformanceSettings)
    output: OutputSettings = field(default_factory=OutputSettings)
    monitoring: MonitoringSettings = field(default_factory=MonitoringSettings)

    def to_dict(self) -> Dict[str, Any]:  # For manifests
        return asdict(self)

    @staticmethod
    def default() -> "Config":
        return Config()

    @staticmethod
    def from_dict(config_dict: Dict[str, Any]) -> "Config":
        """
        Build a Config from nested mappings; missing keys keep their defaults.

        Raises:
            InvalidInputError: unknown section or key, or a value of the wrong type
        """
        if not isinstance(config_dict, dict):
            raise InvalidInputError(f"configuration must be a mapping, got {type(config_dict).__name__}")
        unknown = sorted(set(config_dict) - set(_SECTIONS))
        if unknown:
            raise InvalidInputError(f"unknown configuration sections: {unknown}")
        return Config(
            **{
                name: _build_section(name, section, {} if config_dict.get(name) is None else config_dict[name])
                for name, section in _SECTIONS.items()
            }
        )

    @staticmethod
    def load(config_path: str) -> "Config":
        """
        Load a YAML configuration file.

        An unreadable or unparsable file falls back to the defaults with a warning.

        Raises:
            InvalidInputError: the file parses but names unknown keys or mistyped values
        """
        try:
            with open(config_path, "r") as f:
                config_dict = yaml.safe_load(f) or {}
        except FileNotFoundError:
            logger.warning(
                f"Config file {config_path} not found. Using default config."
            )
            return Config.default()
        except (OSError, yaml.YAMLError) as e:
            logger.warning(
                f"Error loading config file {config_path}: {e}. Using default config."
            )
            return Config.default()
        try:
            return Config.from_dict(config_dict)
        except InvalidInputError as e:
            raise InvalidInputError(f"{config_path}: {e}") from e


_SECTIONS = {
    "sampling": SamplingSettings,
    "oracle": OracleSettings,
    "performance": PerformanceSettings,
    "output": OutputSettings,
    "monitoring": MonitoringSettings,
}


def _build_section(name: str, section: type, values: Any):
    if not isinstance(values, dict):
        raise InvalidInputError(f"section {name!r} must be a mapping")
    defaults = section()
    known = {f.name for f in fields(section)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise InvalidInputError(f"unknown keys in {name!r}: {unknown}")
    for key, value in values.items():
        default = getattr(defaults, key)
        if default is None:
            valid = value is None or isinstance(value, str)
        elif isinstance(default, bool):
            valid = isinstance(value, bool)
        elif isinstance(default, float):
            valid = isinstance(value, (int, float)) and not isinstance(value, bool)
        else:
            valid = isinstance(value, type(default)) and not isinstance(value, bool)
        if not valid:
            raise InvalidInputError(f"{name}.{key} has the wrong type: {value!r}")
    return section(**values)
