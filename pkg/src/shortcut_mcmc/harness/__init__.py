"""Config-driven experiment harness."""

from .config import CONFIG_SCHEMA, ConfigError, ExperimentConfig, load_config, parse_config
from .experiment import PresetReport, RunReport, reproduce, run_experiment
from .output import emit_trace, read_trace_csv
from .presets import DEFAULT_SEED, method_config, preset_methods, preset_names

__all__ = [
    "CONFIG_SCHEMA", "ConfigError", "ExperimentConfig", "load_config", "parse_config",
    "PresetReport", "RunReport", "reproduce", "run_experiment", "emit_trace",
    "read_trace_csv", "DEFAULT_SEED", "method_config", "preset_methods", "preset_names",
]
