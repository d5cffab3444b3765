"""Experiment configuration: a versioned JSON document, validated strictly."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import jsonschema

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """A configuration problem; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


_spec_schema = {
    "type": "object",
    "additionalProperties": False,
    "required": ["w", "L", "M"],
    "properties": {
        "w": {"type": "number", "exclusiveMinimum": 0},
        "L": {"type": "integer", "minimum": 1},
        "M": {"type": "integer", "minimum": 1},
        "l": {"type": "integer", "minimum": 0},
        "h": {"type": "integer", "minimum": 0},
    },
}

CONFIG_SCHEMA: dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version", "target", "method", "seed"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "target": {
            "type": "object",
            "additionalProperties": False,
            "required": ["name"],
            "properties": {
                "name": {"enum": ["mixture1d", "mvgauss7", "funnel", "diag_gaussian"]},
                "variances": {"type": "array", "minItems": 1,
                              "items": {"type": "number", "exclusiveMinimum": 0}},
            },
        },
        "x0": {"type": "array", "items": {"type": "number"}},
        "method": {"enum": ["standard", "naive-adaptive", "shortcut"]},
        "w": {"type": "number", "exclusiveMinimum": 0},
        "n_updates": {"type": "integer", "minimum": 0},
        "stepsizes": {"type": "array", "minItems": 1,
                      "items": {"type": "number", "exclusiveMinimum": 0}},
        "updates_per_stepsize": {"type": "integer", "minimum": 1},
        "w_small": {"type": "number", "exclusiveMinimum": 0},
        "w_large": {"type": "number", "exclusiveMinimum": 0},
        "window": {"type": "integer", "minimum": 1},
        "threshold": {"type": "integer", "minimum": 0},
        "schedule": {"type": "array", "minItems": 1, "items": _spec_schema},
        "n_cycles": {"type": "integer", "minimum": 0},
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "scale": {"type": "number"},
        "estimator": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "states": {"enum": ["all", "final"]},
                "sequence_length": {"type": "integer", "minimum": 1},
                "max_lag": {"type": "integer", "minimum": 1},
                "variance_mode": {"enum": ["known", "sample"]},
                "coordinates": {"type": "array", "minItems": 1,
                                "items": {"type": "integer", "minimum": 0}},
                "burn_in": {"type": "integer", "minimum": 0},
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "summary_json": {"type": ["string", "null"]},
                "trace_csv": {"type": ["string", "null"]},
                "trace_mode": {"enum": ["full", "deduplicated"]},
            },
        },
    },
}

_ESTIMATOR_DEFAULTS = {
    "states": "all", "max_lag": 500, "variance_mode": "known",
    "coordinates": [0], "burn_in": 0,
}
_OUTPUT_DEFAULTS = {"summary_json": "summary.json", "trace_csv": None, "trace_mode": "full"}


@dataclass
class ExperimentConfig:
    """A validated run description (see ``CONFIG_SCHEMA``)."""

    raw: dict[str, Any]
    estimator: dict[str, Any] = field(init=False)
    output: dict[str, Any] = field(init=False)

    def __post_init__(self):
        self.estimator = {**_ESTIMATOR_DEFAULTS, **self.raw.get("estimator", {})}
        self.output = {**_OUTPUT_DEFAULTS, **self.raw.get("output", {})}

    def get(self, key, default=None):
        return self.raw.get(key, default)

    @property
    def name(self) -> str:
        return self.raw.get("name", self.raw["method"])

    @property
    def scale(self) -> float:
        return float(self.raw.get("scale", 1.0))

    def with_overrides(self, **changes) -> "ExperimentConfig":
        raw = copy.deepcopy(self.raw)
        raw.update(changes)
        return parse_config(raw)

    def to_dict(self) -> dict[str, Any]:
        d = copy.deepcopy(self.raw)
        d["estimator"] = dict(self.estimator)
        d["output"] = dict(self.output)
        return d


def _require(raw: dict, keys: list[str], why: str) -> None:
    for k in keys:
        if k not in raw:
            raise ConfigError(k, f"required {why}")


def parse_config(raw: dict[str, Any]) -> ExperimentConfig:
    """Validate a config mapping; raises :class:`ConfigError` naming the field."""
    try:
        jsonschema.validate(raw, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = ".".join(str(p) for p in exc.absolute_path) or "<root>"
        if exc.validator == "additionalProperties":
            extra = sorted(set(exc.instance) - set(exc.schema.get("properties", {})))
            where = f"{path}." if path != "<root>" else ""
            raise ConfigError(where + (extra[0] if extra else "?"), "unknown key") from None
        raise ConfigError(path, exc.message) from None
    scale = raw.get("scale", 1.0)
    if not 0 < scale <= 1:
        raise ConfigError("scale", f"must be in (0, 1], got {scale}")
    method = raw["method"]
    if method == "standard":
        if "stepsizes" in raw:
            _require(raw, ["updates_per_stepsize", "n_cycles"], "for cycled standard runs")
        else:
            _require(raw, ["w", "n_updates"], "for standard runs")
    elif method == "naive-adaptive":
        _require(raw, ["w_small", "w_large", "n_updates"], "for naive-adaptive runs")
    else:
        _require(raw, ["schedule", "n_cycles"], "for shortcut runs")
        for k, s in enumerate(raw["schedule"]):
            h = s.get("h", s["L"] - 1)
            if not 0 <= s.get("l", 0) <= h <= s["L"]:
                raise ConfigError(f"schedule.{k}", "need 0 <= l <= h <= L")
    if raw["target"]["name"] == "diag_gaussian" and "variances" not in raw["target"]:
        raise ConfigError("target.variances", "required for diag_gaussian")
    return ExperimentConfig(copy.deepcopy(raw))


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"{path} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    return parse_config(raw)
