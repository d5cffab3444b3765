"""Run definitions for the three demonstration targets.

Each preset is a list of method configs in table order.  Seeds are
``base_seed + method index`` so that methods never share a stream.
"""

from __future__ import annotations

from .config import SCHEMA_VERSION, ExperimentConfig, parse_config

DEFAULT_SEED = 20070115


def _sc(w, L, M, l, h):
    return {"w": w, "L": L, "M": M, "l": l, "h": h}


def _mixture1d() -> list[dict]:
    common = {"target": {"name": "mixture1d"}, "x0": [0.0],
              "estimator": {"states": "all", "max_lag": 500, "variance_mode": "known"}}
    return [
        {**common, "name": "mixture1d-standard-w2", "label": "Standard, w=2",
         "method": "standard", "w": 2.0, "n_updates": 1_200_000},
        {**common, "name": "mixture1d-standard-w20", "label": "Standard, w=20",
         "method": "standard", "w": 20.0, "n_updates": 1_200_000},
        {**common, "name": "mixture1d-naive-adaptive", "label": "Naive adaptive",
         "method": "naive-adaptive", "w_small": 2.0, "w_large": 20.0,
         "window": 10, "threshold": 5, "n_updates": 1_200_000},
        {**common, "name": "mixture1d-shortcut-l0", "label": "Short-cut, l=0",
         "method": "shortcut", "n_cycles": 16500,
         "schedule": [_sc(2.0, 5, 6, 0, 4), _sc(20.0, 5, 18, 0, 4)]},
        {**common, "name": "mixture1d-shortcut-l1", "label": "Short-cut, l=1",
         "method": "shortcut", "n_cycles": 18000,
         "schedule": [_sc(2.0, 5, 12, 1, 4), _sc(20.0, 5, 12, 1, 4)]},
    ]


def _mvgauss7() -> list[dict]:
    common = {"target": {"name": "mvgauss7"}, "x0": [0.0] * 7}

    def est(lag):
        return {"states": "all", "max_lag": lag, "variance_mode": "known"}

    L = 10
    return [
        {**common, "name": "mvgauss7-standard-w0.02", "label": "Standard, w=0.02",
         "method": "standard", "w": 0.02, "n_updates": 900_000, "estimator": est(12000)},
        {**common, "name": "mvgauss7-standard-w0.1", "label": "Standard, w=0.1",
         "method": "standard", "w": 0.1, "n_updates": 900_000, "estimator": est(8000)},
        {**common, "name": "mvgauss7-standard-w0.5", "label": "Standard, w=0.5",
         "method": "standard", "w": 0.5, "n_updates": 900_000, "estimator": est(12000)},
        {**common, "name": "mvgauss7-standard-three-w", "label": "Standard, three w's",
         "method": "standard", "stepsizes": [0.02, 0.1, 0.5], "updates_per_stepsize": 200,
         "n_cycles": 1500, "estimator": est(8000)},
        {**common, "name": "mvgauss7-shortcut-l0", "label": "Short-cut, l=0",
         "method": "shortcut", "n_cycles": 4080, "estimator": est(8000),
         "schedule": [_sc(0.02, L, 6, 0, L), _sc(0.1, L, 15, 0, L - 1),
                      _sc(0.5, L, 39, 0, L - 1)]},
        {**common, "name": "mvgauss7-shortcut-l1", "label": "Short-cut, l=1",
         "method": "shortcut", "n_cycles": 3000, "estimator": est(8000),
         "schedule": [_sc(0.02, L, 20, 1, L), _sc(0.1, L, 20, 1, L - 1),
                      _sc(0.5, L, 20, 0, L - 1)]},
        {**common, "name": "mvgauss7-shortcut-l2", "label": "Short-cut, l=2",
         "method": "shortcut", "n_cycles": 3720, "estimator": est(8000),
         "schedule": [_sc(0.02, L, 20, 2, L), _sc(0.1, L, 20, 2, L - 1),
                      _sc(0.5, L, 20, 0, L - 1)]},
    ]


def _funnel() -> list[dict]:
    common = {"target": {"name": "funnel"}, "x0": [0.0] + [1.0] * 9}

    def est(lag):
        return {"states": "final", "sequence_length": 1000, "max_lag": lag,
                "variance_mode": "known"}

    four = [0.03, 0.15, 0.75, 3.75]
    runs = [
        {**common, "name": f"funnel-standard-w{w}", "label": f"Standard, w={w}",
         "method": "standard", "w": w, "n_updates": 20_000_000,
         "estimator": est(100 if w == 0.15 else 1000)}
        for w in four
    ]
    runs.append(
        {**common, "name": "funnel-standard-four-w", "label": "Standard, four w's",
         "method": "standard", "stepsizes": four, "updates_per_stepsize": 1000,
         "n_cycles": 5000, "estimator": est(50)})
    # Smallest w never reverses on all-rejection groups, largest w never on
    # groups with too few rejections.
    runs.append(
        {**common, "name": "funnel-shortcut-four-w", "label": "Short-cut, four w's",
         "method": "shortcut", "n_cycles": 10500, "estimator": est(50),
         "schedule": [_sc(0.03, 40, 25, 3, 40), _sc(0.15, 40, 25, 3, 39),
                      _sc(0.75, 40, 25, 3, 39), _sc(3.75, 40, 25, 0, 39)]})
    return runs


_BUILDERS = {"mixture1d": _mixture1d, "mvgauss7": _mvgauss7, "funnel": _funnel}

# Reported values from the published tables, for side-by-side output.
PAPER_TABLES = {
    "mixture1d": {
        "mixture1d-standard-w2": (1.20e6, 0.274, 153.6, 5.020, 0.098),
        "mixture1d-standard-w20": (1.20e6, 0.699, 10.2, 4.989, 0.025),
        "mixture1d-naive-adaptive": (1.20e6, 0.531, 14.9, 6.002, 0.031),
        "mixture1d-shortcut-l0": (1.98e6, 0.590, 53.0, 4.923, 0.045),
        "mixture1d-shortcut-l1": (2.16e6, 0.487, 105.1, 5.033, 0.061),
    },
    "mvgauss7": {
        "mvgauss7-standard-w0.02": (0.900e6, 0.169, 9677, 0.059, 0.104),
        "mvgauss7-standard-w0.1": (0.900e6, 0.687, 1271, 0.015, 0.038),
        "mvgauss7-standard-w0.5": (0.900e6, 0.998, 8311, -0.102, 0.096),
        "mvgauss7-standard-three-w": (0.900e6, 0.618, 3998, -0.023, 0.067),
        "mvgauss7-shortcut-l0": (2.448e6, 0.837, 4719, 0.044, 0.044),
        "mvgauss7-shortcut-l1": (1.800e6, 0.618, 4427, -0.061, 0.050),
        "mvgauss7-shortcut-l2": (2.232e6, 0.618, 4729, 0.080, 0.046),
    },
    "funnel": {
        "funnel-standard-w0.03": (20e3, 0.097, 750, 0.143, 0.581),
        "funnel-standard-w0.15": (20e3, 0.324, 39, 0.063, 0.133),
        "funnel-standard-w0.75": (20e3, 0.736, 9, 0.501, 0.065),
        "funnel-standard-w3.75": (20e3, 0.968, 438, 1.683, 0.444),
        "funnel-standard-four-w": (20e3, 0.540, 18, 0.061, 0.090),
        "funnel-shortcut-four-w": (42e3, 0.542, 25, -0.022, 0.073),
    },
}

PAPER_COPY_FRACTIONS = {
    "mvgauss7-shortcut-l0": (0.00, 0.09, 0.95),
    "mvgauss7-shortcut-l1": (0.49, 0.13, 0.90),
    "mvgauss7-shortcut-l2": (0.79, 0.12, 0.90),
}


def preset_names() -> list[str]:
    return list(_BUILDERS)


def preset_methods(preset: str, seed: int = DEFAULT_SEED, scale: float = 1.0) -> list[ExperimentConfig]:
    """Configs for every method of ``preset``, in table order."""
    try:
        raw_list = _BUILDERS[preset]()
    except KeyError:
        raise KeyError(f"unknown preset {preset!r}; known presets: {preset_names()}") from None
    out = []
    for k, raw in enumerate(raw_list):
        raw = dict(raw)
        raw.pop("label")
        raw.update(schema_version=SCHEMA_VERSION, seed=seed + k, scale=scale)
        out.append(parse_config(raw))
    return out


def method_labels(preset: str) -> dict[str, str]:
    return {raw["name"]: raw["label"] for raw in _BUILDERS[preset]()}


def method_config(name: str, seed: int = DEFAULT_SEED, scale: float = 1.0) -> ExperimentConfig:
    """Config of a single named method, e.g. ``"funnel-standard-w0.75"``."""
    for preset in _BUILDERS:
        for cfg in preset_methods(preset, seed, scale):
            if cfg.name == name:
                return cfg
    raise KeyError(f"unknown method preset {name!r}")


def all_method_names() -> list[str]:
    return [n for p in _BUILDERS for n in method_labels(p)]
