"""Running configured experiments and whole presets."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..diagnostics import DiagnosticsReport, summarize, trace_stats
from ..metropolis import run_naive_adaptive, run_standard
from ..rng import new_stream
from ..shortcut import SequenceSpec, run_schedule, shortcut_sequence
from ..targets import get_target
from ..trace import Trace
from .config import ConfigError, ExperimentConfig
from .output import emit_trace, write_csv, write_json
from .presets import PAPER_COPY_FRACTIONS, PAPER_TABLES, method_labels, preset_methods

TABLE_COLUMNS = ["states", "rejection_rate", "autocorrelation_time",
                 "estimated_mean", "standard_error"]

WARMUP_NOTE = ("naive-adaptive: the first `window` updates use w_large "
               "(warm-up behaviour is not specified for this baseline)")


@dataclass
class RunReport:
    name: str
    config: dict[str, Any]
    diagnostics: list[DiagnosticsReport]
    by_stepsize: dict[float, dict[str, float]]
    n_evals: int
    n_updates: int
    wall_time: float
    warnings: list[str] = field(default_factory=list)
    trace: Trace | None = field(default=None, repr=False)

    @property
    def table_row(self) -> dict[str, float]:
        d = self.diagnostics[0]
        return {
            "states": d.states_used, "rejection_rate": d.rejection_rate,
            "autocorrelation_time": d.tau, "estimated_mean": d.mean,
            "standard_error": d.se,
        }

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "config": self.config,
            "table_row": self.table_row,
            "diagnostics": [d.as_dict() for d in self.diagnostics],
            "by_stepsize": {repr(w): v for w, v in self.by_stepsize.items()},
            "n_evals": self.n_evals,
            "n_updates": self.n_updates,
            "warnings": self.warnings,
            "wall_time_s": self.wall_time,
        }


def scaled_lengths(cfg: ExperimentConfig) -> dict[str, int]:
    """Run lengths after applying ``scale``, rounded to whole cycles/sequences."""
    scale = cfg.scale
    raw = cfg.raw
    out = {}
    if "n_cycles" in raw:
        out["n_cycles"] = max(1, round(raw["n_cycles"] * scale)) if raw["n_cycles"] else 0
    if "n_updates" in raw:
        n = raw["n_updates"] * scale
        if cfg.estimator["states"] == "final" and raw["method"] == "standard":
            seq = cfg.estimator.get("sequence_length")
            if seq is None:
                raise ConfigError("estimator.sequence_length",
                                  "required for final-state estimation of standard runs")
            out["n_updates"] = max(1, round(n / seq)) * seq
        else:
            out["n_updates"] = round(n)
    return out


def execute(cfg: ExperimentConfig) -> tuple[Trace, list[str]]:
    """Run the sampler described by ``cfg`` and return its trace."""
    raw = cfg.raw
    tgt = raw["target"]
    target = get_target(tgt["name"], tgt.get("variances"))
    x0 = raw.get("x0", [0.0] * target.dim)
    if len(x0) != target.dim:
        raise ConfigError("x0", f"expected {target.dim} coordinates, got {len(x0)}")
    lengths = scaled_lengths(cfg)
    stream = new_stream(raw["seed"])
    keep = cfg.estimator["states"]
    warnings: list[str] = []
    method = raw["method"]
    if method == "standard" and "stepsizes" not in raw:
        thin = cfg.estimator.get("sequence_length", 1) if keep == "final" else 1
        trace = run_standard(target, x0, raw["w"], lengths["n_updates"], stream, thin=thin)
    elif method == "standard":
        n = raw["updates_per_stepsize"]
        sched = [SequenceSpec(w, n, 1, 0, n) for w in raw["stepsizes"]]
        trace = run_schedule(target, x0, sched, lengths["n_cycles"], stream, keep=keep)
    elif method == "naive-adaptive":
        if keep != "all":
            raise ConfigError("estimator.states", "naive-adaptive runs support 'all' only")
        trace = run_naive_adaptive(target, x0, raw["w_small"], raw["w_large"],
                                   lengths["n_updates"], stream,
                                   window=raw.get("window", 10),
                                   threshold=raw.get("threshold", 5))
        warnings.append(WARMUP_NOTE)
    else:
        sched = [SequenceSpec(**s) for s in raw["schedule"]]
        if keep == "final" and any(sp.K != sched[0].K for sp in sched):
            warnings.append("final-state estimation over sequences of unequal length")
        trace = run_schedule(target, x0, sched, lengths["n_cycles"], stream, keep=keep)
    return trace, warnings


def _series(trace: Trace, cfg: ExperimentConfig, coord: int) -> np.ndarray:
    x = trace.states[:, coord]
    if cfg.estimator["states"] == "final":
        x = x[1:]  # row 0 is the starting point, not a sequence end
    return x[cfg.estimator["burn_in"]:]


def run_experiment(cfg: ExperimentConfig, out_dir: str | Path | None = None,
                   keep_trace: bool = False) -> RunReport:
    """Run ``cfg``; with ``out_dir`` write its summary JSON (and trace CSV if asked)."""
    t0 = time.perf_counter()
    trace, warnings = execute(cfg)
    wall = time.perf_counter() - t0
    target = get_target(cfg.raw["target"]["name"], cfg.raw["target"].get("variances"))
    est = cfg.estimator
    reports = []
    for coord in est["coordinates"]:
        if coord >= target.dim:
            raise ConfigError("estimator.coordinates", f"coordinate {coord} out of range")
        x = _series(trace, cfg, coord)
        if x.size < 2:
            raise ConfigError("scale", "run too short to estimate anything")
        lag = est["max_lag"]
        if lag >= x.size // 4:
            new = max(1, x.size // 4)
            warnings.append(f"max_lag reduced from {lag} to {new} for {x.size} states")
            lag = new
        var = target.variance[coord] if est["variance_mode"] == "known" else None
        reports.append(summarize(x, trace, lag, var))
    mode = est["variance_mode"]
    warnings.append(f"standard errors use the {mode} variance"
                    + (" of the target" if mode == "known" else " of the kept states"))
    if est["burn_in"] == 0:
        warnings.append("no burn-in discarded")
    stats = trace_stats(trace)
    report = RunReport(
        name=cfg.name, config=cfg.to_dict(), diagnostics=reports,
        by_stepsize=stats.by_stepsize, n_evals=stats.n_evals, n_updates=stats.n_updates,
        wall_time=wall, warnings=warnings, trace=trace if keep_trace else None,
    )
    if out_dir is not None:
        out_dir = Path(out_dir)
        if cfg.output["summary_json"]:
            write_json(out_dir / cfg.output["summary_json"], report.to_json())
        if cfg.output["trace_csv"]:
            emit_trace(trace, out_dir / cfg.output["trace_csv"], cfg.output["trace_mode"])
    return report


@dataclass
class PresetReport:
    preset: str
    scale: float
    seed: int
    runs: list[RunReport]

    def run(self, name: str) -> RunReport:
        for r in self.runs:
            if r.name == name:
                return r
        raise KeyError(name)

    def table(self) -> list[dict[str, Any]]:
        labels = method_labels(self.preset)
        paper = PAPER_TABLES.get(self.preset, {})
        rows = []
        for r in self.runs:
            row = {"method": labels.get(r.name, r.name), "name": r.name, **r.table_row,
                   "n_evals": r.n_evals}
            if r.name in paper:
                row.update({f"paper_{c}": v for c, v in zip(TABLE_COLUMNS, paper[r.name])})
            rows.append(row)
        return rows

    def copy_fraction_table(self) -> list[dict[str, Any]]:
        rows = []
        for r in self.runs:
            if r.config["method"] != "shortcut":
                continue
            for w, st in r.by_stepsize.items():
                rows.append({"name": r.name, "w": w, "K": _seq_len(r, w),
                             "copy_fraction": st["copy_fraction"],
                             "rejection_rate": st["rejection_rate"]})
        return rows

    def to_json(self) -> dict[str, Any]:
        return {
            "preset": self.preset, "scale": self.scale, "base_seed": self.seed,
            "seed_policy": "method seed = base seed + method index",
            "columns": TABLE_COLUMNS,
            "table": self.table(),
            "copy_fractions": self.copy_fraction_table(),
            "paper_copy_fractions": {k: list(v) for k, v in PAPER_COPY_FRACTIONS.items()
                                     if k.startswith(self.preset)},
            "runs": [r.to_json() for r in self.runs],
        }


def _seq_len(r: RunReport, w: float) -> int:
    for s in r.config.get("schedule", []):
        if s["w"] == w:
            return s["L"] * s["M"]
    return 0


def _plot_data(report: PresetReport, out_dir: Path) -> None:
    p = report.preset
    if p == "mixture1d":
        rows = []
        for r in report.runs:
            if r.config["method"] != "shortcut":
                continue
            cfg = r.config
            target = get_target("mixture1d")
            stream = new_stream(cfg["seed"])
            x = np.asarray(cfg["x0"], dtype=float)
            lp = target.logpdf(x)
            sched = [SequenceSpec(**s) for s in cfg["schedule"]]
            offset = 0
            for seq in range(4):
                st = shortcut_sequence(target, x, sched[seq % len(sched)], stream, logpi_x0=lp)
                L = st.spec.L
                for k in range(1, len(st)):
                    end = st.group_end_states[(k - 1) // L + 1, 0] if k % L == 0 else ""
                    rows.append([r.name, seq, offset + k, int(st.group[k]), st.spec.w,
                                 float(st.states[k, 0]),
                                 "C" if st.source[k] < 0 else "P", end])
                offset += len(st) - 1
                x, lp = st.final_state.copy(), st.final_log_density
        write_csv(out_dir / "mixture1d_walk.csv",
                  ["method", "seq", "update", "group", "w", "x", "provenance", "group_end_x"], rows)
    elif p == "funnel":
        rows = []
        for r in report.runs:
            v = r.trace.states[1:, 0]
            rows.extend([r.name, k, float(val)] for k, val in enumerate(v))
        write_csv(out_dir / "funnel_v_by_sequence.csv", ["method", "sequence", "v"], rows)
        for r in report.runs:
            if r.config["method"] == "shortcut":
                s = r.trace.sequences
                write_csv(out_dir / "funnel_copy_fraction_vs_v.csv",
                          ["sequence", "w", "v_start", "copy_fraction"],
                          ([k, float(s.stepsize[k]), float(s.start_states[k, 0]),
                            float(s.copy_fraction[k])] for k in range(len(s))))


def reproduce(preset: str, scale: float = 0.1, seed: int | None = None,
              out_dir: str | Path | None = None) -> PresetReport:
    """Run every method of ``preset`` and, with ``out_dir``, write tables and plot data."""
    from .presets import DEFAULT_SEED
    seed = DEFAULT_SEED if seed is None else seed
    cfgs = preset_methods(preset, seed=seed, scale=scale)
    runs = [run_experiment(c, keep_trace=True) for c in cfgs]
    report = PresetReport(preset, scale, seed, runs)
    if out_dir is not None:
        out_dir = Path(out_dir)
        write_json(out_dir / f"{preset}_summary.json", report.to_json())
        table = report.table()
        cols = ["method", "name"] + TABLE_COLUMNS + ["n_evals"]
        cols += [f"paper_{c}" for c in TABLE_COLUMNS if f"paper_{c}" in table[0]]
        write_csv(out_dir / f"{preset}_table.csv", cols,
                  ([row.get(c, "") for c in cols] for row in table))
        cf = report.copy_fraction_table()
        if cf:
            cols = ["name", "w", "K", "copy_fraction", "rejection_rate"]
            write_csv(out_dir / f"{preset}_copy_fractions.csv", cols,
                      ([row[c] for c in cols] for row in cf))
        _plot_data(report, out_dir)
    for r in runs:
        r.trace = None if preset != "funnel" else r.trace
    return report
