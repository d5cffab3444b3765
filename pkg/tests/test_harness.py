import json
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from shortcut_mcmc import SequenceSpec, make_mixture1d, new_stream, run_schedule, run_standard
from shortcut_mcmc.harness import (ConfigError, emit_trace, load_config, method_config,
                                   parse_config, preset_methods, preset_names, read_trace_csv,
                                   reproduce, run_experiment)
from shortcut_mcmc.harness.experiment import scaled_lengths


def base_config(**extra):
    raw = {"schema_version": 1, "name": "demo", "target": {"name": "mixture1d"}, "x0": [0.0],
           "method": "shortcut", "seed": 5, "n_cycles": 40,
           "schedule": [{"w": 2.0, "L": 5, "M": 6, "l": 0, "h": 4},
                        {"w": 20.0, "L": 5, "M": 18, "l": 0, "h": 4}],
           "estimator": {"max_lag": 50}}
    raw.update(extra)
    return raw


def test_valid_config_fills_defaults():
    cfg = parse_config(base_config())
    assert cfg.estimator["states"] == "all" and cfg.estimator["variance_mode"] == "known"
    assert cfg.output["trace_mode"] == "full"


@pytest.mark.parametrize("change,field", [
    ({"colour": "red"}, "colour"),
    ({"estimator": {"max_lags": 3}}, "estimator.max_lags"),
    ({"method": "gibbs"}, "method"),
    ({"scale": 0}, "scale"),
    ({"scale": -0.5}, "scale"),
    ({"scale": 1.5}, "scale"),
    ({"schedule": [{"w": 1.0, "L": 3, "M": 2, "l": 2, "h": 1}]}, "schedule.0"),
    ({"target": {"name": "diag_gaussian"}}, "target.variances"),
])
def test_bad_configs_name_the_field(change, field):
    with pytest.raises(ConfigError) as exc:
        parse_config(base_config(**change))
    assert exc.value.field == field


def test_missing_required_keys():
    raw = base_config()
    del raw["schedule"]
    with pytest.raises(ConfigError) as exc:
        parse_config(raw)
    assert exc.value.field == "schedule"


def test_load_config_reports_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(p)


def test_scaling_rounds_to_whole_cycles():
    cfg = parse_config(base_config(scale=0.013))
    assert scaled_lengths(cfg)["n_cycles"] == 1
    cfg = method_config("funnel-standard-w0.75", scale=0.001234)
    n = scaled_lengths(cfg)["n_updates"]
    assert n % 1000 == 0 and n > 0


def test_preset_seed_policy():
    for preset in preset_names():
        cfgs = preset_methods(preset, seed=100)
        assert [c.raw["seed"] for c in cfgs] == list(range(100, 100 + len(cfgs)))
    assert len(preset_methods("mixture1d")) == 5
    assert len(preset_methods("mvgauss7")) == 7
    assert len(preset_methods("funnel")) == 6
    with pytest.raises(KeyError):
        preset_methods("nope")


def test_summary_json_is_deterministic(tmp_path):
    cfg = parse_config(base_config())
    a = run_experiment(cfg, tmp_path / "a")
    b = run_experiment(cfg, tmp_path / "b")
    ja = json.loads((tmp_path / "a" / "summary.json").read_text())
    jb = json.loads((tmp_path / "b" / "summary.json").read_text())
    ja.pop("wall_time_s"), jb.pop("wall_time_s")
    assert ja == jb
    assert set(ja["table_row"]) == {"states", "rejection_rate", "autocorrelation_time",
                                    "estimated_mean", "standard_error"}
    assert any("variance" in w for w in ja["warnings"])
    assert a.table_row == b.table_row


def test_report_counts_match_trace(tmp_path):
    raw = base_config(output={"trace_csv": "trace.csv"})
    rep = run_experiment(parse_config(raw), tmp_path, keep_trace=True)
    cols = read_trace_csv(tmp_path / "trace.csv")
    assert rep.n_evals == np.count_nonzero(cols["provenance"][1:] == "C")
    assert cols["evals_cum"][-1] == rep.n_evals
    assert len(cols["seq"]) == 1 + 40 * 120 == rep.diagnostics[0].states_used
    assert np.count_nonzero(cols["rejected"][1:]) == round(rep.diagnostics[0].rejection_rate * 4800)


def test_naive_adaptive_flags_warmup():
    raw = {"schema_version": 1, "target": {"name": "mixture1d"}, "method": "naive-adaptive",
           "w_small": 2.0, "w_large": 20.0, "n_updates": 2000, "seed": 1,
           "estimator": {"max_lag": 50}}
    rep = run_experiment(parse_config(raw))
    assert any("warm-up" in w for w in rep.warnings)


def test_max_lag_clamped_with_warning():
    rep = run_experiment(parse_config(base_config(n_cycles=1, estimator={"max_lag": 500})))
    assert any("max_lag" in w for w in rep.warnings)
    assert rep.diagnostics[0].max_lag == 121 // 4


def test_cycled_standard_matches_run_schedule():
    raw = {"schema_version": 1, "target": {"name": "mixture1d"}, "method": "standard",
           "stepsizes": [2.0, 20.0], "updates_per_stepsize": 10, "n_cycles": 30, "seed": 9,
           "estimator": {"max_lag": 20}}
    rep = run_experiment(parse_config(raw), keep_trace=True)
    tr = run_schedule(make_mixture1d(), [0.0], [SequenceSpec(2.0, 10, 1, 0, 10),
                                                 SequenceSpec(20.0, 10, 1, 0, 10)],
                      30, new_stream(9))
    assert np.array_equal(rep.trace.states, tr.states)
    assert rep.trace.counts.copied == 0


def _trace_with_copies():
    t = make_mixture1d()
    sched = [SequenceSpec(2.0, 5, 6, 0, 4), SequenceSpec(20.0, 5, 18, 0, 4)]
    return run_schedule(t, [0.0], sched, 30, new_stream(12))


def test_emit_round_trip_and_conservation(tmp_path):
    tr = _trace_with_copies()
    assert tr.counts.copied > 0
    full = read_trace_csv(emit_trace(tr, tmp_path / "full.csv"))
    dedup = read_trace_csv(emit_trace(tr, tmp_path / "dedup.csv", "deduplicated"))
    assert np.array_equal(full["states"], tr.states)  # 17 digits round-trip exactly
    assert dedup["multiplicity"].sum() == len(full["seq"])
    assert (dedup["provenance"] == "C").all()
    # exact rational arithmetic: weighted mean over unique rows equals plain mean
    plain = sum(Fraction(v) for v in full["states"][:, 0]) / len(full["seq"])
    weighted = (sum(Fraction(v) * int(m) for v, m in zip(dedup["states"][:, 0], dedup["multiplicity"]))
                / int(dedup["multiplicity"].sum()))
    assert plain == weighted


def test_emit_without_copies(tmp_path):
    tr = run_standard(make_mixture1d(), [0.0], 2.0, 300, new_stream(1))
    full = (tmp_path / "a.csv")
    dedup = (tmp_path / "b.csv")
    emit_trace(tr, full)
    emit_trace(tr, dedup, "deduplicated")
    lines_full = full.read_text().splitlines()
    lines_dedup = dedup.read_text().splitlines()
    assert lines_dedup[0] == lines_full[0] + ",multiplicity"
    assert lines_dedup[1:] == [ln + ",1" for ln in lines_full[1:]]


def test_emit_trace_header(tmp_path):
    tr = run_standard(make_mixture1d(), [0.0], 2.0, 3, new_stream(1))
    head = emit_trace(tr, tmp_path / "t.csv").read_text().splitlines()[0]
    assert head == "seq,group,step,provenance,src,rejected,w,evals_cum,c0"


def test_emit_trace_io_error_has_path(tmp_path):
    tr = run_standard(make_mixture1d(), [0.0], 2.0, 3, new_stream(1))
    (tmp_path / "blocker").write_text("")
    with pytest.raises(OSError, match="blocker"):
        emit_trace(tr, tmp_path / "blocker" / "t.csv")


def test_reproduce_small(tmp_path):
    rep = reproduce("mixture1d", scale=0.005, out_dir=tmp_path)
    names = {p.name for p in tmp_path.iterdir()}
    assert {"mixture1d_summary.json", "mixture1d_table.csv", "mixture1d_copy_fractions.csv",
            "mixture1d_walk.csv"} <= names
    header = (tmp_path / "mixture1d_table.csv").read_text().splitlines()[0].split(",")
    assert header[2:7] == ["states", "rejection_rate", "autocorrelation_time",
                           "estimated_mean", "standard_error"]
    assert len(rep.runs) == 5
    walk = (tmp_path / "mixture1d_walk.csv").read_text().splitlines()
    assert walk[0].startswith("method,seq,update") and len(walk) > 100


def test_reproduce_funnel_plot_data(tmp_path):
    reproduce("funnel", scale=0.002, out_dir=tmp_path)
    v = (tmp_path / "funnel_v_by_sequence.csv").read_text().splitlines()
    cf = (tmp_path / "funnel_copy_fraction_vs_v.csv").read_text().splitlines()
    assert v[0] == "method,sequence,v" and len(v) > 6
    assert cf[0] == "sequence,w,v_start,copy_fraction" and len(cf) > 4


def run_cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "shortcut_mcmc", *args], capture_output=True,
                          text=True, cwd=cwd)


def test_cli_list_presets():
    out = run_cli("list-presets")
    assert out.returncode == 0
    assert "mixture1d" in out.stdout and "funnel-shortcut-four-w" in out.stdout


def test_cli_run(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps(base_config()))
    out = run_cli("run", "--config", str(cfg), "--out-dir", str(tmp_path / "o"))
    assert out.returncode == 0, out.stderr
    assert (tmp_path / "o" / "summary.json").exists()
    assert "rejection_rate" in json.loads(out.stdout)


def test_cli_errors_are_json(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps(base_config(scale=0)))
    out = run_cli("run", "--config", str(cfg), "--out-dir", str(tmp_path))
    assert out.returncode != 0
    err = json.loads(out.stderr)
    assert err["error"] == "config" and err["field"] == "scale"
    out = run_cli("reproduce", "--preset", "banana")
    assert out.returncode != 0 and json.loads(out.stderr)["field"] == "preset"
    out = run_cli("run", "--config", str(tmp_path / "missing.json"))
    assert out.returncode != 0 and "error" in json.loads(out.stderr)
