import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from shortcut_mcmc import SequenceSpec, make_mixture1d, new_stream, run_schedule, run_standard
from shortcut_mcmc.diagnostics import (act_estimate, autocorrelations, block_averages,
                                       ess_and_se, summarize, trace_stats)


def brute_acf(x, max_lag):
    x = np.asarray(x, dtype=float)
    n = len(x)
    d = x - x.mean()
    c0 = sum(v * v for v in d) / n
    return np.array([sum(d[t] * d[t + k] for t in range(n - k)) / n / c0
                     for k in range(1, max_lag + 1)])


def ar1(phi, n, seed):
    r = np.random.default_rng(seed)
    eps = r.normal(size=n)
    x = np.empty(n)
    x[0] = eps[0] / np.sqrt(1 - phi**2)
    for t in range(1, n):
        x[t] = phi * x[t - 1] + eps[t]
    return x


@given(arrays(np.float64, st.integers(3, 60), elements=st.floats(-1e3, 1e3)),
       st.integers(1, 20))
@settings(max_examples=200)
def test_fft_matches_lagged_sums(x, max_lag):
    max_lag = min(max_lag, len(x) - 1)
    if np.ptp(x) < 1e-6:
        return
    np.testing.assert_allclose(autocorrelations(x, max_lag), brute_acf(x, max_lag),
                               atol=1e-9)


def test_alternating_series():
    x = np.tile([1.0, -1.0], 500)
    assert autocorrelations(x, 1)[0] == pytest.approx(-1, abs=2e-3)


def test_constant_series_is_degenerate():
    assert not autocorrelations(np.full(50, 3.0), 5).any()


def test_length_must_exceed_lag():
    with pytest.raises(ValueError):
        autocorrelations(np.arange(5.0), 5)


def test_iid_noise():
    x = np.random.default_rng(0).normal(size=10**6)
    assert np.abs(autocorrelations(x, 10)).max() < 0.004
    assert abs(act_estimate(x, 100) - 1) < 3 * 2 * np.sqrt(100 / 10**6)


def test_ar1():
    x = ar1(0.5, 10**6, 1)
    assert autocorrelations(x, 1)[0] == pytest.approx(0.5, abs=0.01)
    assert act_estimate(x, 60) == pytest.approx(3.0, abs=0.1)


@given(st.floats(-100, 100).filter(lambda a: abs(a) > 1e-3), st.floats(-1e3, 1e3))
@settings(max_examples=50)
def test_act_affine_invariant(a, b):
    x = ar1(0.7, 2000, 2)
    assert act_estimate(a * x + b, 50) == pytest.approx(act_estimate(x, 50), rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("n,tau,var,se", [(1.2e6, 10.2, 75.5, 0.025), (1.98e6, 53.0, 75.5, 0.045)])
def test_standard_error_examples(n, tau, var, se):
    ess, got = ess_and_se(int(n), tau, var)
    assert ess == pytest.approx(n / tau)
    assert round(got, 3) == se


def test_ess_clamped_when_tau_below_one():
    assert ess_and_se(1000, 0.4, 1.0)[0] == 1000


def test_block_examples():
    assert block_averages([1, 2, 3, 4], 2)[0].tolist() == [1.5, 3.5]
    x = np.arange(10.0)
    assert block_averages(x, 10)[0].tolist() == [4.5]
    assert np.array_equal(block_averages(x, 1)[0], x)
    means, dropped = block_averages(x, 3)
    assert dropped == 1 and means.tolist() == [1.0, 4.0, 7.0]
    with pytest.raises(ValueError):
        block_averages(x, 0)


@given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 5), st.integers(0, 1000))
def test_blocks_compose(p, q, m, seed):
    x = np.random.default_rng(seed).integers(-50, 50, size=p * q * m).astype(float)
    twice = block_averages(block_averages(x, p)[0], q)[0]
    np.testing.assert_allclose(twice, block_averages(x, p * q)[0], rtol=1e-12, atol=1e-12)


def test_trace_stats_all_computed():
    tr = run_standard(make_mixture1d(), [0.0], 20.0, 1000, new_stream(1))
    s = trace_stats(tr)
    assert s.copy_fraction == 0 and s.n_evals == 1000
    assert s.rejection_rate == tr.rejected[1:].mean()


def test_trace_stats_counts_copied_rejections():
    t = make_mixture1d()
    sched = [SequenceSpec(2.0, 5, 6, 0, 4), SequenceSpec(20.0, 5, 18, 0, 4)]
    tr = run_schedule(t, [0.0], sched, 200, new_stream(2))
    s = trace_stats(tr)
    copied = tr.source[1:] >= 0
    rej = tr.rejected[1:]
    assert s.n_rejected == np.count_nonzero(rej & copied) + np.count_nonzero(rej & ~copied)
    assert s.copy_fraction == pytest.approx(copied.mean())
    assert s.n_evals == np.count_nonzero(~copied)
    assert s.by_stepsize[20.0]["updates"] == 200 * 90
    assert sum(v["rejected"] for v in s.by_stepsize.values()) == s.n_rejected


def test_summarize_known_and_sample_variance():
    tr = run_standard(make_mixture1d(), [0.0], 20.0, 5000, new_stream(3))
    x = tr.states[:, 0]
    known = summarize(x, tr, 100, variance=75.5)
    sample = summarize(x, tr, 100)
    assert known.variance_mode == "known" and sample.variance_mode == "sample"
    assert known.tau == sample.tau
    assert known.se == pytest.approx(np.sqrt(75.5 * known.tau / len(x)))
    assert sample.variance == pytest.approx(np.var(x))
    assert known.mean == x.mean() and known.states_used == 5001
