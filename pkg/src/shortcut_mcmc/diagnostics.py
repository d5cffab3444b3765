"""Autocorrelation time, effective sample size, standard errors and trace rates."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .trace import Trace, UpdateCounts, copy_fraction, rejection_rate


def autocorrelations(series, max_lag: int) -> np.ndarray:
    """Sample autocorrelations at lags 1..max_lag.

    Autocovariances are taken about the sample mean with divisor n at every
    lag.  A constant series has no defined autocorrelation; zeros are
    returned for it.  Computed by FFT with zero padding, so the result is the
    plain lagged sum up to rounding.
    """
    x = np.asarray(series, dtype=np.float64)
    n = x.size
    if max_lag < 1:
        raise ValueError("max_lag must be positive")
    if n <= max_lag:
        raise ValueError(f"series of length {n} is too short for max_lag={max_lag}")
    x = x - x.mean()
    c0 = float(x @ x) / n
    if c0 == 0.0:
        return np.zeros(max_lag)
    size = 1 << int(np.ceil(np.log2(n + max_lag + 1)))
    f = np.fft.rfft(x, size)
    acov = np.fft.irfft(f * np.conj(f), size)[1:max_lag + 1] / n
    return acov / c0


def act_estimate(series, max_lag: int) -> float:
    """Autocorrelation time 1 + 2 * sum of autocorrelations at lags 1..max_lag.

    No windowing beyond the fixed cut-off; the raw value can be below 1.
    """
    return 1.0 + 2.0 * float(np.sum(autocorrelations(series, max_lag)))


def ess_and_se(n_states: int, tau: float, variance: float) -> tuple[float, float]:
    """Effective sample size n / max(tau, 1) and standard error sqrt(var / ESS)."""
    if n_states < 1:
        raise ValueError("need at least one state")
    if variance < 0:
        raise ValueError("variance must be non-negative")
    ess = n_states / max(tau, 1.0)
    return ess, float(np.sqrt(variance / ess))


def block_averages(series, block_len: int) -> tuple[np.ndarray, int]:
    """Means of consecutive non-overlapping blocks.

    Returns the block means and the number of trailing values dropped
    because they did not fill a block.
    """
    if block_len <= 0:
        raise ValueError("block_len must be positive")
    x = np.asarray(series, dtype=np.float64)
    n_blocks = x.size // block_len
    dropped = x.size - n_blocks * block_len
    return x[: n_blocks * block_len].reshape(n_blocks, block_len).mean(axis=1), dropped


@dataclass
class TraceStats:
    rejection_rate: float
    copy_fraction: float
    n_evals: int
    n_updates: int
    n_rejected: int
    n_copied: int
    by_stepsize: dict[float, dict[str, float]]


def _rates(c: UpdateCounts) -> dict[str, float]:
    return {
        "updates": c.updates, "rejected": c.rejected, "copied": c.copied, "evals": c.evals,
        "rejection_rate": rejection_rate(c), "copy_fraction": copy_fraction(c),
    }


def trace_stats(trace: Trace) -> TraceStats:
    """Rejection rate and copy fraction over every update of a run.

    Copied updates count with the rejection flag of the update they revisit,
    so the rate covers updates that were not actually recomputed.
    """
    if trace.counts.updates == 0:
        raise ValueError("trace has no updates")
    c = trace.counts
    return TraceStats(
        rejection_rate=rejection_rate(c), copy_fraction=copy_fraction(c),
        n_evals=c.evals, n_updates=c.updates, n_rejected=c.rejected, n_copied=c.copied,
        by_stepsize={w: _rates(bc) for w, bc in sorted(trace.by_stepsize.items())},
    )


@dataclass
class DiagnosticsReport:
    states_used: int
    rejection_rate: float
    copy_fraction: float
    tau: float
    ess: float
    mean: float
    se: float
    n_evals: int
    variance: float
    variance_mode: str
    max_lag: int

    def as_dict(self) -> dict:
        return asdict(self)


def summarize(series, trace: Trace, max_lag: int, variance: float | None = None) -> DiagnosticsReport:
    """Estimate the mean of ``series`` with its standard error.

    With ``variance`` given the known-variance standard error is used,
    otherwise the sample variance of the series.
    """
    x = np.asarray(series, dtype=np.float64)
    stats = trace_stats(trace)
    tau = act_estimate(x, max_lag)
    mode = "known" if variance is not None else "sample"
    var = float(variance) if variance is not None else float(np.var(x))
    ess, se = ess_and_se(x.size, tau, var)
    return DiagnosticsReport(
        states_used=int(x.size), rejection_rate=stats.rejection_rate,
        copy_fraction=stats.copy_fraction, tau=tau, ess=ess, mean=float(x.mean()), se=se,
        n_evals=stats.n_evals, variance=var, variance_mode=mode, max_lag=max_lag,
    )
