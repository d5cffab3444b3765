"""Deterministic Metropolis step and the random-walk baselines.

A Metropolis update is written as a map on (x, delta, e) with an Exp(1)
variable ``e``: the proposal ``x + w*delta`` is accepted iff
``e + (logpi(x + w*delta) - logpi(x)) > 0``.  On acceptance the map returns
``(x + w*delta, -delta, e + logpi(x') - logpi(x))``, otherwise the input
unchanged.  The map is its own inverse, which is what the short-cut engine
exploits.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .rng import RandomStream
from .targets import Target
from .trace import INITIAL, Trace


@dataclass(frozen=True)
class AuxiliaryPair:
    delta: np.ndarray
    e: float

    def __post_init__(self):
        if not self.e > 0:
            raise ValueError(f"exponential variable must be positive, got {self.e}")


@dataclass(frozen=True)
class StepOutcome:
    state: np.ndarray
    log_density: float
    aux: AuxiliaryPair
    rejected: bool


def _t_met(logpdf, x, lp, w, delta, e):
    """Core of the step map: returns (state, logpi, new e, rejected).

    Every sampler goes through this function so that all of them evaluate
    the accept test with the same floating-point expression.
    """
    prop = x + w * delta
    lp_prop = logpdf(prop)
    diff = lp_prop - lp
    if e + diff > 0.0:
        return prop, lp_prop, e + diff, False
    return x, lp, e, True


def t_met_apply(target: Target, x, logpi_x: float, w: float, aux: AuxiliaryPair) -> StepOutcome:
    """Apply the self-inverse Metropolis map to ``(x, aux.delta, aux.e)``.

    Performs exactly one density evaluation, at ``x + w*delta``.  A ``-inf``
    log density at the proposal always rejects.
    """
    x = np.asarray(x, dtype=np.float64)
    if not np.isfinite(logpi_x):
        raise ValueError("log density of the current state must be finite")
    state, lp, e, rejected = _t_met(target.logpdf, x, logpi_x, w, aux.delta, aux.e)
    if rejected:
        return StepOutcome(x, logpi_x, aux, True)
    return StepOutcome(state, lp, AuxiliaryPair(-aux.delta, e), False)


def draw_auxiliary(stream: RandomStream, dim: int) -> AuxiliaryPair:
    """Draw delta (dim standard normals) then e; the order all samplers use."""
    delta = stream.gaussians(dim)
    return AuxiliaryPair(delta, stream.next_exponential())


def standard_update(target: Target, x, logpi_x: float, w: float, stream: RandomStream) -> StepOutcome:
    """One random-walk Metropolis update with fresh auxiliaries."""
    return t_met_apply(target, x, logpi_x, w, draw_auxiliary(stream, target.dim))


def _initial(target: Target, x0) -> tuple[np.ndarray, float]:
    x0 = target.check_state(x0).copy()
    lp0 = target.logpdf(x0)
    if not np.isfinite(lp0):
        raise ValueError(f"initial state has log density {lp0}; it must be in the support")
    return x0, lp0


def _new_trace(target: Target, x0, lp0, n_rows: int) -> Trace:
    tr = Trace(target.dim, n_rows)
    tr.states[0] = x0
    tr.log_density[0] = lp0
    tr.source[0] = INITIAL
    tr.n = 1
    return tr


def run_standard(target: Target, x0, w: float, n_updates: int, stream: RandomStream,
                 thin: int = 1) -> Trace:
    """Random-walk Metropolis for ``n_updates`` updates with stepsize ``w``.

    Row 0 of the result is ``x0``; with ``thin=k`` only the states after
    updates ``k, 2k, ...`` are kept (rates are then read from ``counts``).
    """
    if n_updates < 0 or thin < 1:
        raise ValueError("n_updates must be >= 0 and thin >= 1")
    x, lp = _initial(target, x0)
    tr = _new_trace(target, x, lp, 1 + n_updates // thin)
    tr.thinned = thin > 1
    logpdf, dim = target.logpdf, target.dim
    gaussians, expo = stream.gaussians, stream.next_exponential
    states, logds, rej, src, step, wcol = (tr.states, tr.log_density, tr.rejected,
                                           tr.source, tr.step, tr.stepsize)
    n_rej = 0
    row = 1
    for k in range(1, n_updates + 1):
        delta = gaussians(dim)
        x, lp, _, r = _t_met(logpdf, x, lp, w, delta, expo())
        n_rej += r
        if k % thin == 0:
            states[row] = x
            logds[row] = lp
            rej[row] = r
            step[row] = k
            wcol[row] = w
            src[row] = -1
            row += 1
    tr.n = row
    c = tr.counts_for(w)
    c.updates, c.rejected, c.evals = n_updates, n_rej, n_updates
    tr.counts.add(c)
    return tr.finish()


def naive_adaptive_stepsize(history, w_small: float, w_large: float,
                            window: int = 10, threshold: int = 5) -> float:
    """Stepsize rule of the naive adaptive baseline.

    ``history`` holds the most recent rejection flags.  Until ``window`` flags
    exist the large stepsize is used.
    """
    if len(history) < window:
        return w_large
    return w_small if sum(history) > threshold else w_large


def run_naive_adaptive(target: Target, x0, w_small: float, w_large: float, n_updates: int,
                       stream: RandomStream, window: int = 10, threshold: int = 5) -> Trace:
    """Metropolis whose stepsize depends on the last ``window`` rejections.

    This chain is not Markov in x and is biased; it is kept as a baseline.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    x, lp = _initial(target, x0)
    tr = _new_trace(target, x, lp, 1 + n_updates)
    logpdf, dim = target.logpdf, target.dim
    history: deque[bool] = deque(maxlen=window)
    recent = 0
    for k in range(1, n_updates + 1):
        if len(history) < window:
            w = w_large
        else:
            w = w_small if recent > threshold else w_large
        delta = stream.gaussians(dim)
        x, lp, _, r = _t_met(logpdf, x, lp, w, delta, stream.next_exponential())
        if len(history) == window:
            recent -= history[0]
        history.append(r)
        recent += r
        tr.states[k] = x
        tr.log_density[k] = lp
        tr.rejected[k] = r
        tr.step[k] = k
        tr.stepsize[k] = w
        c = tr.counts_for(w)
        c.updates += 1
        c.rejected += r
        c.evals += 1
    tr.n = n_updates + 1
    for c in tr.by_stepsize.values():
        tr.counts.add(c)
    return tr.finish()
