"""Target distributions given by an unnormalised log density."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class Target:
    """A distribution on R^dim known through ``logpdf``.

    ``logpdf`` takes a 1-D float array of length ``dim`` and returns a finite
    float or ``-inf``.  Samplers call it directly; :meth:`log_density` adds a
    shape check for outside callers.  ``mean`` and ``variance`` are the known
    per-coordinate moments, when available.
    """

    name: str
    dim: int
    logpdf: Callable[[np.ndarray], float] = field(repr=False)
    mean: np.ndarray | None = field(default=None, repr=False)
    variance: np.ndarray | None = field(default=None, repr=False)

    def check_state(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.dim,):
            raise ValueError(
                f"{self.name}: state must have shape ({self.dim},), got {x.shape}"
            )
        if not np.all(np.isfinite(x)):
            raise ValueError(f"{self.name}: state has non-finite coordinates")
        return x

    def log_density(self, x) -> float:
        return self.logpdf(self.check_state(x))


def _mixture_logpdf(x: np.ndarray) -> float:
    t = float(x[0])
    # 0.5 N(t; 0, 10^2) + 0.5 N(t; 10, 1), combined in log space.
    wide = -0.5 * (t / 10.0) ** 2 - math.log(10.0)
    narrow = -0.5 * (t - 10.0) ** 2
    hi = max(wide, narrow)
    return (
        math.log(0.5) - LOG_SQRT_2PI
        + hi + math.log(math.exp(wide - hi) + math.exp(narrow - hi))
    )


def make_mixture1d() -> Target:
    """Equal mixture of N(0, 10^2) and N(10, 1), normalised.  Mean 5, variance 75.5."""
    return Target(
        "mixture1d", 1, _mixture_logpdf,
        mean=np.array([5.0]), variance=np.array([75.5]),
    )


def make_diag_gaussian(variances: Sequence[float], name: str = "diag_gaussian") -> Target:
    """Zero-mean Gaussian with diagonal covariance, normalised."""
    var = np.asarray(variances, dtype=np.float64)
    if var.ndim != 1 or var.size == 0 or np.any(var <= 0) or not np.all(np.isfinite(var)):
        raise ValueError("variances must be a nonempty list of positive numbers")
    prec = 1.0 / var
    const = -var.size * LOG_SQRT_2PI - 0.5 * float(np.sum(np.log(var)))

    def logpdf(x: np.ndarray) -> float:
        return const - 0.5 * float((x * x) @ prec)

    return Target(name, var.size, logpdf, mean=np.zeros(var.size), variance=var.copy())


def make_mvgauss7() -> Target:
    return make_diag_gaussian([1.0, 1.0] + [0.01] * 5, name="mvgauss7")


def _funnel_logpdf(x: np.ndarray) -> float:
    v = float(x[0])
    r = x[1:]
    # The -(9/2) v term is the v-dependent part of the nine conditional normalisers.
    return -v * v / 18.0 - 4.5 * v - 0.5 * math.exp(-v) * float(r @ r)


def make_funnel() -> Target:
    """v ~ N(0, 9), x_i | v ~ N(0, e^v) for i = 1..9; log density is 0 at the origin.

    The x_i have mean 0 and marginal variance E[e^v] = e^{4.5}.
    """
    mean = np.zeros(10)
    variance = np.array([9.0] + [math.exp(4.5)] * 9)
    return Target("funnel", 10, _funnel_logpdf, mean=mean, variance=variance)


BUILTIN_TARGETS = {
    "mixture1d": make_mixture1d,
    "mvgauss7": make_mvgauss7,
    "funnel": make_funnel,
}


def get_target(name: str, variances: Sequence[float] | None = None) -> Target:
    if name == "diag_gaussian":
        if variances is None:
            raise ValueError("diag_gaussian target needs a variance list")
        return make_diag_gaussian(variances)
    try:
        return BUILTIN_TARGETS[name]()
    except KeyError:
        raise ValueError(
            f"unknown target {name!r}; expected one of "
            f"{sorted(BUILTIN_TARGETS) + ['diag_gaussian']}"
        ) from None
