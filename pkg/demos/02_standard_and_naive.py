# %% [markdown]
# Standard and naively adapted Metropolis on a two-scale mixture
#
# Half N(0, 10^2) and half N(10, 1).  A small stepsize crawls through the wide
# component, a large one sticks in the narrow one.  Picking the stepsize from
# the recent rejection rate looks sensible but biases the estimate of the mean.

# %%
import numpy as np

from shortcut_mcmc import make_mixture1d, new_stream, run_naive_adaptive, run_standard
from shortcut_mcmc.diagnostics import summarize

target = make_mixture1d()
n = 200_000

# %%
for w in (2.0, 20.0):
    tr = run_standard(target, [0.0], w, n, new_stream(1))
    rep = summarize(tr.states[:, 0], tr, max_lag=500, variance=75.5)
    print(f"w={w:>4}: rejection {rep.rejection_rate:.3f}  tau {rep.tau:6.1f}  "
          f"mean {rep.mean:.3f} +- {rep.se:.3f}")

# %%
tr = run_naive_adaptive(target, [0.0], 2.0, 20.0, n, new_stream(2))
rep = summarize(tr.states[:, 0], tr, max_lag=500, variance=75.5)
print(f"naive adaptive: mean {rep.mean:.3f} +- {rep.se:.3f} (true mean 5)")
print("share of updates using w=2:", tr.counts_for(2.0).updates / n)
