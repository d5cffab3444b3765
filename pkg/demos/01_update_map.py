# %% [markdown]
# The Metropolis update as a self-inverse map
#
# An update takes (x, delta, e) to (x + w*delta, -delta, e + change in log density)
# when that keeps e positive, and leaves everything alone otherwise.  Applying it
# twice gets back where we started.

# %%
import numpy as np

from shortcut_mcmc import AuxiliaryPair, make_mixture1d, t_met_apply

target = make_mixture1d()
x = np.array([3.0])
lp = target.log_density(x)
aux = AuxiliaryPair(np.array([0.4]), 0.7)

once = t_met_apply(target, x, lp, 2.0, aux)
print("accepted:", not once.rejected, "new x:", once.state, "new e:", once.aux.e)

# %%
twice = t_met_apply(target, once.state, once.log_density, 2.0, once.aux)
print("back to x:", twice.state, "e:", twice.aux.e, "delta:", twice.aux.delta)

# %% A downhill move with small e is rejected and nothing changes
aux = AuxiliaryPair(np.array([4.0]), 0.01)
out = t_met_apply(target, x, lp, 2.0, aux)
print("rejected:", out.rejected, "state:", out.state)
