# %% [markdown]
# Autocorrelation time, effective sample size and standard error
#
# tau = 1 + 2 * (sum of autocorrelations up to a cut-off); ESS = n / tau;
# SE = sqrt(variance / ESS).

# %%
import numpy as np

from shortcut_mcmc.diagnostics import act_estimate, autocorrelations, block_averages, ess_and_se

rng = np.random.default_rng(0)
phi, n = 0.5, 200_000
x = np.empty(n)
x[0] = rng.normal()
for t in range(1, n):
    x[t] = phi * x[t - 1] + rng.normal()

print("rho_1..3:", autocorrelations(x, 3))
tau = act_estimate(x, 50)
print(f"tau {tau:.3f}, closed form {(1 + phi) / (1 - phi):.3f}")
ess, se = ess_and_se(n, tau, 1 / (1 - phi**2))
print(f"ESS {ess:.0f}, SE of the mean {se:.4f}")

# %% Block means over whole short-cut sequences give a second opinion on tau
means, dropped = block_averages(x, 100)
print(len(means), "blocks,", dropped, "values dropped")
