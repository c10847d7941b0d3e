"""
Credible intervals and the posterior predictive check
=====================================================

Summarise a chain and simulate outbreaks from 100 posterior draws to see
whether the data sit inside the resulting band.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from sirmcmc.inference import LogPosterior, simulate_observations
from sirmcmc.mcmc import McmcConfig, run_chain, split_burn_in
from sirmcmc.sir import Scenario, SirParams
from sirmcmc.summary import credible_interval, derived_r0_samples, posterior_predictive

scenario = Scenario.from_infected()
data = simulate_observations(scenario, SirParams(0.3, 0.1), sigma=15.0, seed=42)
chain = run_chain(McmcConfig(n_iter=8000, step_delta=0.003, seed=43), LogPosterior(data, scenario))
samples = split_burn_in(chain)

###############################################################################
# Equal-tailed 95% intervals. R0 is summarised from per-draw ratios.

for name, values in (("beta", samples[:, 0]), ("gamma", samples[:, 1]), ("R0", derived_r0_samples(samples))):
    lo, hi = credible_interval(values, 0.95)
    print(f"{name:5s} 95% interval [{lo:.4f}, {hi:.4f}]")

###############################################################################
# Posterior predictive band from 100 draws.

check = posterior_predictive(samples, n_draws=100, scenario=scenario, seed=43)
print(f"fraction of observations within the envelope +/- 2 sigma: "
      f"{check.inside_fraction(data, scenario):.3f}")

fig, ax = plt.subplots(figsize=(6, 4))
for curve in check.curves:
    ax.plot(check.times, curve, color="C0", alpha=0.05)
ax.fill_between(check.times, check.q025, check.q975, color="C0", alpha=0.3)
ax.plot(data.times, data.observed_i, "r.", label="observed")
ax.set_xlabel("day")
ax.set_ylabel("infectious")
ax.legend()
fig.tight_layout()
fig.savefig("ppc.png", dpi=120)
