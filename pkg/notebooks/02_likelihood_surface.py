"""
Likelihood and prior
====================

Simulate noisy case counts, then evaluate the Gaussian log-likelihood over
the prior box. With a flat prior this surface is the log-posterior.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from sirmcmc.inference import UniformPrior, log_likelihood, log_posterior, simulate_observations
from sirmcmc.sir import Scenario, SirParams

scenario = Scenario.from_infected()
truth = SirParams(0.3, 0.1)
data = simulate_observations(scenario, truth, sigma=15.0, seed=42)
prior = UniformPrior()

print(f"{len(data)} observations, days {data.times[0]:g}..{data.times[-1]:g}")
print(f"log-likelihood at the truth: {log_likelihood(data, truth, scenario):.2f}")
print(f"log-posterior outside the box: {log_posterior(SirParams(1.2, 0.1), data, scenario, prior)}")

###############################################################################
# A coarse grid over the prior box. The ridge runs along roughly constant
# beta/gamma, which is why the two rates end up correlated in the posterior.

betas = np.linspace(0.2, 0.4, 41)
gammas = np.linspace(0.05, 0.15, 41)
surface = np.array([[log_likelihood(data, SirParams(b, g), scenario) for b in betas] for g in gammas])
j, i = np.unravel_index(np.argmax(surface), surface.shape)
print(f"grid maximum at beta={betas[i]:.3f}, gamma={gammas[j]:.4f}")

fig, ax = plt.subplots(figsize=(5, 4))
levels = surface.max() - np.array([200, 50, 20, 8, 2, 0.5])[::-1]
ax.contour(betas, gammas, surface, levels=np.sort(levels))
ax.plot(truth.beta, truth.gamma, "r+", ms=12)
ax.set_xlabel("beta")
ax.set_ylabel("gamma")
fig.tight_layout()
fig.savefig("likelihood_surface.png", dpi=120)
