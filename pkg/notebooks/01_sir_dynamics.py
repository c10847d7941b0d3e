"""
SIR dynamics on a fixed grid
============================

Integrate the outbreak used throughout these scripts (N = 1000, ten initial
cases, beta = 0.3, gamma = 0.1) and look at where the infectious curve turns
over.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from sirmcmc.sir import Scenario, SirParams, final_size, integrate, peak_susceptibles, r0

params = SirParams(beta=0.3, gamma=0.1)
scenario = Scenario.from_infected(population=1000, i0=10, t_end=60, dt=0.01, obs_stride=1)
traj = integrate(scenario, params, "rk4")

print(f"R0 = {r0(params):.2f}")

###############################################################################
# The peak of I(t) sits where S has fallen to N * gamma / beta.

k = int(np.argmax(traj.i))
print(f"peak at day {traj.times[k]:.2f}: I = {traj.i[k]:.1f}, S = {traj.s[k]:.2f}")
print(f"threshold N*gamma/beta = {peak_susceptibles(params, 1000):.2f}")

###############################################################################
# By day 60 the outbreak has not quite finished; run longer to see the plateau.

print(f"recovered fraction at day 60: {final_size(traj, 1000):.4f}")
long_run = integrate(Scenario.from_infected(t_end=300, dt=0.1, obs_stride=10), params)
print(f"recovered fraction at day 300: {final_size(long_run, 1000):.4f}")

###############################################################################
# Euler versus RK4 at the same coarse step.

coarse = Scenario.from_infected(t_end=60, dt=1.0, obs_stride=1)
euler = integrate(coarse, params, "euler")
rk4 = integrate(coarse, params, "rk4")
print(f"max |I_euler - I_rk4| at dt=1: {np.max(np.abs(euler.i - rk4.i)):.2f}")

fig, axes = plt.subplots(1, 2, figsize=(10, 4))
for series, label in ((traj.s, "S"), (traj.i, "I"), (traj.r, "R")):
    axes[0].plot(traj.times, series, label=label)
axes[0].axvline(traj.times[k], color="k", ls=":")
axes[0].set_xlabel("day")
axes[0].legend()
for beta in (0.2, 0.3, 0.5):
    curve = integrate(Scenario.from_infected(), SirParams(beta, 0.1))
    axes[1].plot(curve.times, curve.i, label=f"beta={beta}")
axes[1].set_xlabel("day")
axes[1].set_ylabel("I(t)")
axes[1].legend()
fig.tight_layout()
fig.savefig("sir_dynamics.png", dpi=120)
