"""Observation model, synthetic data, and the unnormalised log-posterior.

Observed prevalence is the model ``I(t)`` plus i.i.d. Gaussian noise with a
known standard deviation. With a flat prior the log-posterior equals the
Gaussian log-likelihood inside the prior box and ``-inf`` outside it.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, NumericalError
from .rng import NOISE_STREAM, make_rng
from .sir import Scenario, SirParams, integrate

logger = logging.getLogger(__name__)

# observation times must sit this close (in days) to a recorded output time
GRID_ATOL = 1e-9


@dataclass(frozen=True, eq=False)
class Dataset:
    """Observed infectious counts at ``times`` with known noise scale ``sigma``.

    Counts are reals and may be negative, since additive noise is unbounded.
    """

    times: np.ndarray
    observed_i: np.ndarray
    sigma: float

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        obs = np.array(self.observed_i, dtype=float)
        if times.ndim != 1 or times.shape != obs.shape or len(times) < 2:
            raise InvalidInputError("times and observed_i must be 1-D of equal length >= 2")
        if np.any(np.diff(times) <= 0):
            raise InvalidInputError("observation times must be strictly increasing")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(obs))):
            raise InvalidInputError("observations must be finite")
        sigma = float(self.sigma)
        if not (math.isfinite(sigma) and sigma > 0):
            raise InvalidInputError(f"sigma must be > 0, got {self.sigma!r}")
        times.setflags(write=False)
        obs.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "observed_i", obs)
        object.__setattr__(self, "sigma", sigma)

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class UniformPrior:
    """Independent uniform priors on ``beta`` and ``gamma`` over closed intervals."""

    beta_lo: float = 0.05
    beta_hi: float = 1.0
    gamma_lo: float = 0.01
    gamma_hi: float = 0.5

    def __post_init__(self):
        bounds = (self.beta_lo, self.beta_hi, self.gamma_lo, self.gamma_hi)
        if not all(math.isfinite(b) for b in bounds):
            raise InvalidInputError(f"prior bounds must be finite: {bounds}")
        if not (0 < self.beta_lo < self.beta_hi and 0 < self.gamma_lo < self.gamma_hi):
            raise InvalidInputError(
                "prior bounds must satisfy 0 < lo < hi for both parameters, got "
                f"beta=[{self.beta_lo}, {self.beta_hi}], gamma=[{self.gamma_lo}, {self.gamma_hi}]"
            )

    def contains(self, params: SirParams) -> bool:
        return (
            self.beta_lo <= params.beta <= self.beta_hi
            and self.gamma_lo <= params.gamma <= self.gamma_hi
        )

    def midpoint(self) -> SirParams:
        return SirParams(
            0.5 * (self.beta_lo + self.beta_hi), 0.5 * (self.gamma_lo + self.gamma_hi)
        )


def observation_times(scenario: Scenario, include_end: bool = False) -> np.ndarray:
    """Recorded output times used as observation days.

    By default the terminal time is left out, so a 60-day daily scenario
    yields days 0 through 59.
    """
    times = scenario.output_times()
    return times if include_end else times[:-1]


def noisy_curve(
    scenario: Scenario,
    params: SirParams,
    sigma: float,
    seed: int,
    include_end: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Model ``I(t)`` on the observation days plus ``Normal(0, sigma**2)`` noise.

    ``sigma = 0`` returns the noiseless model curve.
    """
    sigma = float(sigma)
    if not (math.isfinite(sigma) and sigma >= 0):
        raise InvalidInputError(f"sigma must be >= 0, got {sigma!r}")
    traj = integrate(scenario, params, "rk4")
    n = len(observation_times(scenario, include_end))
    times, model_i = traj.times[:n], np.array(traj.i[:n])
    if sigma == 0:
        return times, model_i
    rng = make_rng(seed, NOISE_STREAM)
    return times, model_i + sigma * rng.standard_normal(n)


def simulate_observations(
    scenario: Scenario,
    params: SirParams,
    sigma: float,
    seed: int,
    *,
    likelihood_sigma: float | None = None,
    include_end: bool = False,
) -> Dataset:
    """Synthetic outbreak data from the SIR model with additive Gaussian noise.

    Parameters
    ----------
    scenario : Scenario
        Integration grid; observations are taken at its recorded times.
    params : SirParams
        Data-generating rates.
    sigma : float
        Noise standard deviation. Zero gives the exact model curve.
    seed : int
        Seed for the noise stream. Identical inputs give bit-identical data.
    likelihood_sigma : float, optional
        Noise scale stored on the dataset for later likelihood evaluation.
        Defaults to ``sigma``; required when ``sigma`` is zero.
    include_end : bool
        Also observe at ``t_end``.
    """
    times, values = noisy_curve(scenario, params, sigma, seed, include_end)
    return Dataset(times, values, sigma if likelihood_sigma is None else likelihood_sigma)


def grid_indices(times: np.ndarray, scenario: Scenario) -> np.ndarray:
    """Positions of ``times`` in the scenario's recorded output grid."""
    grid = scenario.output_times()
    idx = np.rint(np.asarray(times) / scenario.output_interval).astype(np.int64)
    if np.any(idx < 0) or np.any(idx >= len(grid)):
        raise InvalidInputError("observation times fall outside the integration window")
    off = np.abs(grid[idx] - times)
    if np.any(off > GRID_ATOL):
        bad = float(np.asarray(times)[np.argmax(off)])
        raise InvalidInputError(f"observation time {bad!r} is not on the solver output grid")
    return idx


def _log_likelihood(data: Dataset, params: SirParams, scenario: Scenario, idx) -> float:
    try:
        traj = integrate(scenario, params, "rk4")
    except NumericalError as exc:
        logger.warning("likelihood set to -inf: %s", exc)
        return -math.inf
    z = (data.observed_i - traj.i[idx]) / data.sigma
    return -0.5 * float(np.dot(z, z))


def log_likelihood(data: Dataset, params: SirParams, scenario: Scenario) -> float:
    """Gaussian log-likelihood of the data up to a ``params``-independent constant.

    Returns ``-0.5 * sum(((I_obs - I_model) / sigma) ** 2)``. The omitted term
    ``-T * log(sigma * sqrt(2 * pi))`` is constant because ``sigma`` is fixed.
    Integrator failure gives ``-inf`` rather than an exception.
    """
    return _log_likelihood(data, params, scenario, grid_indices(data.times, scenario))


def log_prior(params: SirParams, prior: UniformPrior) -> float:
    """0 inside the prior box (bounds included), ``-inf`` outside."""
    return 0.0 if prior.contains(params) else -math.inf


def log_posterior(
    params: SirParams, data: Dataset, scenario: Scenario, prior: UniformPrior
) -> float:
    """Unnormalised log-posterior; skips the ODE solve when the prior rejects."""
    lp = log_prior(params, prior)
    if lp == -math.inf:
        return lp
    return lp + log_likelihood(data, params, scenario)


class LogPosterior:
    """Log-posterior target for the sampler, with evaluation counters.

    Observation indices are resolved once at construction. ``n_solves``
    counts ODE integrations and ``n_failures`` counts likelihood evaluations
    that came back ``-inf`` because the integrator failed.
    """

    def __init__(self, data: Dataset, scenario: Scenario, prior: UniformPrior | None = None):
        self.data = data
        self.scenario = scenario
        self.prior = UniformPrior() if prior is None else prior
        self._idx = grid_indices(data.times, scenario)
        self.n_calls = 0
        self.n_solves = 0
        self.n_failures = 0

    def __call__(self, params: SirParams) -> float:
        self.n_calls += 1
        lp = log_prior(params, self.prior)
        if lp == -math.inf:
            return lp
        self.n_solves += 1
        ll = _log_likelihood(self.data, params, self.scenario, self._idx)
        if ll == -math.inf:
            self.n_failures += 1
        return lp + ll
