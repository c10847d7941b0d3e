"""Posterior summaries and posterior predictive checks."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .inference import Dataset, grid_indices
from .rng import PPC_STREAM, make_rng
from .sir import Scenario, SirParams, integrate

DEFAULT_LEVEL = 0.95
DEFAULT_N_DRAWS = 100


def posterior_mean_std(samples) -> tuple[float, float]:
    """Sample mean and standard deviation with the ``1/M`` denominator.

    Note this is the population form, not numpy's ``ddof=1`` estimator.
    """
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1 or len(x) < 2:
        raise InvalidInputError("need a 1-D sequence of at least 2 samples")
    mean = float(np.mean(x))
    return mean, float(np.sqrt(np.mean((x - mean) ** 2)))


def credible_interval(samples, level: float = DEFAULT_LEVEL) -> tuple[float, float]:
    """Equal-tailed interval from linearly interpolated empirical quantiles.

    Uses the ``(M - 1) * p`` order-statistic interpolation (Hyndman-Fan
    type 7, numpy's ``method="linear"``).
    """
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1 or len(x) < 10:
        raise InvalidInputError("need a 1-D sequence of at least 10 samples")
    if not 0 < level < 1:
        raise InvalidInputError(f"level must lie in (0, 1), got {level!r}")
    tail = 0.5 * (1.0 - level)
    lo, hi = np.quantile(x, [tail, 1.0 - tail], method="linear")
    return float(lo), float(hi)


def derived_r0_samples(samples) -> np.ndarray:
    """Element-wise ``beta / gamma`` for each posterior draw.

    Accepts an ``(M, 2)`` array of ``(beta, gamma)`` rows or a sequence of
    ``SirParams``.
    """
    arr = _as_pairs(samples)
    if np.any(arr[:, 1] <= 0):
        raise InvalidInputError("every gamma must be > 0 to form beta/gamma")
    return arr[:, 0] / arr[:, 1]


def _as_pairs(samples) -> np.ndarray:
    if len(samples) and isinstance(samples[0], SirParams):
        return np.array([(p.beta, p.gamma) for p in samples], dtype=float)
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidInputError(f"expected (M, 2) parameter samples, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class QuantitySummary:
    mean: float
    std: float
    ci_low: float
    ci_high: float
    level: float

    def as_dict(self) -> dict:
        return {
            "mean": self.mean,
            "std": self.std,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "level": self.level,
        }


@dataclass(frozen=True)
class PosteriorSummary:
    beta: QuantitySummary
    gamma: QuantitySummary
    r0: QuantitySummary
    n_samples: int

    def as_dict(self) -> dict:
        return {
            "beta": self.beta.as_dict(),
            "gamma": self.gamma.as_dict(),
            "r0": self.r0.as_dict(),
            "n_samples": self.n_samples,
        }


def summarize_quantity(x, level: float = DEFAULT_LEVEL) -> QuantitySummary:
    mean, std = posterior_mean_std(x)
    lo, hi = credible_interval(x, level)
    return QuantitySummary(mean, std, lo, hi, level)


def summarize(samples, level: float = DEFAULT_LEVEL) -> PosteriorSummary:
    """Mean, std and equal-tailed interval for beta, gamma and ``R0 = beta/gamma``.

    R0 statistics are computed on the per-draw ratios, not from the ratio of
    the means.
    """
    arr = _as_pairs(samples)
    return PosteriorSummary(
        beta=summarize_quantity(arr[:, 0], level),
        gamma=summarize_quantity(arr[:, 1], level),
        r0=summarize_quantity(derived_r0_samples(arr), level),
        n_samples=len(arr),
    )


@dataclass(frozen=True, eq=False)
class PredictiveCheck:
    """Simulated ``I(t)`` curves for posterior draws and their pointwise band.

    ``curves`` has one row per draw, in draw order. The band columns are the
    pointwise minimum, 2.5%, 50% and 97.5% quantiles, and maximum.
    """

    times: np.ndarray
    draws: np.ndarray
    curves: np.ndarray
    q_min: np.ndarray
    q025: np.ndarray
    q50: np.ndarray
    q975: np.ndarray
    q_max: np.ndarray

    def band(self) -> np.ndarray:
        return np.column_stack([self.times, self.q_min, self.q025, self.q50, self.q975, self.q_max])

    def inside_fraction(self, data: Dataset, scenario: Scenario, margin: float | None = None) -> float:
        """Fraction of observations within ``[q_min - margin, q_max + margin]``.

        ``margin`` defaults to ``2 * data.sigma``.
        """
        margin = 2.0 * data.sigma if margin is None else margin
        idx = grid_indices(data.times, scenario)
        lo = self.q_min[idx] - margin
        hi = self.q_max[idx] + margin
        inside = (data.observed_i >= lo) & (data.observed_i <= hi)
        return float(np.mean(inside))


def posterior_predictive(
    post_burn_in,
    n_draws: int = DEFAULT_N_DRAWS,
    scenario: Scenario | None = None,
    seed: int = 43,
    stream: int = PPC_STREAM,
) -> PredictiveCheck:
    """Integrate the SIR model for posterior draws chosen with replacement.

    Parameters
    ----------
    post_burn_in : array_like or sequence of SirParams
        Retained posterior samples.
    n_draws : int
        Number of draws; may exceed the number of samples.
    scenario : Scenario, optional
        Integration grid; defaults to ``Scenario.from_infected()``.
    seed, stream : int
        Generator key for the index draws.
    """
    arr = _as_pairs(post_burn_in)
    if len(arr) == 0:
        raise InvalidInputError("post_burn_in must be non-empty")
    if int(n_draws) != n_draws or n_draws < 1:
        raise InvalidInputError(f"n_draws must be a positive integer, got {n_draws!r}")
    scenario = Scenario.from_infected() if scenario is None else scenario
    rng = make_rng(seed, stream)
    draws = rng.integers(0, len(arr), size=int(n_draws))
    curves = np.empty((len(draws), scenario.n_outputs))
    for k, j in enumerate(draws):
        curves[k] = integrate(scenario, SirParams(*arr[j]), "rk4").i
    q_min, q025, q50, q975, q_max = (
        curves.min(axis=0),
        *np.quantile(curves, [0.025, 0.5, 0.975], axis=0, method="linear"),
        curves.max(axis=0),
    )
    return PredictiveCheck(scenario.output_times(), draws, curves, q_min, q025, q50, q975, q_max)
