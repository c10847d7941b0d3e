"""Random-walk Metropolis-Hastings over ``(beta, gamma)``.

Proposals add independent ``Normal(0, delta**2)`` steps to both rates. The
proposal is symmetric, so a candidate is accepted with probability
``min(1, p(candidate) / p(current))`` and any normalising constant of the
target drops out. Comparisons are done in log space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from .errors import ConfigError, InvalidInputError
from .rng import make_rng
from .sir import SirParams

Target = Callable[[SirParams], float]
Proposal = Callable[[SirParams, np.random.Generator], SirParams]

# acceptance-rate band considered healthy for a 2-D random-walk sampler
HEALTHY_BAND = (0.20, 0.40)


@dataclass(frozen=True)
class McmcConfig:
    """Sampler settings.

    ``step_delta_gamma`` overrides the proposal scale for ``gamma`` only;
    by default both rates share ``step_delta``. Setting it to 0 pins
    ``gamma`` at its initial value.
    """

    n_iter: int = 8000
    step_delta: float = 0.015
    burn_in: int = 2000
    seed: int = 43
    init: SirParams = field(default_factory=lambda: SirParams(0.525, 0.255))
    step_delta_gamma: float | None = None
    n_chains: int = 1

    def __post_init__(self):
        if int(self.n_iter) != self.n_iter or self.n_iter < 1:
            raise ConfigError(f"n_iter must be a positive integer, got {self.n_iter!r}")
        if int(self.burn_in) != self.burn_in or not 0 <= self.burn_in < self.n_iter:
            raise ConfigError(f"burn_in must satisfy 0 <= burn_in < n_iter, got {self.burn_in!r}")
        if not (math.isfinite(self.step_delta) and self.step_delta > 0):
            raise ConfigError(f"step_delta must be > 0, got {self.step_delta!r}")
        if self.step_delta_gamma is not None and not (
            math.isfinite(self.step_delta_gamma) and self.step_delta_gamma >= 0
        ):
            raise ConfigError(f"step_delta_gamma must be >= 0, got {self.step_delta_gamma!r}")
        if int(self.n_chains) != self.n_chains or self.n_chains < 1:
            raise ConfigError(f"n_chains must be a positive integer, got {self.n_chains!r}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed!r}")

    @property
    def deltas(self) -> tuple[float, float]:
        dg = self.step_delta if self.step_delta_gamma is None else self.step_delta_gamma
        return self.step_delta, dg


@dataclass(frozen=True)
class ChainSample:
    params: SirParams
    log_post: float
    accepted: bool


@dataclass(frozen=True, eq=False)
class Chain:
    """Sampler output with ``n_iter + 1`` rows; row 0 is the initial state.

    ``accepted[0]`` is always False. A rejected row repeats the previous
    parameters exactly.
    """

    beta: np.ndarray
    gamma: np.ndarray
    log_post: np.ndarray
    accepted: np.ndarray
    config: McmcConfig

    def __post_init__(self):
        n = self.config.n_iter + 1
        for name, dtype in (("beta", float), ("gamma", float), ("log_post", float), ("accepted", bool)):
            arr = np.array(getattr(self, name), dtype=dtype)
            if arr.shape != (n,):
                raise InvalidInputError(f"chain column {name!r} must have {n} rows, got {arr.shape}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return len(self.beta)

    @property
    def samples(self) -> list[ChainSample]:
        return [
            ChainSample(SirParams(b, g), float(lp), bool(a))
            for b, g, lp, a in zip(self.beta, self.gamma, self.log_post, self.accepted)
        ]

    def params_at(self, k: int) -> SirParams:
        return SirParams(self.beta[k], self.gamma[k])


def propose(
    current: SirParams,
    step_delta: float,
    rng: np.random.Generator,
    step_delta_gamma: float | None = None,
) -> SirParams:
    """Gaussian random-walk candidate around ``current``.

    Draws two standard normals from ``rng`` (beta first). Candidates outside
    the prior support are returned as-is; the target rejects them.
    """
    dg = step_delta if step_delta_gamma is None else step_delta_gamma
    zb, zg = rng.standard_normal(2)
    return SirParams(current.beta + step_delta * zb, current.gamma + dg * zg)


def acceptance_log_ratio(log_post_new: float, log_post_old: float) -> float:
    """``log(alpha) = min(0, log_post_new - log_post_old)``; ``-inf`` never accepts."""
    if math.isnan(log_post_new) or log_post_new == -math.inf:
        return -math.inf
    return min(0.0, log_post_new - log_post_old)


def accept(log_alpha: float, u: float) -> bool:
    """Metropolis decision for a uniform draw ``u`` in [0, 1)."""
    log_u = math.log(u) if u > 0.0 else -math.inf
    return log_u < log_alpha


def run_chain(
    config: McmcConfig,
    target: Target,
    *,
    chain_index: int = 0,
    proposal: Proposal | None = None,
) -> Chain:
    """Run one Metropolis-Hastings chain of ``config.n_iter`` iterations.

    The target is evaluated once for the initial state and once per
    proposal; the current state's value is cached. Each iteration consumes
    the proposal draws followed by one uniform, all from the stream
    ``(config.seed, chain_index)``.

    Parameters
    ----------
    config : McmcConfig
        Iteration count, step size, seed and initial state.
    target : callable
        Unnormalised log-density of ``SirParams``; may return ``-inf``.
    chain_index : int
        Stream id. Chains with different indices are independent.
    proposal : callable, optional
        ``proposal(current, rng) -> SirParams``. Must be symmetric. Defaults
        to the Gaussian random walk with ``config.deltas``.

    Raises
    ------
    ConfigError
        If the target is not finite at ``config.init``.
    """
    rng = make_rng(config.seed, chain_index)
    if proposal is None:
        db, dg = config.deltas

        def proposal(cur, g):
            return propose(cur, db, g, dg)

    current = config.init
    lp_current = float(target(current))
    if not math.isfinite(lp_current):
        raise ConfigError(
            f"initial state {current} has log-posterior {lp_current}; it must lie inside the prior support"
        )

    n = config.n_iter
    beta = np.empty(n + 1)
    gamma = np.empty(n + 1)
    log_post = np.empty(n + 1)
    accepted = np.zeros(n + 1, dtype=bool)
    beta[0], gamma[0], log_post[0] = current.beta, current.gamma, lp_current

    for t in range(1, n + 1):
        candidate = proposal(current, rng)
        lp_candidate = float(target(candidate))
        log_alpha = acceptance_log_ratio(lp_candidate, lp_current)
        if accept(log_alpha, rng.random()):
            current, lp_current = candidate, lp_candidate
            accepted[t] = True
        beta[t], gamma[t], log_post[t] = current.beta, current.gamma, lp_current

    return Chain(beta, gamma, log_post, accepted, config)


def run_chains(config: McmcConfig, target: Target) -> list[Chain]:
    """``config.n_chains`` independent chains on streams 0, 1, ..., in order."""
    return [run_chain(config, target, chain_index=k) for k in range(config.n_chains)]


def split_burn_in(chain: Chain) -> np.ndarray:
    """Post-burn-in samples as an ``(n_iter - burn_in, 2)`` array of ``(beta, gamma)``.

    Rows ``0..burn_in`` (the initial state and the first ``burn_in`` iterates)
    are dropped.
    """
    b = chain.config.burn_in
    return np.column_stack([chain.beta[b + 1 :], chain.gamma[b + 1 :]])


def acceptance_rate(chain: Chain, which: Literal["all", "post_burn_in"] = "all") -> float:
    """Fraction of iterations whose proposal was accepted."""
    if which == "all":
        flags = chain.accepted[1:]
    elif which == "post_burn_in":
        flags = chain.accepted[chain.config.burn_in + 1 :]
    else:
        raise InvalidInputError(f"unknown range {which!r}; expected 'all' or 'post_burn_in'")
    return float(np.mean(flags))


def is_healthy(rate: float) -> bool:
    lo, hi = HEALTHY_BAND
    return lo <= rate <= hi
