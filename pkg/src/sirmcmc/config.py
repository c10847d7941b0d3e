"""Run configuration for the command-line pipeline.

Config files are flat ``key = value`` text; ``#`` starts a comment and
blank lines are ignored. Keys may use ``-`` or ``_``. Unknown keys are an
error. Every key also exists as a ``--kebab-case`` command-line flag, and
values resolve as flag, then file, then built-in default.

Keys and defaults::

    population = 1000      # N
    i0 = 10                # initially infectious
    t_end = 60             # days
    dt = 0.1               # RK4 step, days
    obs_stride = 10        # solver steps per recorded output
    sigma = 15             # noise std dev, known to the likelihood
    beta_true = 0.3        # data-generating rates
    gamma_true = 0.1
    beta_lo = 0.05         # uniform prior box, closed bounds
    beta_hi = 1.0
    gamma_lo = 0.01
    gamma_hi = 0.5
    n_iter = 8000
    step_delta = 0.015
    burn_in = 2000
    seed_data = 42         # noise stream
    seed_chain = 43        # MCMC and predictive-draw streams
    init_beta = none       # none means prior-box midpoint
    init_gamma = none
    n_draws = 100          # posterior predictive draws
    level = 0.95           # credible level
    rng = PCG64            # pinned generator algorithm
    data = data.csv        # file paths
    chain = chain.csv
    summary = summary.json
    samples = samples.csv
    ppc = ppc.csv
    draws = none           # optional per-draw curves CSV
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any

from .errors import ConfigError, InvalidInputError
from .inference import UniformPrior
from .mcmc import McmcConfig
from .rng import ALGORITHM
from .sir import Scenario, SirParams


@dataclass(frozen=True)
class RunConfig:
    population: float = 1000.0
    i0: float = 10.0
    t_end: float = 60.0
    dt: float = 0.1
    obs_stride: int = 10
    sigma: float = 15.0
    beta_true: float = 0.3
    gamma_true: float = 0.1
    beta_lo: float = 0.05
    beta_hi: float = 1.0
    gamma_lo: float = 0.01
    gamma_hi: float = 0.5
    n_iter: int = 8000
    step_delta: float = 0.015
    burn_in: int = 2000
    seed_data: int = 42
    seed_chain: int = 43
    init_beta: float | None = None
    init_gamma: float | None = None
    n_draws: int = 100
    level: float = 0.95
    rng: str = ALGORITHM
    data: str = "data.csv"
    chain: str = "chain.csv"
    summary: str = "summary.json"
    samples: str = "samples.csv"
    ppc: str = "ppc.csv"
    draws: str | None = None

    def scenario(self) -> Scenario:
        return Scenario.from_infected(self.population, self.i0, self.t_end, self.dt, self.obs_stride)

    def prior(self) -> UniformPrior:
        return UniformPrior(self.beta_lo, self.beta_hi, self.gamma_lo, self.gamma_hi)

    def true_params(self) -> SirParams:
        return SirParams(self.beta_true, self.gamma_true)

    def init(self) -> SirParams:
        mid = self.prior().midpoint()
        return SirParams(
            mid.beta if self.init_beta is None else self.init_beta,
            mid.gamma if self.init_gamma is None else self.init_gamma,
        )

    def mcmc(self) -> McmcConfig:
        return McmcConfig(
            n_iter=self.n_iter,
            step_delta=self.step_delta,
            burn_in=self.burn_in,
            seed=self.seed_chain,
            init=self.init(),
        )

    def validate(self) -> "RunConfig":
        """Build every component once; raise ConfigError naming all failures."""
        problems = []
        if self.rng != ALGORITHM:
            problems.append(f"rng: only {ALGORITHM!r} is supported, got {self.rng!r}")
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            problems.append(f"sigma: must be >= 0, got {self.sigma!r}")
        if not 0 < self.level < 1:
            problems.append(f"level: must lie in (0, 1), got {self.level!r}")
        if self.n_draws < 1:
            problems.append(f"n_draws: must be >= 1, got {self.n_draws!r}")
        for name in ("seed_data", "seed_chain"):
            if getattr(self, name) < 0:
                problems.append(f"{name}: must be >= 0")
        for label, build in (("scenario", self.scenario), ("prior", self.prior), ("mcmc", self.mcmc)):
            try:
                build()
            except (InvalidInputError, ConfigError) as exc:
                problems.append(f"{label}: {exc}")
        try:
            if not self.prior().contains(self.init()):
                problems.append(f"init: {self.init()} lies outside the prior support")
        except InvalidInputError:
            pass
        if problems:
            raise ConfigError("invalid configuration:\n  " + "\n  ".join(problems))
        return self


FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def normalize_key(key: str) -> str:
    return key.strip().replace("-", "_")


def coerce(key: str, text: str) -> Any:
    """Parse ``text`` into the type of RunConfig field ``key``."""
    kind = FIELD_TYPES[key]
    text = text.strip()
    optional = "None" in kind
    if optional and text.lower() in ("", "none"):
        return None
    try:
        if kind.startswith("int"):
            return int(text)
        if kind.startswith("float"):
            value = float(text)
            if not math.isfinite(value):
                raise ValueError(text)
            return value
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {text!r} as {kind.split(' ')[0]}") from None
    return text


def parse_config_text(text: str, source: str = "<config>") -> dict[str, Any]:
    values: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = line.split("=", 1)
        key = normalize_key(key)
        if key not in FIELD_TYPES:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        values[key] = coerce(key, value)
    return values


def load_config_file(path) -> dict[str, Any]:
    path = Path(path)
    return parse_config_text(path.read_text(encoding="utf-8"), str(path))


def resolve(file_values: dict[str, Any] | None = None, overrides: dict[str, Any] | None = None) -> RunConfig:
    """Defaults, then config-file values, then explicit overrides."""
    merged: dict[str, Any] = {}
    for layer in (file_values or {}, overrides or {}):
        for key, value in layer.items():
            key = normalize_key(key)
            if key not in FIELD_TYPES:
                raise ConfigError(f"unknown key {key!r}")
            merged[key] = value
    return dataclasses.replace(RunConfig(), **merged)
