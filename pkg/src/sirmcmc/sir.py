"""SIR compartmental model and fixed-step integrators.

The population is split into susceptible, infectious and recovered
compartments with flows ``S -> I`` at rate ``beta*S*I/N`` and ``I -> R`` at
rate ``gamma*I``. States are kept as reals; the ODE is a continuous
approximation of the counts.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import InvalidInputError, NumericalError, ResourceError

logger = logging.getLogger(__name__)

MAX_STEPS = 10_000_000
# relative tolerance for the s+i+r == N check and for t_end/dt rounding
CONSERVATION_RTOL = 1e-9
GRID_RTOL = 1e-9

Method = Literal["euler", "rk4"]


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInputError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class SirParams:
    """Transmission rate ``beta`` and recovery rate ``gamma`` (per day).

    Only finiteness is enforced here. Random-walk proposals may step outside
    the positive quadrant and must still be representable so that the prior
    can reject them; operations that need positive rates check for it.
    """

    beta: float
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "beta", _check_finite("beta", self.beta))
        object.__setattr__(self, "gamma", _check_finite("gamma", self.gamma))

    @property
    def is_positive(self) -> bool:
        return self.beta > 0 and self.gamma > 0

    def as_array(self) -> np.ndarray:
        return np.array([self.beta, self.gamma])


@dataclass(frozen=True)
class SirState:
    s: float
    i: float
    r: float

    def __post_init__(self):
        for name in ("s", "i", "r"):
            object.__setattr__(self, name, _check_finite(name, getattr(self, name)))

    @property
    def total(self) -> float:
        return self.s + self.i + self.r

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.s, self.i, self.r)


@dataclass(frozen=True)
class Scenario:
    """Population, initial state and time grid for one integration.

    Parameters
    ----------
    population : float
        Total population ``N``. Must equal ``initial.s + initial.i + initial.r``.
    initial : SirState
        State at ``t = 0``.
    t_end : float
        Final time in days.
    dt : float
        Solver step in days. ``t_end / dt`` must be an integer to within 1e-9.
    obs_stride : int
        Number of solver steps between recorded outputs.
    max_steps : int
        Refuse to integrate grids with more steps than this.
    """

    population: float
    initial: SirState
    t_end: float
    dt: float
    obs_stride: int = 1
    max_steps: int = MAX_STEPS
    n_steps: int = field(init=False, repr=False)

    def __post_init__(self):
        population = _check_finite("population", self.population)
        t_end = _check_finite("t_end", self.t_end)
        dt = _check_finite("dt", self.dt)
        if population <= 0:
            raise InvalidInputError(f"population must be > 0, got {population}")
        if t_end <= 0:
            raise InvalidInputError(f"t_end must be > 0, got {t_end}")
        if dt <= 0 or dt > t_end:
            raise InvalidInputError(f"dt must satisfy 0 < dt <= t_end, got dt={dt}")
        init = self.initial
        if min(init.s, init.i, init.r) < 0:
            raise InvalidInputError(f"initial state has a negative compartment: {init}")
        if init.total != population:
            raise InvalidInputError(
                f"initial compartments sum to {init.total}, expected population {population}"
            )
        ratio = t_end / dt
        n_steps = round(ratio)
        if abs(ratio - n_steps) > GRID_RTOL * ratio:
            raise InvalidInputError(f"t_end={t_end} is not a whole number of dt={dt} steps")
        if int(self.obs_stride) != self.obs_stride or self.obs_stride < 1:
            raise InvalidInputError(f"obs_stride must be an integer >= 1, got {self.obs_stride}")
        if n_steps % int(self.obs_stride):
            raise InvalidInputError(
                f"{n_steps} solver steps is not a multiple of obs_stride={self.obs_stride}"
            )
        object.__setattr__(self, "population", population)
        object.__setattr__(self, "t_end", t_end)
        object.__setattr__(self, "dt", dt)
        object.__setattr__(self, "obs_stride", int(self.obs_stride))
        object.__setattr__(self, "n_steps", n_steps)

    @classmethod
    def from_infected(
        cls,
        population: float = 1000.0,
        i0: float = 10.0,
        t_end: float = 60.0,
        dt: float = 0.1,
        obs_stride: int = 10,
        **kwargs,
    ) -> "Scenario":
        """Outbreak seeded with ``i0`` infectious and nobody recovered.

        Defaults reproduce the synthetic experiment: N=1000, I0=10, 60 days,
        RK4 step 0.1 with daily output.
        """
        initial = SirState(population - i0, i0, 0.0)
        return cls(population, initial, t_end, dt, obs_stride, **kwargs)

    @property
    def output_interval(self) -> float:
        return self.obs_stride * self.dt

    @property
    def n_outputs(self) -> int:
        return self.n_steps // self.obs_stride + 1

    def output_times(self) -> np.ndarray:
        return np.arange(self.n_outputs) * self.output_interval


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded solution: ``times`` and the three compartment series."""

    times: np.ndarray
    s: np.ndarray
    i: np.ndarray
    r: np.ndarray

    def __post_init__(self):
        for name in ("times", "s", "i", "r"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        n = len(self.times)
        if n < 1 or not (len(self.s) == len(self.i) == len(self.r) == n):
            raise InvalidInputError("trajectory series must be non-empty and of equal length")
        if n > 1 and np.any(np.diff(self.times) <= 0):
            raise InvalidInputError("trajectory times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def states(self) -> list[SirState]:
        return [SirState(*row) for row in zip(self.s, self.i, self.r)]

    @property
    def final(self) -> SirState:
        return SirState(self.s[-1], self.i[-1], self.r[-1])


def derivatives(state: SirState, params: SirParams, population: float):
    """Rates of change ``(dS/dt, dI/dt, dR/dt)`` of the SIR system."""
    population = _check_finite("population", population)
    if population <= 0:
        raise InvalidInputError(f"population must be > 0, got {population}")
    return _rates(state.s, state.i, params.beta, params.gamma, population)


def _rates(s, i, beta, gamma, n):
    infection = beta * s * i / n
    recovery = gamma * i
    return -infection, infection - recovery, recovery


def _euler(s, i, r, beta, gamma, n, dt):
    ds, di, dr = _rates(s, i, beta, gamma, n)
    return s + ds * dt, i + di * dt, r + dr * dt


def _rk4(s, i, r, beta, gamma, n, dt):
    h = 0.5 * dt
    a1, b1, c1 = _rates(s, i, beta, gamma, n)
    a2, b2, c2 = _rates(s + h * a1, i + h * b1, beta, gamma, n)
    a3, b3, c3 = _rates(s + h * a2, i + h * b2, beta, gamma, n)
    a4, b4, c4 = _rates(s + dt * a3, i + dt * b3, beta, gamma, n)
    w = dt / 6.0
    return (
        s + w * (a1 + 2.0 * a2 + 2.0 * a3 + a4),
        i + w * (b1 + 2.0 * b2 + 2.0 * b3 + b4),
        r + w * (c1 + 2.0 * c2 + 2.0 * c3 + c4),
    )


_STEPPERS = {"euler": _euler, "rk4": _rk4}


def _check_step(dt: float) -> float:
    dt = _check_finite("dt", dt)
    if dt < 0:
        raise InvalidInputError(f"dt must be >= 0, got {dt}")
    return dt


def step_euler(state: SirState, params: SirParams, population: float, dt: float) -> SirState:
    """Advance ``state`` by one forward-Euler step of length ``dt``."""
    derivatives(state, params, population)
    dt = _check_step(dt)
    return SirState(*_euler(state.s, state.i, state.r, params.beta, params.gamma, population, dt))


def step_rk4(state: SirState, params: SirParams, population: float, dt: float) -> SirState:
    """Advance ``state`` by one classical Runge-Kutta step (weights 1, 2, 2, 1)."""
    derivatives(state, params, population)
    dt = _check_step(dt)
    return SirState(*_rk4(state.s, state.i, state.r, params.beta, params.gamma, population, dt))


def integrate(scenario: Scenario, params: SirParams, method: Method = "rk4") -> Trajectory:
    """Integrate the SIR system over the scenario's grid.

    Returns the state at every ``obs_stride``-th solver step, from ``t = 0``
    through ``t_end`` inclusive.

    Raises
    ------
    InvalidInputError
        If ``method`` is unknown or a rate is negative.
    ResourceError
        If the grid has more than ``scenario.max_steps`` steps.
    NumericalError
        If a compartment undershoots below ``-1e-9 * N`` (``dt`` too large)
        or the state becomes non-finite.
    """
    try:
        stepper = _STEPPERS[method]
    except KeyError:
        raise InvalidInputError(f"unknown method {method!r}; expected 'euler' or 'rk4'") from None
    if params.beta < 0 or params.gamma < 0:
        raise InvalidInputError(f"rates must be non-negative, got {params}")
    if scenario.n_steps > scenario.max_steps:
        raise ResourceError(
            f"{scenario.n_steps} solver steps exceeds the limit of {scenario.max_steps}"
        )

    beta, gamma, n, dt = params.beta, params.gamma, scenario.population, scenario.dt
    stride = scenario.obs_stride
    floor = -CONSERVATION_RTOL * n
    s, i, r = scenario.initial.as_tuple()
    out = np.empty((scenario.n_outputs, 3))
    out[0] = (s, i, r)
    row = 1
    for k in range(1, scenario.n_steps + 1):
        s, i, r = stepper(s, i, r, beta, gamma, n, dt)
        if s < 0.0 or i < 0.0 or r < 0.0:
            s, i, r = _clamp(s, i, r, floor, k * dt)
        if k % stride == 0:
            out[row] = (s, i, r)
            row += 1
    if not np.all(np.isfinite(out)):
        raise NumericalError(f"non-finite state while integrating with {params}")
    return Trajectory(scenario.output_times(), out[:, 0], out[:, 1], out[:, 2])


def _clamp(s, i, r, floor, t):
    if min(s, i, r) < floor or math.isnan(s + i + r):
        raise NumericalError(
            f"compartment undershoot at t={t:g}: (s, i, r)=({s:g}, {i:g}, {r:g}); reduce dt"
        )
    logger.warning("clamping round-off undershoot to zero at t=%g: (%g, %g, %g)", t, s, i, r)
    return max(s, 0.0), max(i, 0.0), max(r, 0.0)


def r0(params: SirParams) -> float:
    """Basic reproduction number ``beta / gamma``."""
    if params.gamma <= 0:
        raise InvalidInputError(f"gamma must be > 0, got {params.gamma}")
    return params.beta / params.gamma


def peak_susceptibles(params: SirParams, population: float) -> float:
    """Susceptible count ``N * gamma / beta`` at which ``I(t)`` turns over."""
    if params.beta <= 0:
        raise InvalidInputError(f"beta must be > 0, got {params.beta}")
    return population * params.gamma / params.beta


def final_size(traj: Trajectory, population: float) -> float:
    """Fraction of the population recovered at the last recorded time."""
    return float(traj.r[-1]) / population
