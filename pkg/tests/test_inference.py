import math

import numpy as np
import pytest

from sirmcmc import inference
from sirmcmc.errors import InvalidInputError, NumericalError
from sirmcmc.inference import (
    Dataset,
    LogPosterior,
    UniformPrior,
    log_likelihood,
    log_posterior,
    log_prior,
    simulate_observations,
)
from sirmcmc.mcmc import acceptance_log_ratio
from sirmcmc.sir import Scenario, SirParams, integrate

TRUE = SirParams(0.3, 0.1)
PRIOR = UniformPrior(0.05, 1.0, 0.01, 0.5)


@pytest.fixture(scope="module")
def scenario():
    return Scenario.from_infected()


@pytest.fixture(scope="module")
def noisy(scenario):
    return simulate_observations(scenario, TRUE, 15.0, seed=42)


@pytest.fixture(scope="module")
def exact(scenario):
    return simulate_observations(scenario, TRUE, 0.0, seed=0, likelihood_sigma=15.0)


def naive_log_likelihood(times, observed, sigma, beta, gamma, dt=1e-4):
    """Euler at a fine step, residuals accumulated from the last day backwards."""
    s, i, r, n = 990.0, 10.0, 0.0, 1000.0
    curve = {0: i}
    per_day = round(1 / dt)
    for day in range(1, int(max(times)) + 1):
        for _ in range(per_day):
            new_inf = beta * s * i / n
            s, i, r = s - new_inf * dt, i + (new_inf - gamma * i) * dt, r + gamma * i * dt
        curve[day] = i
    total = 0.0
    for t, y in reversed(list(zip(times, observed))):
        total += ((y - curve[int(round(t))]) / sigma) ** 2
    return -0.5 * total


class TestSimulate:
    def test_noiseless_equals_model(self, scenario, exact):
        model = integrate(scenario, TRUE).i[:60]
        np.testing.assert_array_equal(exact.observed_i, model)

    def test_daily_points_zero_to_59(self, noisy):
        assert len(noisy) == 60
        np.testing.assert_array_equal(noisy.times, np.arange(60.0))
        assert noisy.sigma == 15.0

    def test_bit_identical_for_same_seed(self, scenario, noisy):
        again = simulate_observations(scenario, TRUE, 15.0, seed=42)
        assert again.observed_i.tobytes() == noisy.observed_i.tobytes()

    def test_seed_changes_noise(self, scenario, noisy):
        other = simulate_observations(scenario, TRUE, 15.0, seed=7)
        assert not np.array_equal(other.observed_i, noisy.observed_i)

    def test_include_end(self, scenario):
        d = simulate_observations(scenario, TRUE, 1.0, seed=1, include_end=True)
        assert len(d) == 61 and d.times[-1] == 60

    def test_noise_variance(self, scenario, exact):
        resid = np.concatenate([
            simulate_observations(scenario, TRUE, 15.0, seed=s).observed_i - exact.observed_i
            for s in range(167)
        ])
        assert len(resid) >= 10_000
        assert np.var(resid) == pytest.approx(225.0, rel=0.05)

    def test_zero_sigma_needs_likelihood_sigma(self, scenario):
        with pytest.raises(InvalidInputError):
            simulate_observations(scenario, TRUE, 0.0, seed=0)


class TestDataset:
    def test_needs_two_points(self):
        with pytest.raises(InvalidInputError):
            Dataset([0.0], [1.0], 1.0)

    def test_times_increasing(self):
        with pytest.raises(InvalidInputError):
            Dataset([0.0, 2.0, 1.0], [1.0, 2.0, 3.0], 1.0)

    @pytest.mark.parametrize("sigma", [0.0, -1.0, math.nan])
    def test_sigma_positive(self, sigma):
        with pytest.raises(InvalidInputError):
            Dataset([0.0, 1.0], [1.0, 2.0], sigma)

    def test_negative_counts_allowed(self):
        assert Dataset([0.0, 1.0], [-3.0, 2.0], 1.0).observed_i[0] == -3.0


class TestLikelihood:
    def test_perfect_fit_is_zero(self, scenario, exact):
        assert log_likelihood(exact, TRUE, scenario) == 0.0

    def test_one_sigma_residual(self, scenario, exact):
        model = exact.observed_i[:2]
        data = Dataset([0.0, 1.0], [model[0] + 15.0, model[1]], 15.0)
        assert log_likelihood(data, TRUE, scenario) == pytest.approx(-0.5, rel=1e-12)

    @pytest.mark.parametrize("params", [TRUE, SirParams(0.35, 0.12), SirParams(0.25, 0.08)])
    def test_matches_naive_reimplementation(self, scenario, noisy, params):
        ref = naive_log_likelihood(noisy.times, noisy.observed_i, noisy.sigma, params.beta, params.gamma)
        assert log_likelihood(noisy, params, scenario) == pytest.approx(ref, rel=1e-4)

    def test_off_grid_time_rejected(self, scenario):
        data = Dataset([0.0, 1.5], [10.0, 12.0], 1.0)
        with pytest.raises(InvalidInputError, match="not on the solver output grid"):
            log_likelihood(data, TRUE, scenario)

    def test_time_beyond_window_rejected(self, scenario):
        data = Dataset([0.0, 61.0], [10.0, 12.0], 1.0)
        with pytest.raises(InvalidInputError):
            log_likelihood(data, TRUE, scenario)

    def test_integrator_failure_is_minus_inf(self, scenario, noisy, monkeypatch):
        def boom(*args, **kwargs):
            raise NumericalError("undershoot")

        monkeypatch.setattr(inference, "integrate", boom)
        assert log_likelihood(noisy, TRUE, scenario) == -math.inf
        target = LogPosterior(noisy, scenario, PRIOR)
        assert target(TRUE) == -math.inf
        assert target.n_failures == 1


class TestPrior:
    def test_truth_inside(self):
        assert log_prior(TRUE, PRIOR) == 0.0

    def test_outside(self):
        assert log_prior(SirParams(1.5, 0.1), PRIOR) == -math.inf
        assert log_prior(SirParams(0.3, -0.1), PRIOR) == -math.inf

    @pytest.mark.parametrize("params", [SirParams(0.05, 0.1), SirParams(1.0, 0.5), SirParams(0.3, 0.01)])
    def test_bounds_are_closed(self, params):
        assert log_prior(params, PRIOR) == 0.0

    def test_default_prior_and_midpoint(self):
        assert UniformPrior() == PRIOR
        assert PRIOR.midpoint() == SirParams(0.525, 0.255)

    @pytest.mark.parametrize("bounds", [(0.0, 1.0, 0.01, 0.5), (0.5, 0.4, 0.01, 0.5), (0.05, 1.0, 0.2, 0.2)])
    def test_invalid_bounds(self, bounds):
        with pytest.raises(InvalidInputError):
            UniformPrior(*bounds)


class TestPosterior:
    def test_out_of_support_skips_solver(self, scenario, noisy, monkeypatch):
        calls = []
        real = inference.integrate
        monkeypatch.setattr(inference, "integrate", lambda *a, **k: calls.append(1) or real(*a, **k))
        assert log_posterior(SirParams(2.0, 0.1), noisy, scenario, PRIOR) == -math.inf
        assert calls == []
        log_posterior(TRUE, noisy, scenario, PRIOR)
        assert calls == [1]

    def test_counter_on_target(self, scenario, noisy):
        target = LogPosterior(noisy, scenario, PRIOR)
        target(SirParams(-0.1, 0.1))
        target(SirParams(0.3, 0.9))
        assert (target.n_calls, target.n_solves) == (2, 0)
        target(TRUE)
        assert (target.n_calls, target.n_solves, target.n_failures) == (3, 1, 0)

    def test_perfect_fit_posterior_is_zero(self, scenario, exact):
        assert log_posterior(TRUE, exact, scenario, PRIOR) == 0.0

    @pytest.mark.parametrize("params", [TRUE, SirParams(0.4, 0.2), SirParams(0.9, 0.45)])
    def test_flat_prior_adds_nothing(self, scenario, noisy, params):
        ll = log_likelihood(noisy, params, scenario)
        assert log_posterior(params, noisy, scenario, PRIOR) == ll
        assert LogPosterior(noisy, scenario, PRIOR)(params) == ll

    def test_prior_constant_leaves_ratio_unchanged(self, scenario, noisy):
        a = log_posterior(TRUE, noisy, scenario, PRIOR)
        b = log_posterior(SirParams(0.31, 0.1), noisy, scenario, PRIOR)
        c = -math.log((1.0 - 0.05) * (0.5 - 0.01))  # normalised uniform density
        assert acceptance_log_ratio(b + c, a + c) == pytest.approx(acceptance_log_ratio(b, a), abs=1e-9)


def test_grid_maximum_at_truth(scenario, exact):
    betas = np.linspace(0.05, 1.0, 50)
    gammas = np.linspace(0.01, 0.5, 50)
    ll_true = log_likelihood(exact, TRUE, scenario)
    grid = np.array([[log_likelihood(exact, SirParams(b, g), scenario) for g in gammas] for b in betas])
    assert np.all(grid <= ll_true)
    kb, kg = np.unravel_index(np.argmax(grid), grid.shape)
    assert abs(betas[kb] - TRUE.beta) <= betas[1] - betas[0]
    assert abs(gammas[kg] - TRUE.gamma) <= gammas[1] - gammas[0]
