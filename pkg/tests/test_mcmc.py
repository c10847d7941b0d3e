import math

import numpy as np
import pytest

from sirmcmc.errors import ConfigError, InvalidInputError
from sirmcmc.mcmc import (
    HEALTHY_BAND,
    Chain,
    McmcConfig,
    accept,
    acceptance_log_ratio,
    acceptance_rate,
    is_healthy,
    propose,
    run_chain,
    run_chains,
    split_burn_in,
)
from sirmcmc.rng import make_rng
from sirmcmc.sir import SirParams

CENTER = SirParams(0.525, 0.255)


def box_target(params):
    inside = 0.05 <= params.beta <= 1.0 and 0.01 <= params.gamma <= 0.5
    return 0.0 if inside else -math.inf


class Counting:
    def __init__(self, fn):
        self.fn = fn
        self.calls = 0

    def __call__(self, params):
        self.calls += 1
        return self.fn(params)


class TestPropose:
    def test_zero_step_returns_current(self):
        assert propose(CENTER, 0.0, make_rng(1)) == CENTER

    def test_same_generator_state_same_candidate(self):
        assert propose(CENTER, 0.015, make_rng(5)) == propose(CENTER, 0.015, make_rng(5))

    def test_step_scale(self):
        rng = make_rng(11)
        steps = np.array([propose(CENTER, 0.015, rng).as_array() for _ in range(100_000)]) - CENTER.as_array()
        assert np.std(steps[:, 0]) == pytest.approx(0.015, rel=0.02)
        assert np.std(steps[:, 1]) == pytest.approx(0.015, rel=0.02)
        assert abs(np.corrcoef(steps.T)[0, 1]) < 0.01

    def test_gamma_step_override(self):
        cand = propose(CENTER, 0.1, make_rng(3), step_delta_gamma=0.0)
        assert cand.gamma == CENTER.gamma and cand.beta != CENTER.beta


class TestAcceptanceRule:
    def test_equal(self):
        assert acceptance_log_ratio(-10.0, -10.0) == 0.0

    def test_uphill_always(self):
        assert acceptance_log_ratio(-5.0, -10.0) == 0.0

    def test_half(self):
        assert acceptance_log_ratio(-10.0 + math.log(0.5), -10.0) == pytest.approx(math.log(0.5), abs=1e-12)

    @pytest.mark.parametrize("new", [-math.inf, math.nan])
    def test_impossible_never_accepted(self, new):
        log_alpha = acceptance_log_ratio(new, -1.0)
        assert log_alpha == -math.inf
        assert not accept(log_alpha, 0.0)

    def test_accept_compares_in_log_space(self):
        assert accept(math.log(0.5), 0.49)
        assert not accept(math.log(0.5), 0.51)
        assert accept(0.0, 0.0)


class TestConfig:
    def test_defaults(self):
        c = McmcConfig()
        assert (c.n_iter, c.step_delta, c.burn_in) == (8000, 0.015, 2000)
        assert c.init == CENTER
        assert c.deltas == (0.015, 0.015)

    @pytest.mark.parametrize(
        "kw",
        [{"n_iter": 0}, {"burn_in": 8000}, {"burn_in": -1}, {"step_delta": 0.0},
         {"step_delta_gamma": -1.0}, {"n_chains": 0}, {"seed": -3}],
    )
    def test_invalid(self, kw):
        with pytest.raises(ConfigError):
            McmcConfig(**kw)


class TestRunChain:
    def test_flat_target_accepts_nearly_everything(self):
        chain = run_chain(McmcConfig(n_iter=5000, step_delta=0.001, burn_in=0, seed=1), box_target)
        assert acceptance_rate(chain) > 0.99

    def test_structure_and_copy_on_reject(self):
        config = McmcConfig(n_iter=2000, step_delta=0.2, burn_in=100, seed=2)
        target = Counting(box_target)
        chain = run_chain(config, target)
        assert len(chain) == 2001
        assert chain.params_at(0) == config.init
        assert not chain.accepted[0]
        rejected = np.flatnonzero(~chain.accepted[1:]) + 1
        assert len(rejected) > 0
        assert np.array_equal(chain.beta[rejected], chain.beta[rejected - 1])
        assert np.array_equal(chain.gamma[rejected], chain.gamma[rejected - 1])
        assert np.all(np.isfinite(chain.log_post))
        # once for the initial state, once per proposal
        assert target.calls == config.n_iter + 1

    def test_samples_view(self):
        chain = run_chain(McmcConfig(n_iter=10, burn_in=0, seed=2), box_target)
        samples = chain.samples
        assert len(samples) == 11
        assert samples[0].params == CENTER and samples[0].accepted is False

    def test_deterministic(self):
        config = McmcConfig(n_iter=500, step_delta=0.05, burn_in=0, seed=9)
        a, b = run_chain(config, box_target), run_chain(config, box_target)
        for col in ("beta", "gamma", "log_post", "accepted"):
            assert getattr(a, col).tobytes() == getattr(b, col).tobytes()

    def test_streams_are_independent(self):
        config = McmcConfig(n_iter=200, step_delta=0.05, burn_in=0, seed=9, n_chains=3)
        chains = run_chains(config, box_target)
        assert len(chains) == 3
        assert not np.array_equal(chains[0].beta, chains[1].beta)
        assert np.array_equal(chains[1].beta, run_chain(config, box_target, chain_index=1).beta)

    def test_init_outside_support(self):
        with pytest.raises(ConfigError):
            run_chain(McmcConfig(init=SirParams(2.0, 0.1)), box_target)

    def test_standard_normal_target(self):
        config = McmcConfig(
            n_iter=100_000, step_delta=1.0, step_delta_gamma=0.0, burn_in=1000,
            seed=5, init=SirParams(0.0, 0.1),
        )
        chain = run_chain(config, lambda p: -0.5 * p.beta**2)
        x = split_burn_in(chain)[:, 0]
        assert abs(np.mean(x)) < 0.05
        assert np.var(x) == pytest.approx(1.0, rel=0.10)
        assert np.all(chain.gamma == 0.1)


@pytest.fixture(scope="module")
def chain():
    return run_chain(McmcConfig(n_iter=100, step_delta=0.05, burn_in=0, seed=4), box_target)


class TestSplitAndRate:
    def rebuild(self, chain, burn_in):
        config = McmcConfig(n_iter=chain.config.n_iter, burn_in=burn_in, init=chain.config.init)
        return Chain(chain.beta, chain.gamma, chain.log_post, chain.accepted, config)

    def test_no_burn_in_keeps_all_iterates(self, chain):
        kept = split_burn_in(chain)
        assert kept.shape == (100, 2)
        assert kept[0, 0] == chain.beta[1]

    def test_paper_split(self):
        chain = run_chain(McmcConfig(n_iter=8000, burn_in=2000, seed=1), box_target)
        assert len(split_burn_in(chain)) == 6000

    def test_last_sample_only(self, chain):
        kept = split_burn_in(self.rebuild(chain, 99))
        assert kept.shape == (1, 2) and kept[0, 0] == chain.beta[-1]

    def test_all_rejected(self):
        chain = run_chain(
            McmcConfig(n_iter=50, burn_in=0, seed=1),
            lambda p: 0.0 if p == CENTER else -math.inf,
        )
        assert acceptance_rate(chain) == 0.0
        assert acceptance_rate(chain, "post_burn_in") == 0.0

    def test_post_burn_in_range(self, chain):
        c = self.rebuild(chain, 50)
        assert acceptance_rate(c, "post_burn_in") == pytest.approx(np.mean(chain.accepted[51:]))
        with pytest.raises(InvalidInputError):
            acceptance_rate(c, "first_half")

    def test_band(self):
        assert HEALTHY_BAND == (0.20, 0.40)
        assert is_healthy(0.3) and not is_healthy(0.1) and not is_healthy(0.45)


def test_shifted_target_gives_identical_chain():
    config = McmcConfig(n_iter=20_000, step_delta=1.0, step_delta_gamma=0.0, burn_in=0, seed=8,
                        init=SirParams(0.0, 1.0))
    a = run_chain(config, lambda p: -0.5 * p.beta**2)
    b = run_chain(config, lambda p: -0.5 * p.beta**2 + 1000.0)
    assert a.beta.tobytes() == b.beta.tobytes()
    assert a.accepted.tobytes() == b.accepted.tobytes()
