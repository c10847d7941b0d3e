"""Bayesian fitting of the SIR epidemic model with random-walk Metropolis-Hastings."""

from .errors import ConfigError, InvalidInputError, NumericalError, ResourceError
from .inference import (
    Dataset,
    LogPosterior,
    UniformPrior,
    log_likelihood,
    log_posterior,
    log_prior,
    simulate_observations,
)
from .mcmc import Chain, ChainSample, McmcConfig, acceptance_rate, run_chain, split_burn_in
from .sir import (
    Scenario,
    SirParams,
    SirState,
    Trajectory,
    derivatives,
    final_size,
    integrate,
    peak_susceptibles,
    r0,
    step_euler,
    step_rk4,
)
from .summary import (
    PosteriorSummary,
    credible_interval,
    derived_r0_samples,
    posterior_mean_std,
    posterior_predictive,
    summarize,
)

__version__ = "0.1.0"
