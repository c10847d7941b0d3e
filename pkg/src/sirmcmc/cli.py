"""Command-line pipeline: ``simulate``, ``fit``, ``summarize``, ``ppc``.

Exit codes: 0 success, 2 configuration or validation error, 3 I/O error,
4 numerical failure.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import fields
from typing import TextIO

from . import formats
from .config import RunConfig, coerce, load_config_file, resolve
from .errors import ConfigError, InvalidInputError, NumericalError, ResourceError
from .inference import Dataset, LogPosterior, noisy_curve
from .mcmc import HEALTHY_BAND, Chain, McmcConfig, acceptance_rate, is_healthy, run_chain, split_burn_in
from .rng import PPC_STREAM
from .sir import SirParams
from .summary import derived_r0_samples, posterior_predictive, summarize

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4


def cmd_simulate(config: RunConfig, out_path=None, stream: TextIO | None = None) -> tuple:
    """Write synthetic ``t,i_obs`` data; returns ``(times, observed)``."""
    out = stream or sys.stdout
    out_path = config.data if out_path is None else out_path
    times, observed = noisy_curve(config.scenario(), config.true_params(), config.sigma, config.seed_data)
    formats.write_dataset(out_path, times, observed)
    print(f"wrote {len(times)} observations to {out_path}", file=out)
    return times, observed


def load_dataset(config: RunConfig, data_path=None) -> Dataset:
    times, observed = formats.read_dataset(config.data if data_path is None else data_path)
    return Dataset(times, observed, config.sigma)


def band_label() -> str:
    lo, hi = HEALTHY_BAND
    return f"[{lo:.2f}, {hi:.2f}]"


def cmd_fit(config: RunConfig, data_path=None, chain_out=None, stream: TextIO | None = None) -> tuple[Chain, LogPosterior]:
    """Run the sampler on a dataset file and write the chain CSV."""
    out = stream or sys.stdout
    chain_out = config.chain if chain_out is None else chain_out
    data = load_dataset(config, data_path)
    target = LogPosterior(data, config.scenario(), config.prior())
    chain = run_chain(config.mcmc(), target)
    formats.write_chain(chain_out, chain)
    rate = acceptance_rate(chain, "all")
    rate_post = acceptance_rate(chain, "post_burn_in")
    verdict = "inside" if is_healthy(rate) else "outside"
    print(f"wrote {len(chain)} chain rows to {chain_out}", file=out)
    print(
        f"acceptance rate: {rate:.4f} (post burn-in {rate_post:.4f}); "
        f"healthy band {band_label()}: {verdict}",
        file=out,
    )
    print(f"-inf likelihood events: {target.n_failures}", file=out)
    return chain, target


def load_chain(config: RunConfig, chain_path=None, burn_in: int | None = None) -> Chain:
    cols = formats.read_chain(config.chain if chain_path is None else chain_path)
    n_iter = len(cols["iter"]) - 1
    burn_in = config.burn_in if burn_in is None else burn_in
    if n_iter < 1 or not 0 <= burn_in < n_iter:
        raise ConfigError(
            f"burn_in must satisfy 0 <= burn_in < {n_iter} for a chain with {n_iter + 1} rows, got {burn_in}"
        )
    mc = McmcConfig(
        n_iter=n_iter,
        step_delta=config.step_delta,
        burn_in=burn_in,
        seed=config.seed_chain,
        init=SirParams(cols["beta"][0], cols["gamma"][0]),
    )
    return Chain(cols["beta"], cols["gamma"], cols["log_post"], cols["accepted"], mc)


def summary_dict(chain: Chain, level: float) -> dict:
    samples = split_burn_in(chain)
    out = summarize(samples, level).as_dict()
    out["acceptance_rate"] = acceptance_rate(chain, "all")
    return out


def cmd_summarize(
    config: RunConfig,
    chain_path=None,
    burn_in: int | None = None,
    level: float | None = None,
    summary_out=None,
    samples_out=None,
    stream: TextIO | None = None,
) -> dict:
    """Write the posterior summary JSON and the post-burn-in ``beta,gamma,r0`` samples."""
    out = stream or sys.stdout
    level = config.level if level is None else level
    summary_out = config.summary if summary_out is None else summary_out
    samples_out = config.samples if samples_out is None else samples_out
    chain = load_chain(config, chain_path, burn_in)
    result = summary_dict(chain, level)
    formats.write_summary(summary_out, result)
    samples = split_burn_in(chain)
    formats.write_samples(samples_out, samples, derived_r0_samples(samples))
    print(f"{'':6} {'mean':>10} {'std':>10} {'ci_low':>10} {'ci_high':>10}", file=out)
    for name in ("beta", "gamma", "r0"):
        q = result[name]
        print(
            f"{name:6} {q['mean']:10.4f} {q['std']:10.4f} {q['ci_low']:10.4f} {q['ci_high']:10.4f}",
            file=out,
        )
    print(f"{result['n_samples']} samples, {level:.0%} equal-tailed intervals", file=out)
    return result


def cmd_ppc(
    config: RunConfig,
    chain_path=None,
    data_path=None,
    n_draws: int | None = None,
    out_path=None,
    draws_out=None,
    stream: TextIO | None = None,
):
    """Write the posterior predictive band CSV and report data coverage."""
    out = stream or sys.stdout
    n_draws = config.n_draws if n_draws is None else n_draws
    out_path = config.ppc if out_path is None else out_path
    draws_out = config.draws if draws_out is None else draws_out
    chain = load_chain(config, chain_path)
    data = load_dataset(config, data_path)
    scenario = config.scenario()
    check = posterior_predictive(split_burn_in(chain), n_draws, scenario, config.seed_chain, PPC_STREAM)
    formats.write_ppc(out_path, check.band())
    if draws_out:
        formats.write_draws(draws_out, check.times, check.curves)
    frac = check.inside_fraction(data, scenario)
    print(f"wrote {len(check.times)}-point band from {n_draws} draws to {out_path}", file=out)
    print(f"observations inside envelope +/- 2 sigma: {frac:.3f}", file=out)
    return check, frac


_COMMAND_OUT = {"simulate": "data", "fit": "chain", "summarize": "summary", "ppc": "ppc"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file")
    for f in fields(RunConfig):
        common.add_argument(
            "--" + f.name.replace("_", "-"), dest=f.name, default=argparse.SUPPRESS, metavar="VALUE"
        )
    common.add_argument("--out", default=argparse.SUPPRESS, help="output path for this command")

    parser = argparse.ArgumentParser(prog="sirmcmc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common], help="generate noisy synthetic data")
    sub.add_parser("fit", parents=[common], help="sample the posterior with Metropolis-Hastings")
    p = sub.add_parser("summarize", parents=[common], help="posterior summary and sample export")
    p.add_argument("--samples-out", dest="samples", default=argparse.SUPPRESS)
    p = sub.add_parser("ppc", parents=[common], help="posterior predictive band")
    p.add_argument("--draws-out", dest="draws", default=argparse.SUPPRESS)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    given = vars(args).copy()
    command = given.pop("command")
    path = given.pop("config", None)
    if "out" in given:
        given[_COMMAND_OUT[command]] = given.pop("out")
    overrides = {key: coerce(key, value) for key, value in given.items()}
    file_values = load_config_file(path) if path else {}
    return resolve(file_values, overrides).validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        if args.command == "simulate":
            cmd_simulate(config)
        elif args.command == "fit":
            cmd_fit(config)
        elif args.command == "summarize":
            cmd_summarize(config)
        else:
            cmd_ppc(config)
    except (ConfigError, InvalidInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (NumericalError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
