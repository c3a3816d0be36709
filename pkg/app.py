# Filnavn: app.py
"""Kommandolinje til Laguerre-spektre, forsinkelsens Markov-parametre og eksperimenterne."""

import argparse
import json
import logging
import sys
from typing import List, Optional

import pandas as pd

from core.data.serialization import (
    read_signal,
    read_spectrum,
    write_estimate,
    write_markov,
    write_realization,
    write_report,
    write_signal,
    write_spectrum,
)
from core.data.validators import parse_int_range
from core.delay.estimation import EstimationMethod, estimate_delay
from core.delay.inversion import recover_markov
from core.delay.operator import DelaySpec, disc_realization, markov
from core.errors import ConfigurationError, LaguerreError, NumericalValidationError
from core.experiments.config import ExperimentConfig, SweepConfig
from core.experiments.disturbance import run_disturbance_trials
from core.experiments.figures import build_figures, write_figures
from core.experiments.reproduction import run_reproduction
from core.experiments.sweep import run_sweep
from core.laguerre.basis import Domain, LaguerreParams, make_grid, project, synthesize

logger = logging.getLogger("laguerre_delay")

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_IO = 0, 1, 2, 3


class UsageErrorParser(argparse.ArgumentParser):
    """argparse with exit code 1 for usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --- Hjælpefunktioner ---

def _params(args) -> LaguerreParams:
    if args.p is None:
        raise ConfigurationError("--p is required for this command")
    return LaguerreParams(args.p, args.domain or Domain.CONTINUOUS)


def _optional_params(args) -> Optional[LaguerreParams]:
    return _params(args) if args.p is not None else None


def _count(args, default: int = 25) -> int:
    return default if args.coeffs is None else args.coeffs


def _finish_experiment(report, args):
    """Writes the report (and figures) first, then validates, so failing runs still leave their data."""
    write_report(report, args.out, args.format)
    if args.figures:
        write_figures(build_figures(report), args.figures)
    report.validate()


# --- Kommandoer ---

def cmd_spectrum(args):
    domain = Domain.parse(args.domain or Domain.CONTINUOUS)
    signal, _ = read_signal(args.input, domain)
    spectrum = project(signal, _params(args), _count(args))
    write_spectrum(spectrum, args.out, args.format)


def cmd_synthesize(args):
    spectrum = read_spectrum(args.input, _optional_params(args))
    grid = make_grid(spectrum.params, count=len(spectrum), duration=args.duration, dt=args.dt)
    write_signal(synthesize(spectrum, grid), args.out)


def cmd_markov(args):
    if args.u or args.y:
        if not (args.u and args.y):
            raise ConfigurationError("--u and --y must be given together")
        params = _optional_params(args)
        u, y = read_spectrum(args.u, params), read_spectrum(args.y, params)
        write_markov(recover_markov(u, y, count=args.coeffs), args.out, args.format)
        return
    if args.tau is None:
        raise ConfigurationError("markov needs either --tau or the spectra --u and --y")
    spec = DelaySpec(_params(args), args.tau)
    if args.realization:
        write_realization(disc_realization(spec), args.out)
        return
    write_markov(markov(spec, _count(args)), args.out, args.format)


def cmd_estimate(args):
    params = _optional_params(args)
    u, y = read_spectrum(args.u, params), read_spectrum(args.y, params)
    m_range = parse_int_range(args.m_range) if args.m_range else None
    estimate = estimate_delay(u, y, m_range, EstimationMethod.parse(args.method))
    write_estimate(estimate, args.out, args.format or 'json')


def _experiment_overrides(args) -> dict:
    return {
        'domain': args.domain, 'p': args.p, 'tau': args.tau, 'coeff_count': args.coeffs,
        'm_range': args.m_range, 'seed': args.seed, 'input_coeffs': args.input_coeffs,
        'allow_unreliable': True if args.allow_unreliable else None,
    }


def cmd_reproduce(args):
    cfg = ExperimentConfig.from_profile(args.profile or 'reproduction', **_experiment_overrides(args))
    _finish_experiment(run_reproduction(cfg), args)


def cmd_disturb(args):
    overrides = _experiment_overrides(args)
    overrides.update(trials=args.trials, disturbance_bound=args.bound, input_offset=args.input_offset)
    cfg = ExperimentConfig.from_profile(args.profile or 'disturbance', **overrides)
    _finish_experiment(run_disturbance_trials(cfg), args)


def cmd_sweep(args):
    domain = Domain.parse(args.domain or Domain.DISCRETE)
    profile = args.profile or ('sweep_discrete' if domain is Domain.DISCRETE else 'sweep_continuous')
    cfg = SweepConfig.from_profile(
        profile, domain=args.domain, p_grid=args.p_grid, tau_grid=args.tau_grid,
        m_range=args.m_range, tolerance=args.tolerance, workers=args.workers,
    )
    _finish_experiment(run_sweep(cfg), args)


# --- Parser ---

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--domain", choices=["cont", "disc"], default=None)
    common.add_argument("--p", type=float, default=None, help="Laguerre parameter")
    common.add_argument("--coeffs", type=int, default=None, help="Number of Laguerre coefficients")
    common.add_argument("--out", type=str, default=None, help="Output file (stdout when omitted)")
    common.add_argument("--format", choices=["csv", "json"], default=None)

    experiment = argparse.ArgumentParser(add_help=False)
    experiment.add_argument("--profile", type=str, default=None, help="Profile in config/experiments/profiles.json")
    experiment.add_argument("--tau", type=float, default=None)
    experiment.add_argument("--m-range", dest="m_range", type=str, default=None, help="e.g. 1..5")
    experiment.add_argument("--seed", type=int, default=None)
    experiment.add_argument("--input-coeffs", dest="input_coeffs", type=str, default=None, help="e.g. 6,-3,2,-1")
    experiment.add_argument("--allow-unreliable", action="store_true", help="Allow more than 30 coefficients")
    experiment.add_argument("--figures", type=str, default=None, help="Directory for plotly JSON figures")

    parser = UsageErrorParser(prog="laguerre-delay", description=__doc__)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true")
    verbosity.add_argument("--quiet", "-q", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=UsageErrorParser)

    ps = sub.add_parser("spectrum", parents=[common], help="Project a sampled CSV signal onto the basis")
    ps.add_argument("input", type=str)
    ps.set_defaults(func=cmd_spectrum)

    py = sub.add_parser("synthesize", parents=[common], help="Sample the signal of a spectrum")
    py.add_argument("input", type=str)
    py.add_argument("--duration", type=float, default=None)
    py.add_argument("--dt", type=float, default=None)
    py.set_defaults(func=cmd_synthesize)

    pm = sub.add_parser("markov", parents=[common], help="Markov parameters of a delay, or recovered from spectra")
    pm.add_argument("--tau", type=float, default=None)
    pm.add_argument("--u", type=str, default=None, help="Input spectrum file")
    pm.add_argument("--y", type=str, default=None, help="Output spectrum file")
    pm.add_argument("--realization", action="store_true", help="Emit the discrete state-space realization")
    pm.set_defaults(func=cmd_markov)

    pe = sub.add_parser("estimate", parents=[common], help="Estimate the delay from input/output spectra")
    pe.add_argument("--u", type=str, required=True)
    pe.add_argument("--y", type=str, required=True)
    pe.add_argument("--m-range", dest="m_range", type=str, default=None)
    pe.add_argument("--method", choices=[m.value for m in EstimationMethod], default="three_term")
    pe.set_defaults(func=cmd_estimate)

    pr = sub.add_parser("reproduce", parents=[common, experiment], help="Delay pipeline on the reference example")
    pr.set_defaults(func=cmd_reproduce)

    pd_ = sub.add_parser("disturb", parents=[common, experiment], help="Seeded disturbance trials")
    pd_.add_argument("--trials", type=int, default=None)
    pd_.add_argument("--bound", type=float, default=None)
    pd_.add_argument("--input-offset", dest="input_offset", type=int, default=None)
    pd_.set_defaults(func=cmd_disturb)

    pw = sub.add_parser("sweep", parents=[common], help="Closed-form sweep over p, tau and m")
    pw.add_argument("--profile", type=str, default=None)
    pw.add_argument("--p-grid", dest="p_grid", type=str, default=None, help="e.g. 0.1..0.9:0.2")
    pw.add_argument("--tau-grid", dest="tau_grid", type=str, default=None, help="e.g. 1..50")
    pw.add_argument("--m-range", dest="m_range", type=str, default=None)
    pw.add_argument("--tolerance", type=float, default=None)
    pw.add_argument("--workers", type=int, default=None)
    pw.add_argument("--figures", type=str, default=None)
    pw.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
                        stream=sys.stderr)

    try:
        args.func(args)
    except NumericalValidationError as e:
        logger.error(f"Validation failed: {e}")
        return EXIT_VALIDATION
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError, json.JSONDecodeError, UnicodeDecodeError) as e:
        logger.error(f"I/O error: {e}")
        return EXIT_IO
    except LaguerreError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
