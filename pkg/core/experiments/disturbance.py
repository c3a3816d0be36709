# core/experiments/disturbance.py
"""
Forstyrrelseseksperimentet: y(t) = u(t - tau) + d(t), hvor d ligger på de laveste
basisfunktioner og inputtet først starter over dem.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..delay.estimation import DelayEstimate, estimate_delay
from ..errors import ConfigurationError, NumericalValidationError
from ..laguerre.basis import LaguerreParams, LaguerreSeries, Spectrum, make_grid, norm, project_function, synthesize
from .config import ExperimentConfig
from .reproduction import REFERENCE_VALUES, TAU_RTOL, display_grid

logger = logging.getLogger(__name__)

# Maksimal ændring af de forsinkede input-koefficienter
INVARIANCE_TOL = 1e-9
# Tærskel for foranstillede nuller, relativt til max|u_j|
RELATIVE_ZERO_THRESHOLD = 1e-9


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator; the same seed gives the same draws on every platform."""
    return np.random.Generator(np.random.PCG64(int(seed)))


@dataclass
class DisturbanceModel:
    """d(t) = sum_i d_i l_{k_i}(t) with d_i drawn uniformly from [-bound, bound] unless weights are given."""
    basis_indices: Sequence[int] = (0, 1, 2, 3)
    bound: float = 15.0
    seed: int = 0
    weights: Optional[Sequence[float]] = None

    def __post_init__(self):
        self.basis_indices = tuple(int(k) for k in self.basis_indices)
        self.bound = float(self.bound)
        if len(set(self.basis_indices)) != len(self.basis_indices) or min(self.basis_indices, default=0) < 0:
            raise ConfigurationError(f"basis_indices must be distinct and non-negative, got {self.basis_indices}")
        if not np.isfinite(self.bound) or self.bound < 0:
            raise ConfigurationError(f"bound must be non-negative, got {self.bound}")
        if self.weights is not None:
            self.weights = np.asarray(self.weights, dtype=float)
            if self.weights.shape != (len(self.basis_indices),):
                raise ConfigurationError(
                    f"{len(self.basis_indices)} weights expected for indices {self.basis_indices}, got {self.weights.size}"
                )

    @classmethod
    def from_config(cls, cfg: ExperimentConfig, seed: Optional[int] = None) -> "DisturbanceModel":
        return cls(cfg.disturbance_indices, cfg.disturbance_bound, cfg.seed if seed is None else seed)

    def draw(self) -> np.ndarray:
        if self.weights is not None:
            return np.array(self.weights, dtype=float)
        return make_rng(self.seed).uniform(-self.bound, self.bound, size=len(self.basis_indices))

    def spectrum(self, params: LaguerreParams, count: int) -> Spectrum:
        if self.basis_indices and max(self.basis_indices) >= count:
            raise ConfigurationError(f"Disturbance index {max(self.basis_indices)} lies outside {count} coefficients")
        coeffs = np.zeros(count)
        coeffs[list(self.basis_indices)] = self.draw()
        return Spectrum(params, coeffs)


def disturbance_realizations(model: DisturbanceModel, params: LaguerreParams, count: int = 10,
                             grid=None) -> pd.DataFrame:
    """Time samples of `count` realizations with seeds seed, seed+1, ...; one column per realization."""
    n = max(model.basis_indices, default=0) + 1
    grid = grid if grid is not None else make_grid(params, count=n)
    data = {'t': grid.t}
    for i in range(count):
        realization = replace(model, seed=model.seed + i)
        data[f'd_{i}'] = synthesize(realization.spectrum(params, n), grid).values
    return pd.DataFrame(data)


def disturbance_signals(cfg: ExperimentConfig, model: DisturbanceModel, grid=None) -> pd.DataFrame:
    """Input, delayed input, disturbance and disturbed output of one draw in the time domain."""
    grid = grid if grid is not None else display_grid(cfg)
    u_series = LaguerreSeries(cfg.input_spectrum())
    y_clean = u_series.delayed(cfg.tau)(grid.t)
    d = LaguerreSeries(model.spectrum(cfg.params, cfg.coeff_count))(grid.t)
    return pd.DataFrame({
        't': grid.t,
        'u': u_series(grid.t),
        'y_clean': y_clean,
        'd': d,
        'y_disturbed': y_clean + d,
    })


# --- Enkelt forsøg ---

@dataclass
class DisturbanceTrial:
    seed: int
    weights: np.ndarray
    y_clean: Spectrum
    y_disturbed: Spectrum
    estimate: DelayEstimate
    invariance_error: float
    u_norm: float
    y_norm: float
    d_norm: float
    warnings: List[str] = field(default_factory=list)

    @property
    def snr(self) -> float:
        return self.y_norm / self.d_norm if self.d_norm > 0 else float('inf')

    def to_dict(self) -> Dict[str, Any]:
        return {
            'seed': self.seed,
            'weights': self.weights.tolist(),
            'tau_hat': self.estimate.tau,
            'invariance_error': self.invariance_error,
            'u_norm': self.u_norm,
            'y_norm': self.y_norm,
            'd_norm': self.d_norm,
            'snr': self.snr,
        }


def run_disturbance_trial(cfg: ExperimentConfig, model: DisturbanceModel) -> DisturbanceTrial:
    """
    Projects the clean and the disturbed output, checks that the coefficients from the
    first input index on are untouched and estimates the delay with the leading input
    zeros skipped.
    """
    if model.basis_indices and max(model.basis_indices) >= cfg.input_start:
        raise ConfigurationError(
            f"Disturbance indices {model.basis_indices} overlap the input, which starts at index {cfg.input_start}"
        )
    params, spec, count = cfg.params, cfg.spec, cfg.coeff_count
    breakpoints = [spec.tau] if params.is_continuous else []

    u_exact = cfg.input_spectrum()
    d_spec = model.spectrum(params, count)
    u_series, d_series = LaguerreSeries(u_exact), LaguerreSeries(d_spec)
    y_func = u_series.delayed(spec.tau)

    u_spec = project_function(u_series, params, count)
    y_clean = project_function(y_func, params, count, duration=spec.tau, breakpoints=breakpoints)
    y_disturbed = project_function(lambda t: y_func(t) + d_series(t), params, count,
                                   duration=spec.tau, breakpoints=breakpoints)

    start = cfg.input_start
    invariance = float(np.max(np.abs(y_disturbed.coeffs[start:] - y_clean.coeffs[start:])))
    threshold = RELATIVE_ZERO_THRESHOLD * float(np.max(np.abs(u_spec.coeffs)))
    estimate = estimate_delay(u_spec, y_disturbed, cfg.m_range, zero_threshold=threshold)

    trial = DisturbanceTrial(
        seed=model.seed,
        weights=d_spec.coeffs[list(model.basis_indices)],
        y_clean=y_clean,
        y_disturbed=y_disturbed,
        estimate=estimate,
        invariance_error=invariance,
        u_norm=norm(u_spec),
        y_norm=norm(y_clean),
        d_norm=norm(d_spec),
        warnings=list(estimate.warnings),
    )
    logger.debug(f"Disturbance trial seed={model.seed}: tau_hat={estimate.tau:.10g}, "
                 f"invariance={invariance:.3e}, SNR={trial.snr:.4f}")
    return trial


# --- Serie af forsøg ---

@dataclass
class DisturbanceReport:
    config: ExperimentConfig
    trials: List[DisturbanceTrial]
    realizations: pd.DataFrame
    signals: pd.DataFrame

    @property
    def summary(self) -> pd.DataFrame:
        return pd.DataFrame([trial.to_dict() for trial in self.trials]).drop(columns=['weights'])

    @property
    def spectra(self) -> pd.DataFrame:
        """Clean and disturbed output spectra of the first trial."""
        first = self.trials[0]
        return pd.DataFrame({
            'j': np.arange(len(first.y_clean)),
            'y_clean': first.y_clean.coeffs,
            'y_disturbed': first.y_disturbed.coeffs,
        })

    def failures(self) -> List[str]:
        tau = self.config.tau
        failed = []
        for trial in self.trials:
            if trial.invariance_error > INVARIANCE_TOL:
                failed.append(f"seed {trial.seed}: delayed-input coefficients moved by {trial.invariance_error:.3e}")
            if abs(trial.estimate.tau - tau) > TAU_RTOL * max(tau, 1.0):
                failed.append(f"seed {trial.seed}: tau estimate {trial.estimate.tau:.6g} differs from {tau:g}")
        return failed

    def validate(self) -> "DisturbanceReport":
        failed = self.failures()
        if failed:
            raise NumericalValidationError(f"{len(failed)} disturbance checks failed: " + "; ".join(failed[:5]))
        return self

    def to_dict(self) -> Dict[str, Any]:
        summary = self.summary
        return {
            'experiment': 'disturbance',
            'domain': self.config.domain.value,
            'p': self.config.p,
            'tau': self.config.tau,
            'trials': len(self.trials),
            'disturbance_indices': list(self.config.disturbance_indices),
            'disturbance_bound': self.config.disturbance_bound,
            'max_invariance_error': float(summary['invariance_error'].max()),
            'tau_hat_min': float(summary['tau_hat'].min()),
            'tau_hat_max': float(summary['tau_hat'].max()),
            'u_norm': self.trials[0].u_norm,
            'per_trial': [trial.to_dict() for trial in self.trials],
            'reference_values': {
                'snr': REFERENCE_VALUES['snr'],
                'd_norm': REFERENCE_VALUES['d_norm'],
                'note': 'reference only: the published values come from one unpublished random draw',
            },
        }

    def tables(self) -> Dict[str, pd.DataFrame]:
        return {'trials': self.summary, 'spectra': self.spectra, 'signals': self.signals,
                'realizations': self.realizations}


def run_disturbance_trials(cfg: ExperimentConfig, trials: Optional[int] = None) -> DisturbanceReport:
    """Runs trials with seeds seed, seed+1, ... and collects them into one report."""
    trials = cfg.trials if trials is None else int(trials)
    if trials < 1:
        raise ConfigurationError(f"trials must be positive, got {trials}")
    logger.info(f"Disturbance experiment: {trials} trials, indices {cfg.disturbance_indices}, bound {cfg.disturbance_bound}")

    results = [run_disturbance_trial(cfg, DisturbanceModel.from_config(cfg, seed=cfg.seed + i))
               for i in range(trials)]
    report = DisturbanceReport(
        config=cfg,
        trials=results,
        realizations=disturbance_realizations(DisturbanceModel.from_config(cfg), cfg.params),
        signals=disturbance_signals(cfg, DisturbanceModel.from_config(cfg)),
    )
    worst = max(trial.invariance_error for trial in results)
    logger.info(f"Disturbance experiment finished: max invariance error {worst:.3e}")
    return report
