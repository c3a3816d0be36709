# core/experiments/config.py
"""Eksperimentkonfiguration: dataclasses med validering og indlæsning fra JSON-profiler."""

import logging
from dataclasses import dataclass, field, fields
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from config_loader import load_experiment_profiles

from ..config import config
from ..data.validators import parse_coeffs, parse_float_grid, parse_int_range
from ..delay.operator import DelaySpec
from ..errors import ConfigurationError, LaguerreError
from ..laguerre.basis import Domain, LaguerreParams, Spectrum

logger = logging.getLogger(__name__)


def load_profile(name: str) -> Dict[str, Any]:
    """Kopi af en navngiven profil; 'description' fjernes."""
    profiles = load_experiment_profiles()
    if profiles is None:
        raise ConfigurationError("Experiment profiles could not be loaded")
    if name not in profiles:
        raise ConfigurationError(f"Unknown profile '{name}', available: {sorted(profiles)}")
    profile = dict(profiles[name])
    profile.pop('description', None)
    return profile


def _merge(cls, profile: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    allowed = {f.name for f in fields(cls)}
    merged = {**profile, **{k: v for k, v in overrides.items() if v is not None}}
    unknown = set(merged) - allowed
    if unknown:
        raise ConfigurationError(f"Unknown {cls.__name__} settings: {sorted(unknown)}")
    return merged


def validate_grids(domain: Domain, p_grid, tau_grid, m_range) -> Tuple[List[str], List[str]]:
    """
    Validerer sweep-gitre for det valgte domæne, før sweepet startes.
    Returnerer (fejl, advarsler) ligesom datavalidatorerne.
    """
    validation_errors = []
    warnings = []
    p_values, tau_values, m_values = list(p_grid), list(tau_grid), list(m_range)

    # 1. Tomme gitre
    for name, values in (('p grid', p_values), ('tau grid', tau_values), ('m range', m_values)):
        if not values:
            validation_errors.append(f"{name} is empty")

    # 2. Tilladte værdier pr. domæne
    discrete = domain is Domain.DISCRETE
    for p in p_values:
        if not np.isfinite(p) or p <= 0 or (discrete and p >= 1):
            validation_errors.append(f"p = {p} is not admissible in the {domain.value} domain")
    for tau in tau_values:
        if discrete and tau < 1:
            validation_errors.append(f"tau = {tau} must be a positive integer in the discrete domain")
        elif not discrete and (not np.isfinite(tau) or tau < 0):
            validation_errors.append(f"tau = {tau} must be non-negative")
    for m in m_values:
        if m < 1:
            validation_errors.append(f"m = {m} must be >= 1")

    # 3. Advarsler der ikke stopper kørslen
    if m_values and max(m_values) > config.reliability_bound:
        warnings.append(f"m up to {max(m_values)} exceeds the reliability bound {config.reliability_bound}")
    return validation_errors, warnings


@dataclass
class ExperimentConfig:
    """Settings for a reproduction run or a disturbance trial."""
    domain: Domain = Domain.CONTINUOUS
    p: float = 0.18
    tau: float = 5.0
    input_coeffs: Tuple[float, ...] = (6.0, -3.0, 2.0, -1.0)
    input_offset: int = 0
    coeff_count: int = 25
    m_range: Tuple[int, ...] = field(default_factory=lambda: tuple(config.default_m_range))
    seed: int = 0
    disturbance_indices: Tuple[int, ...] = (0, 1, 2, 3)
    disturbance_bound: float = 15.0
    trials: int = 1
    allow_unreliable: bool = False

    def __post_init__(self):
        try:
            self.domain = Domain.parse(self.domain)
            self.tau = self.spec.tau  # validerer p og tau
        except LaguerreError as e:
            raise ConfigurationError(str(e)) from e

        self.input_coeffs = tuple(parse_coeffs(self.input_coeffs))
        self.m_range = tuple(sorted(set(parse_int_range(self.m_range))))
        self.disturbance_indices = tuple(parse_int_range(self.disturbance_indices))
        self.input_offset, self.coeff_count = int(self.input_offset), int(self.coeff_count)
        self.seed, self.trials = int(self.seed), int(self.trials)
        self.disturbance_bound = float(self.disturbance_bound)

        if self.input_offset < 0:
            raise ConfigurationError(f"input_offset must be non-negative, got {self.input_offset}")
        if not np.any(np.asarray(self.input_coeffs) != 0):
            raise ConfigurationError("input_coeffs must contain a nonzero coefficient")
        if self.coeff_count < self.input_offset + len(self.input_coeffs):
            raise ConfigurationError(
                f"coeff_count={self.coeff_count} is shorter than the input "
                f"(offset {self.input_offset} + {len(self.input_coeffs)} coefficients)"
            )
        if self.coeff_count > config.reliability_bound and not self.allow_unreliable:
            raise ConfigurationError(
                f"coeff_count={self.coeff_count} exceeds the reliability bound {config.reliability_bound}; "
                "set allow_unreliable to override"
            )
        if not self.m_range or self.m_range[0] < 1:
            raise ConfigurationError(f"m_range must be a non-empty set of positive integers, got {self.m_range}")
        if len(set(self.disturbance_indices)) != len(self.disturbance_indices) or min(self.disturbance_indices, default=0) < 0:
            raise ConfigurationError(f"disturbance_indices must be distinct and non-negative, got {self.disturbance_indices}")
        if self.disturbance_bound < 0:
            raise ConfigurationError(f"disturbance_bound must be non-negative, got {self.disturbance_bound}")
        if self.trials < 1:
            raise ConfigurationError(f"trials must be positive, got {self.trials}")

    @property
    def params(self) -> LaguerreParams:
        return LaguerreParams(self.p, self.domain)

    @property
    def spec(self) -> DelaySpec:
        return DelaySpec(self.params, self.tau)

    @property
    def input_start(self) -> int:
        """Index of the first nonzero input coefficient."""
        return self.input_offset + int(np.flatnonzero(np.asarray(self.input_coeffs) != 0)[0])

    def input_spectrum(self) -> Spectrum:
        coeffs = np.zeros(self.coeff_count)
        coeffs[self.input_offset:self.input_offset + len(self.input_coeffs)] = self.input_coeffs
        return Spectrum(self.params, coeffs)

    @classmethod
    def from_profile(cls, name: str, **overrides) -> "ExperimentConfig":
        return cls(**_merge(cls, load_profile(name), overrides))


@dataclass
class SweepConfig:
    """Grids for a closed-form sweep over (p, tau, m) on exact Markov data."""
    domain: Domain = Domain.DISCRETE
    p_grid: Tuple[float, ...] = (0.1, 0.3, 0.5, 0.7, 0.9)
    tau_grid: Tuple[float, ...] = tuple(range(1, 51))
    m_range: Tuple[int, ...] = field(default_factory=lambda: tuple(config.default_m_range))
    tolerance: Optional[float] = None
    workers: int = field(default_factory=lambda: config.sweep_workers)

    def __post_init__(self):
        try:
            self.domain = Domain.parse(self.domain)
        except LaguerreError as e:
            raise ConfigurationError(str(e)) from e
        self.p_grid = tuple(sorted(set(parse_float_grid(self.p_grid))))
        if self.domain is Domain.DISCRETE:
            self.tau_grid = tuple(sorted(set(parse_int_range(self.tau_grid))))
        else:
            self.tau_grid = tuple(sorted(set(parse_float_grid(self.tau_grid))))
        self.m_range = tuple(sorted(set(parse_int_range(self.m_range))))
        errors, warnings = validate_grids(self.domain, self.p_grid, self.tau_grid, self.m_range)
        if errors:
            raise ConfigurationError("; ".join(errors))
        for warning in warnings:
            logger.warning(warning)
        if self.tolerance is None:
            self.tolerance = (config.sweep_tolerance_continuous if self.domain is Domain.CONTINUOUS
                              else config.sweep_tolerance_discrete)
        self.tolerance = float(self.tolerance)
        if not self.tolerance > 0:
            raise ConfigurationError(f"tolerance must be positive, got {self.tolerance}")
        self.workers = max(1, int(self.workers))

    @classmethod
    def from_profile(cls, name: str, **overrides) -> "SweepConfig":
        return cls(**_merge(cls, load_profile(name), overrides))
