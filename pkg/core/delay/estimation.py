# core/delay/estimation.py
"""Lukkede udtryk for forsinkelsen ud fra Markov-parametrene og aggregering over indekset m."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from ..config import config
from ..errors import ConfigurationError, InsufficientDataError, LaguerreError, SingularDenominatorError
from ..laguerre.basis import Domain, LaguerreParams, Spectrum
from .inversion import recover_markov
from .operator import MarkovSequence

logger = logging.getLogger(__name__)

MarkovLike = Union[MarkovSequence, np.ndarray, List[float]]


class EstimationMethod(Enum):
    THREE_TERM = "three_term"
    H0_LOG = "h0_log"

    @classmethod
    def parse(cls, value) -> "EstimationMethod":
        if isinstance(value, EstimationMethod):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ConfigurationError(f"Unknown estimation method '{value}', expected one of {[m.value for m in cls]}")


@dataclass
class DelayEstimate:
    """
    Result of a delay extraction.

    `value` is kappa-hat in continuous time and the raw tau-hat in discrete time;
    `tau` is always in time units, `tau_rounded` is set for discrete delays.
    """
    value: float
    per_m: List[Tuple[int, float]]
    method: EstimationMethod
    domain: Domain
    tau: float
    p: float
    tau_rounded: Optional[int] = None
    skipped: List[int] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise LaguerreError(f"Delay estimate is not finite ({self.value})")
        if self.method is EstimationMethod.THREE_TERM and not self.per_m:
            raise LaguerreError("A three-term estimate needs at least one per-m value")

    def to_dict(self) -> Dict[str, Any]:
        result = {
            "domain": self.domain.value,
            "method": self.method.value,
            "p": self.p,
            "value": self.value,
            "tau": self.tau,
            "per_m": [{"m": m, "value": v} for m, v in self.per_m],
        }
        if self.tau_rounded is not None:
            result["tau_rounded"] = self.tau_rounded
        if self.skipped:
            result["skipped_m"] = list(self.skipped)
        if self.warnings:
            result["warnings"] = list(self.warnings)
        return result


# --- Lukkede udtryk ---

def _as_array(h: MarkovLike) -> np.ndarray:
    if isinstance(h, MarkovSequence):
        return h.h
    return np.atleast_1d(np.asarray(h, dtype=float))


def _three_terms(h: MarkovLike, m: int) -> Tuple[float, float, float, Optional[float]]:
    """
    Returns (h_{m-1}, h_m, h_{m+1}) after the denominator guard.

    The fourth element is 0.0 when the sequence is the identity [h_0, 0, 0, ...]
    (zero delay), otherwise None.
    """
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise LaguerreError(f"m must be a positive integer, got {m!r}")
    m = int(m)
    values = _as_array(h)
    if values.size < m + 2:
        raise InsufficientDataError(f"m={m} needs Markov parameters up to h_{m + 1}, got {values.size} entries")

    h_prev, h_m, h_next = values[m - 1], values[m], values[m + 1]
    if values[0] != 0 and np.all(np.abs(values[1:m + 2]) <= config.singular_rtol * abs(values[0])):
        return h_prev, h_m, h_next, 0.0

    # lokal skala: for stor forsinkelse er de første h_k små, men nøjagtige
    scale = max(abs(h_m), abs(h_next), abs(h_prev) if m > 1 else 0.0)
    if abs(h_m) <= config.singular_rtol * scale or scale == 0.0:
        raise SingularDenominatorError(
            f"|h_{m}| = {abs(h_m):.3e} is numerically zero next to its neighbours (scale {scale:.3e}); choose another m"
        )
    return h_prev, h_m, h_next, None


def kappa_from_markov(h: MarkovLike, m: int) -> float:
    """kappa = -[(m+1) h_{m+1} + (m-1) h_{m-1} - 2m h_m] / h_m."""
    h_prev, h_m, h_next, identity = _three_terms(h, m)
    if identity is not None:
        return identity
    return float(-((m + 1) * h_next + (m - 1) * h_prev - 2 * m * h_m) / h_m)


def tau_disc_from_markov(h: MarkovLike, m: int, p: float) -> float:
    """tau = -[(m+1) h_{m+1} + (m-1) h_{m-1} + m (xi + 1/xi) h_m] / [(xi - 1/xi) h_m]."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise LaguerreError(f"Discrete Laguerre parameter must satisfy 0 < p < 1, got p={p}")
    h_prev, h_m, h_next, identity = _three_terms(h, m)
    if identity is not None:
        return identity
    xi = np.sqrt(p)
    numerator = (m + 1) * h_next + (m - 1) * h_prev + m * (xi + 1.0 / xi) * h_m
    return float(-numerator / ((xi - 1.0 / xi) * h_m))


def tau_from_h0(h0: float, p: float, domain) -> float:
    """tau = -ln(h_0)/p (continuous) or 2 ln(h_0)/ln(p) (discrete)."""
    domain = Domain.parse(domain)
    h0, p = float(h0), float(p)
    if not h0 > 0:
        raise LaguerreError(f"h_0 must be positive for delay data, got {h0}")
    if domain is Domain.CONTINUOUS:
        if not p > 0:
            raise LaguerreError(f"Laguerre parameter must be positive, got p={p}")
        return float(-np.log(h0) / p) + 0.0
    if not 0.0 < p < 1.0:
        raise LaguerreError(f"Discrete Laguerre parameter must satisfy 0 < p < 1, got p={p}")
    return float(2.0 * np.log(h0) / np.log(p)) + 0.0


# --- Aggregering ---

def _resolve_m_range(m_range: Optional[Iterable[int]]) -> List[int]:
    values = config.default_m_range if m_range is None else m_range
    ms = sorted({int(m) for m in values})
    if not ms:
        raise ConfigurationError("m_range is empty")
    if ms[0] < 1:
        raise ConfigurationError(f"m_range entries must be >= 1, got {ms[0]}")
    return ms


def estimate_from_markov(h: MarkovSequence, m_range: Optional[Iterable[int]] = None,
                         method=EstimationMethod.THREE_TERM,
                         params: Optional[LaguerreParams] = None) -> DelayEstimate:
    """Delay estimate from Markov parameters already at hand (median over m for the three-term method)."""
    method = EstimationMethod.parse(method)
    params = params or h.params
    if params is None:
        raise ConfigurationError("Laguerre parameters are required to interpret the Markov sequence")
    warnings: List[str] = list(h.warnings) if isinstance(h, MarkovSequence) else []
    values = _as_array(h)

    if method is EstimationMethod.H0_LOG:
        tau = tau_from_h0(values[0], params.p, params.domain)
        if params.is_continuous:
            return DelayEstimate(2.0 * params.p * tau, [], method, params.domain, tau, params.p, warnings=warnings)
        return DelayEstimate(tau, [], method, params.domain, tau, params.p,
                             tau_rounded=int(round(tau)), warnings=warnings)

    requested = _resolve_m_range(m_range)
    ms = [m for m in requested if m <= values.size - 2]
    if len(ms) < len(requested):
        message = f"m_range capped at {values.size - 2} (only {values.size} Markov parameters available)"
        logger.warning(message)
        warnings.append(message)
    if not ms:
        raise InsufficientDataError(f"No m in {requested} can be evaluated with {values.size} Markov parameters")

    per_m: List[Tuple[int, float]] = []
    skipped: List[int] = []
    for m in ms:
        try:
            if params.is_continuous:
                per_m.append((m, kappa_from_markov(values, m)))
            else:
                per_m.append((m, tau_disc_from_markov(values, m, params.p)))
        except SingularDenominatorError as e:
            logger.info(f"Skipping m={m}: {e}")
            skipped.append(m)
    if not per_m:
        raise SingularDenominatorError(f"h_m vanished numerically for every m in {ms}")
    if skipped:
        warnings.append(f"Skipped m with vanishing h_m: {skipped}")

    value = float(np.median([v for _, v in per_m]))
    if params.is_continuous:
        return DelayEstimate(value, per_m, method, params.domain, value / (2.0 * params.p), params.p,
                             skipped=skipped, warnings=warnings)
    return DelayEstimate(value, per_m, method, params.domain, value, params.p,
                         tau_rounded=int(round(value)), skipped=skipped, warnings=warnings)


def estimate_delay(u: Spectrum, y: Spectrum, m_range: Optional[Iterable[int]] = None,
                   method=EstimationMethod.THREE_TERM, zero_threshold: Optional[float] = None) -> DelayEstimate:
    """Recovers the Markov parameters from the spectra and extracts the delay."""
    _resolve_m_range(m_range)
    recovered = recover_markov(u, y, zero_threshold=zero_threshold)
    estimate = estimate_from_markov(recovered, m_range, method)
    logger.info(f"Delay estimate ({estimate.domain.value}, {estimate.method.value}): tau = {estimate.tau:.10g}")
    return estimate
