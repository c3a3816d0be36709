# core/laguerre/basis.py
"""Laguerre-basis i tidsdomænet: basisfunktioner, spektre (projektion), syntese, normer og indre produkter."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, List, Optional, Sequence

import numpy as np
from scipy import signal as sps
from scipy.interpolate import make_interp_spline

from ..config import config
from ..errors import DomainMismatchError, LaguerreError
from .quadrature import gauss_legendre_panels, integrate

logger = logging.getLogger(__name__)


# --- Datastrukturer ---

class Domain(Enum):
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"

    @classmethod
    def parse(cls, value) -> "Domain":
        """Accepterer enum, 'continuous'/'cont' og 'discrete'/'disc'."""
        if isinstance(value, Domain):
            return value
        aliases = {
            "continuous": cls.CONTINUOUS, "cont": cls.CONTINUOUS,
            "discrete": cls.DISCRETE, "disc": cls.DISCRETE,
        }
        key = str(value).strip().lower()
        if key not in aliases:
            raise LaguerreError(f"Unknown domain '{value}', expected one of {sorted(aliases)}")
        return aliases[key]


@dataclass(frozen=True)
class LaguerreParams:
    """Laguerre parameter p and the time domain it belongs to."""
    p: float
    domain: Domain = Domain.CONTINUOUS

    def __post_init__(self):
        object.__setattr__(self, "domain", Domain.parse(self.domain))
        object.__setattr__(self, "p", float(self.p))
        if not np.isfinite(self.p) or self.p <= 0:
            raise LaguerreError(f"Laguerre parameter must be positive, got p={self.p}")
        if self.domain is Domain.DISCRETE and not self.p < 1:
            raise LaguerreError(f"Discrete Laguerre parameter must satisfy 0 < p < 1, got p={self.p}")

    @property
    def xi(self) -> float:
        return float(np.sqrt(self.p))

    @property
    def is_continuous(self) -> bool:
        return self.domain is Domain.CONTINUOUS


@dataclass
class Spectrum:
    """Finite Laguerre spectrum w_0..w_{N-1}; warnings collects reliability notes from the projection."""
    params: LaguerreParams
    coeffs: np.ndarray
    warnings: List[str] = field(default_factory=list)

    def __post_init__(self):
        coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        if coeffs.ndim != 1 or coeffs.size < 1:
            raise LaguerreError("A spectrum needs at least one coefficient")
        if not np.all(np.isfinite(coeffs)):
            raise LaguerreError("Spectrum coefficients must be finite")
        self.coeffs = coeffs

    def __len__(self) -> int:
        return int(self.coeffs.size)


@dataclass
class SampledSignal:
    """Uniformly sampled signal; values outside the grid are zero."""
    domain: Domain
    values: np.ndarray
    dt: float = 1.0
    t0: float = 0.0

    def __post_init__(self):
        self.domain = Domain.parse(self.domain)
        values = np.atleast_1d(np.asarray(self.values, dtype=float))
        if values.ndim != 1:
            raise LaguerreError("Signal values must be one-dimensional")
        if not np.all(np.isfinite(values)):
            raise LaguerreError("Signal values must be finite")
        self.values = values
        self.dt = float(self.dt)
        self.t0 = float(self.t0)
        if not self.dt > 0:
            raise LaguerreError(f"Sampling step must be positive, got dt={self.dt}")
        if self.domain is Domain.DISCRETE:
            if self.dt != 1.0 or not self.t0.is_integer():
                raise LaguerreError("Discrete signals live on the integer grid (dt = 1, integer t0)")

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.values.size)

    def __len__(self) -> int:
        return int(self.values.size)

    @classmethod
    def zeros(cls, domain, length: int, dt: float = 1.0, t0: float = 0.0) -> "SampledSignal":
        return cls(domain, np.zeros(int(length)), dt=dt, t0=t0)


# --- Horisont og gitter ---

def continuous_horizon(params: LaguerreParams, count: int, duration: float = 0.0) -> float:
    """End of the integration interval; keeps the oscillatory region x < 4k of the last basis function well inside."""
    return float(duration) + (4.0 * count + config.horizon_x_margin) / (2.0 * params.p)


def discrete_horizon(params: LaguerreParams, count: int, duration: int = 0) -> int:
    xi = params.xi
    spread = (count + 1) * (1.0 + xi) / (1.0 - xi) + 40.0 / (1.0 - xi)
    return int(max(config.discrete_horizon, int(np.ceil(duration)) + int(np.ceil(spread))))


def make_grid(params: LaguerreParams, count: int = 1, duration: Optional[float] = None,
              dt: Optional[float] = None, length: Optional[int] = None) -> SampledSignal:
    """Display grid for synthesis: dt <= 0.01/p in continuous time, the integer grid in discrete time."""
    if params.is_continuous:
        dt = float(dt) if dt is not None else config.synthesis_dt_factor / params.p
        if length is None:
            duration = continuous_horizon(params, count) if duration is None else float(duration)
            length = int(np.floor(duration / dt)) + 1
        return SampledSignal.zeros(params.domain, length, dt=dt)
    if length is None:
        length = discrete_horizon(params, count) if duration is None else int(duration) + 1
    return SampledSignal.zeros(params.domain, length)


def _check_domain(domain: Domain, params: LaguerreParams):
    if Domain.parse(domain) is not params.domain:
        raise DomainMismatchError(f"Signal domain {Domain.parse(domain).value} does not match Laguerre domain {params.domain.value}")


def _check_count(count) -> int:
    if isinstance(count, bool) or int(count) != count or count < 1:
        raise LaguerreError(f"Coefficient count must be a positive integer, got {count!r}")
    return int(count)


# --- Basisfunktioner ---

def _discrete_impulse_responses(params: LaguerreParams, count: int, length: int) -> np.ndarray:
    """Impulse through sqrt(1-p)/(z-xi), then k copies of the all-pass (1-xi z)/(z-xi)."""
    xi = params.xi
    impulse = np.zeros(length)
    impulse[0] = 1.0
    rows = np.empty((count, length))
    rows[0] = sps.lfilter([0.0, np.sqrt(1.0 - params.p)], [1.0, -xi], impulse)
    for k in range(1, count):
        rows[k] = sps.lfilter([-xi, 1.0], [1.0, -xi], rows[k - 1])
    return rows


def basis_matrix(params: LaguerreParams, count: int, t) -> np.ndarray:
    """
    Rows l_0..l_{count-1} evaluated at the times t (shape (count, t.size)).

    Continuous: l_k(t) = sqrt(2p) e^{-pt} L_k(2pt), run as a recurrence on the
    exponentially scaled functions so nothing overflows for large k or t.
    Both domains are zero for t < 0.
    """
    count = _check_count(count)
    t = np.atleast_1d(np.asarray(t, dtype=float)).ravel()

    if params.is_continuous:
        inside = t >= 0
        x = np.where(inside, 2.0 * params.p * t, 0.0)
        out = np.empty((count, t.size))
        out[0] = np.exp(-0.5 * x)
        if count > 1:
            out[1] = out[0] * (1.0 - x)
        for k in range(1, count - 1):
            out[k + 1] = ((2 * k + 1 - x) * out[k] - k * out[k - 1]) / (k + 1)
        out *= np.sqrt(2.0 * params.p)
        out[:, ~inside] = 0.0
        return out

    ti = np.rint(t).astype(int)
    if not np.allclose(ti, t):
        raise LaguerreError("Discrete basis functions are only defined on integer times")
    out = np.zeros((count, t.size))
    valid = ti >= 0
    if np.any(valid):
        responses = _discrete_impulse_responses(params, count, int(ti[valid].max()) + 1)
        out[:, valid] = responses[:, ti[valid]]
    return out


def eval_basis(params: LaguerreParams, k: int, grid: SampledSignal) -> SampledSignal:
    """The k-th Laguerre function sampled on the grid of `grid`."""
    _check_domain(grid.domain, params)
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise LaguerreError(f"Basis index must be a non-negative integer, got {k!r}")
    values = basis_matrix(params, int(k) + 1, grid.t)[int(k)]
    return SampledSignal(grid.domain, values, dt=grid.dt, t0=grid.t0)


# --- Projektion (spektrum) ---

def _finish_spectrum(params: LaguerreParams, coeffs: np.ndarray, count: int) -> Spectrum:
    spectrum = Spectrum(params, coeffs)
    if count > config.reliability_bound:
        message = (f"Requested {count} coefficients; coefficients above order "
                   f"{config.reliability_bound} are usually unreliable")
        logger.warning(message)
        spectrum.warnings.append(message)
    return spectrum


def _spline_rule(signals: Sequence[SampledSignal], t_start: float, t_end: float, panel_width: float):
    """
    Gauss-Legendre nodes and weights on [t_start, t_end] plus the values of each signal there.

    The samples are interpolated by a spline of degree config.spline_degree, so the
    nodes do not depend on the sampling grid.
    """
    nodes, weights = gauss_legendre_panels(t_start, t_end, panel_width, config.quadrature_order)
    values = []
    for signal in signals:
        degree = min(config.spline_degree, len(signal) - 1)
        values.append(make_interp_spline(signal.t, signal.values, k=degree)(nodes))
    return nodes, weights, values


def project(signal: SampledSignal, params: LaguerreParams, count: int) -> Spectrum:
    """First `count` Laguerre coefficients of a sampled signal (spline quadrature / exact sum)."""
    _check_domain(signal.domain, params)
    count = _check_count(count)

    if params.is_continuous:
        if len(signal) < 3:
            raise LaguerreError("Continuous projection needs at least three samples")
        # nul før t = 0 og efter sidste sample
        t_start, t_end = max(signal.t0, 0.0), float(signal.t[-1])
        if not t_end > t_start:
            return _finish_spectrum(params, np.zeros(count), count)
        width = min(config.panel_width_factor / params.p, config.spline_panel_samples * signal.dt)
        nodes, weights, (values,) = _spline_rule([signal], t_start, t_end, width)
        coeffs = basis_matrix(params, count, nodes) @ (weights * values)
    else:
        coeffs = basis_matrix(params, count, signal.t) @ signal.values
    return _finish_spectrum(params, coeffs, count)


def project_function(func: Callable[[np.ndarray], np.ndarray], params: LaguerreParams, count: int,
                     duration: float = 0.0, breakpoints: Iterable[float] = ()) -> Spectrum:
    """
    Laguerre coefficients of a vectorised function of time.

    Continuous time uses composite Gauss-Legendre panels of width 1/(4p) on [0, T];
    panels are split at the breakpoints, so jumps (e.g. the onset of a delayed
    pulse) do not spoil the rule. Discrete time sums over the integer horizon.
    """
    count = _check_count(count)
    if params.is_continuous:
        t_end = continuous_horizon(params, count, duration)
        nodes, weights = gauss_legendre_panels(
            0.0, t_end, config.panel_width_factor / params.p, config.quadrature_order, breakpoints
        )
        values = np.asarray(func(nodes), dtype=float)
        coeffs = basis_matrix(params, count, nodes) @ (weights * values)
    else:
        t = np.arange(discrete_horizon(params, count, int(np.ceil(duration))), dtype=float)
        coeffs = basis_matrix(params, count, t) @ np.asarray(func(t), dtype=float)
    return _finish_spectrum(params, coeffs, count)


# --- Syntese ---

@dataclass
class LaguerreSeries:
    """Callable time-domain signal sum_j w_j l_j(t) for a spectrum."""
    spectrum: Spectrum

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        basis = basis_matrix(self.spectrum.params, len(self.spectrum), t.ravel())
        return (self.spectrum.coeffs @ basis).reshape(t.shape)

    def delayed(self, tau: float) -> Callable[[np.ndarray], np.ndarray]:
        # basisfunktionerne er nul for t < 0, så forskydningen er allerede kausal
        return lambda t: self(np.asarray(t, dtype=float) - tau)


def synthesize(spectrum: Spectrum, grid: Optional[SampledSignal] = None) -> SampledSignal:
    if grid is None:
        grid = make_grid(spectrum.params, count=len(spectrum))
    _check_domain(grid.domain, spectrum.params)
    values = LaguerreSeries(spectrum)(grid.t)
    return SampledSignal(grid.domain, values, dt=grid.dt, t0=grid.t0)


def time_shift(signal: SampledSignal, tau: float) -> SampledSignal:
    """y(t) = u(t - tau): the samples are kept and the grid start moves by tau."""
    tau = float(tau)
    if tau < 0:
        raise LaguerreError(f"Delay must be non-negative, got {tau}")
    if signal.domain is Domain.DISCRETE and not tau.is_integer():
        raise LaguerreError(f"Discrete delay must be an integer, got {tau}")
    return SampledSignal(signal.domain, signal.values.copy(), dt=signal.dt, t0=signal.t0 + tau)


# --- Normer og indre produkter ---

def norm(spectrum: Spectrum) -> float:
    """Parseval: the L2 / l2 norm of the signal equals the Euclidean norm of its spectrum."""
    return float(np.linalg.norm(spectrum.coeffs))


def inner(signal_a: SampledSignal, signal_b: SampledSignal) -> float:
    """
    Time-domain inner product over the overlap of the two grids.

    Discrete signals are summed sample by sample. Continuous signals are interpolated
    by splines and integrated with Gauss-Legendre panels, so their grids need not align.
    """
    if signal_a.domain is not signal_b.domain:
        raise DomainMismatchError("Cannot take the inner product of continuous and discrete signals")

    if signal_a.domain is Domain.DISCRETE:
        offset = int(signal_b.t0 - signal_a.t0)
        start_a, start_b = max(0, offset), max(0, -offset)
        overlap = min(len(signal_a) - start_a, len(signal_b) - start_b)
        if overlap <= 0:
            return 0.0
        product = signal_a.values[start_a:start_a + overlap] * signal_b.values[start_b:start_b + overlap]
        return float(np.sum(product))

    if len(signal_a) < 2 or len(signal_b) < 2:
        return 0.0
    t_start = max(signal_a.t0, signal_b.t0)
    t_end = min(float(signal_a.t[-1]), float(signal_b.t[-1]))
    if not t_end > t_start:
        return 0.0
    width = config.spline_panel_samples * min(signal_a.dt, signal_b.dt)
    _, weights, (values_a, values_b) = _spline_rule([signal_a, signal_b], t_start, t_end, width)
    return float(np.dot(weights, values_a * values_b))


def signal_norm(signal: SampledSignal) -> float:
    return float(np.sqrt(inner(signal, signal)))


def function_norm(func: Callable[[np.ndarray], np.ndarray], params: LaguerreParams, count: int = 0,
                  duration: float = 0.0, breakpoints: Iterable[float] = ()) -> float:
    """L2 / l2 norm of a time function on the same horizon and panels the projection uses."""
    if params.is_continuous:
        t_end = continuous_horizon(params, count, duration)
        nodes, weights = gauss_legendre_panels(
            0.0, t_end, config.panel_width_factor / params.p, config.quadrature_order, breakpoints
        )
        return float(np.sqrt(integrate(lambda t: np.asarray(func(t), dtype=float) ** 2, nodes, weights)))
    t = np.arange(discrete_horizon(params, count, int(np.ceil(duration))), dtype=float)
    values = np.asarray(func(t), dtype=float)
    return float(np.sqrt(np.sum(values * values)))
