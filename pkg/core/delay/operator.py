# core/delay/operator.py
"""Den rene forsinkelse i Laguerre-domænet: Markov-parametre, spektral foldning, tilstandsform og Hankel-rang."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np
from scipy import linalg

from ..config import config
from ..errors import DomainMismatchError, InsufficientDataError, LaguerreError
from ..laguerre.basis import Domain, LaguerreParams, Spectrum
from ..laguerre.polynomials import cont_delay_poly_seq, disc_delay_poly_seq

logger = logging.getLogger(__name__)


# --- Datastrukturer ---

@dataclass(frozen=True)
class DelaySpec:
    """Pure delay y(t) = u(t - tau) together with the Laguerre parameters it is expressed in."""
    params: LaguerreParams
    tau: float

    def __post_init__(self):
        tau = float(self.tau)
        if not np.isfinite(tau) or tau < 0:
            raise LaguerreError(f"tau must be finite and non-negative, got {self.tau}")
        if self.params.domain is Domain.DISCRETE:
            if not tau.is_integer() or tau < 1:
                raise LaguerreError(f"Discrete delay must be a positive integer, got tau={self.tau}")
            object.__setattr__(self, "tau", int(tau))
        else:
            object.__setattr__(self, "tau", tau)

    @property
    def domain(self) -> Domain:
        return self.params.domain

    @property
    def kappa(self) -> float:
        """Normalised continuous delay 2*p*tau."""
        if self.domain is not Domain.CONTINUOUS:
            raise DomainMismatchError("kappa is only defined for a continuous delay")
        return 2.0 * self.params.p * self.tau

    @property
    def xi(self) -> float:
        if self.domain is not Domain.DISCRETE:
            raise DomainMismatchError("xi is only defined for a discrete delay")
        return self.params.xi


@dataclass
class MarkovSequence:
    """
    Laguerre-domain Markov parameters h_0..h_{N-1}.

    Sequences recovered from data also carry the leading-zero offset that was
    stripped, the matching output coefficients (the disturbance prefix) and a
    condition estimate of the Toeplitz inversion.
    """
    h: np.ndarray
    spec: Optional[DelaySpec] = None
    params: Optional[LaguerreParams] = None
    offset: int = 0
    disturbance_prefix: np.ndarray = field(default_factory=lambda: np.zeros(0))
    condition_estimate: Optional[float] = None
    warnings: List[str] = field(default_factory=list)

    def __post_init__(self):
        h = np.atleast_1d(np.asarray(self.h, dtype=float))
        if h.ndim != 1 or h.size < 1:
            raise LaguerreError("A Markov sequence needs at least one entry")
        if not np.all(np.isfinite(h)):
            raise LaguerreError("Markov parameters must be finite")
        self.h = h
        self.disturbance_prefix = np.asarray(self.disturbance_prefix, dtype=float)
        if self.params is None and self.spec is not None:
            self.params = self.spec.params
        if self.spec is not None and self.params != self.spec.params:
            raise DomainMismatchError("Markov sequence parameters differ from its delay spec")

    def __len__(self) -> int:
        return int(self.h.size)

    def __getitem__(self, k):
        return self.h[k]

    @property
    def domain(self) -> Optional[Domain]:
        return self.params.domain if self.params is not None else None


@dataclass
class StateSpaceRealization:
    """x_{j+1} = F x_j + G u_j, y_j = H x_j + J u_j over the coefficient index j."""
    F: np.ndarray
    G: np.ndarray
    H: np.ndarray
    J: float

    def __post_init__(self):
        self.F = np.atleast_2d(np.asarray(self.F, dtype=float))
        order = self.F.shape[0]
        if self.F.shape != (order, order):
            raise LaguerreError(f"F must be square, got shape {self.F.shape}")
        self.G = np.asarray(self.G, dtype=float).reshape(-1, 1)
        self.H = np.asarray(self.H, dtype=float).reshape(1, -1)
        if self.G.shape[0] != order or self.H.shape[1] != order:
            raise LaguerreError(
                f"Dimension mismatch: F is {order}x{order}, G has {self.G.shape[0]} rows, H has {self.H.shape[1]} columns"
            )
        self.J = float(self.J)

    @property
    def order(self) -> int:
        return int(self.F.shape[0])


# --- Markov-parametre ---

def _check_count(count) -> int:
    if isinstance(count, bool) or int(count) != count or count < 1:
        raise LaguerreError(f"count must be a positive integer, got {count!r}")
    return int(count)


def cont_markov(spec: DelaySpec, count: int) -> MarkovSequence:
    """h_k = e^{-kappa/2} L_k(kappa), with L_k the delay polynomials of the continuous case."""
    if spec.domain is not Domain.CONTINUOUS:
        raise DomainMismatchError("cont_markov requires a continuous delay spec")
    count = _check_count(count)
    kappa = spec.kappa
    h = np.exp(-0.5 * kappa) * cont_delay_poly_seq(count - 1, kappa)
    return MarkovSequence(h, spec=spec)


def disc_markov(spec: DelaySpec, count: int) -> MarkovSequence:
    """h_0 = xi^tau and h_j = (1 - p) L_j^(tau)(xi) for j >= 1."""
    if spec.domain is not Domain.DISCRETE:
        raise DomainMismatchError("disc_markov requires a discrete delay spec")
    count = _check_count(count)
    p, xi, tau = spec.params.p, spec.xi, spec.tau
    h = np.empty(count)
    h[0] = xi ** tau
    if count > 1:
        h[1:] = (1.0 - p) * disc_delay_poly_seq(count - 1, tau, xi)
    return MarkovSequence(h, spec=spec)


def markov(spec: DelaySpec, count: int) -> MarkovSequence:
    if spec.domain is Domain.CONTINUOUS:
        return cont_markov(spec, count)
    return disc_markov(spec, count)


# --- Spektral foldning ---

def apply_delay(spec: DelaySpec, u: Spectrum) -> Spectrum:
    """y_j = sum_{k<=j} h_{j-k} u_k, truncated to the length of u (the map is lower triangular)."""
    if u.params != spec.params:
        raise DomainMismatchError(
            f"Spectrum parameters ({u.params.domain.value}, p={u.params.p}) do not match the delay "
            f"({spec.domain.value}, p={spec.params.p})"
        )
    n = len(u)
    h = markov(spec, n).h
    y = np.convolve(h, u.coeffs)[:n]
    return Spectrum(u.params, y)


# --- Tilstandsform ---

def disc_realization(spec: DelaySpec) -> StateSpaceRealization:
    """Minimal realization of order tau of the discrete delay in the Laguerre domain."""
    if spec.domain is not Domain.DISCRETE:
        raise DomainMismatchError("A finite realization exists only for the discrete delay")
    tau, p, xi = spec.tau, spec.params.p, spec.xi

    F = np.diag(np.full(tau, -xi))
    for i in range(tau):
        for j in range(i + 1, tau):
            F[i, j] = xi ** (j - i - 1) * (1.0 - p)
    G = np.array([(1.0 - p) * xi ** (tau - 1 - i) for i in range(tau)])
    H = np.array([xi ** i for i in range(tau)])
    return StateSpaceRealization(F, G, H, xi ** tau)


def simulate_realization(ss: StateSpaceRealization, u: Spectrum) -> Spectrum:
    """Runs the state recursion over the input coefficients, starting from x_0 = 0."""
    x = np.zeros((ss.order, 1))
    y = np.empty(len(u))
    for j, u_j in enumerate(u.coeffs):
        y[j] = (ss.H @ x).item() + ss.J * u_j
        x = ss.F @ x + ss.G * u_j
    return Spectrum(u.params, y)


def realization_markov(ss: StateSpaceRealization, count: int) -> np.ndarray:
    """[J, HG, HFG, HF^2G, ...], the impulse response of the realization."""
    count = _check_count(count)
    out = np.empty(count)
    out[0] = ss.J
    column = ss.G
    for k in range(1, count):
        out[k] = (ss.H @ column).item()
        column = ss.F @ column
    return out


# --- Hankel og rang ---

def _as_array(h: Union[MarkovSequence, np.ndarray, list]) -> np.ndarray:
    if isinstance(h, MarkovSequence):
        return h.h
    return np.atleast_1d(np.asarray(h, dtype=float))


def hankel(h: Union[MarkovSequence, np.ndarray, list], n: int, first: int = 1) -> np.ndarray:
    """
    n x n Hankel matrix with entry (i, j) = h_{first+i+j}.

    first=1 is the Ho-Kalman matrix whose rank is the minimal realization order;
    first=0 puts h_0 top-left, which adds the feedthrough as one extra state.
    """
    n = _check_count(n)
    if first not in (0, 1):
        raise LaguerreError(f"first must be 0 or 1, got {first!r}")
    values = _as_array(h)
    needed = first + 2 * n - 1
    if values.size < needed:
        raise InsufficientDataError(
            f"Hankel matrix of size {n} starting at h_{first} needs {needed} Markov parameters, got {values.size}"
        )
    return linalg.hankel(values[first:first + n], values[first + n - 1:first + 2 * n - 1])


def hankel_singular_values(matrix: np.ndarray) -> np.ndarray:
    return linalg.svdvals(np.asarray(matrix, dtype=float))


def numerical_rank(matrix: np.ndarray, tol: Optional[float] = None) -> int:
    """Number of singular values above tol * sigma_max."""
    tol = config.rank_rtol if tol is None else float(tol)
    if not tol > 0:
        raise LaguerreError(f"Rank tolerance must be positive, got {tol}")
    sigma = hankel_singular_values(matrix)
    if sigma.size == 0 or sigma[0] == 0:
        return 0
    rank = int(np.sum(sigma > tol * sigma[0]))
    logger.debug(f"Numerical rank {rank} of {matrix.shape} matrix (tol={tol:g}, sigma_max={sigma[0]:.3e})")
    return rank
