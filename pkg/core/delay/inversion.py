# core/delay/inversion.py
"""Invertering af det nedre trekantede Toeplitz-system mellem spektre og Markov-parametre."""

import logging
from dataclasses import dataclass
from math import fsum
from typing import Optional, Sequence, Union

import numpy as np
from scipy import linalg

from ..config import config
from ..errors import DomainMismatchError, InsufficientDataError, LaguerreError, SingularDenominatorError
from ..laguerre.basis import Spectrum
from .operator import MarkovSequence

logger = logging.getLogger(__name__)


@dataclass
class InverseCoeffs:
    """First column g of the inverse of the lower-triangular Toeplitz matrix built from `source`."""
    g: np.ndarray
    source: np.ndarray


def _as_sequence(values: Union[Spectrum, Sequence[float], np.ndarray]) -> np.ndarray:
    if isinstance(values, Spectrum):
        return values.coeffs
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1 or arr.size < 1:
        raise LaguerreError("Expected a non-empty one-dimensional sequence")
    if not np.all(np.isfinite(arr)):
        raise LaguerreError("Sequence entries must be finite")
    return arr


def toeplitz_matrix(seq: Union[Spectrum, Sequence[float], np.ndarray]) -> np.ndarray:
    """Lower-triangular Toeplitz matrix T(seq) with seq as first column."""
    col = _as_sequence(seq)
    return linalg.toeplitz(col, np.zeros(col.size))


def toeplitz_inverse_coeffs(u: Union[Spectrum, Sequence[float], np.ndarray]) -> InverseCoeffs:
    """
    g_0 = 1/u_0 and g_k = -(1/u_0) sum_{j<k} u_{k-j} g_j.

    Every sum is accumulated with math.fsum, so the recursion only rounds once per entry.
    """
    u = _as_sequence(u)
    u0 = u[0]
    if u0 == 0:
        raise SingularDenominatorError(
            "u_0 = 0: the Toeplitz system is singular; strip the leading zero coefficients "
            "(recover_markov does this automatically) before inverting"
        )
    g = np.empty(u.size)
    g[0] = 1.0 / u0
    for k in range(1, u.size):
        g[k] = -fsum(u[k - j] * g[j] for j in range(k)) / u0
    return InverseCoeffs(g=g, source=u.copy())


def recover_markov(u: Spectrum, y: Spectrum, count: Optional[int] = None,
                   zero_threshold: Optional[float] = None) -> MarkovSequence:
    """
    Markov parameters h_0..h_{count-1} from input and output spectra.

    Leading input coefficients with |u_j| <= zero_threshold are stripped; the output
    coefficients at those indices carry no information about the delay and are
    returned as the disturbance prefix. Then h_k = sum_{j<=k} g_{k-j} y_{m+j}.
    """
    if u.params != y.params:
        raise DomainMismatchError("Input and output spectra use different Laguerre parameters")
    if len(u) != len(y):
        raise InsufficientDataError(f"Input and output spectra differ in length ({len(u)} vs {len(y)})")

    threshold = config.zero_threshold if zero_threshold is None else float(zero_threshold)
    nonzero = np.flatnonzero(np.abs(u.coeffs) > threshold)
    if nonzero.size == 0:
        raise InsufficientDataError("Input spectrum is identically zero; the delay cannot be recovered")
    offset = int(nonzero[0])

    available = len(u) - offset
    count = available if count is None else int(count)
    if count < 1:
        raise LaguerreError(f"count must be a positive integer, got {count}")
    if count > available:
        raise InsufficientDataError(
            f"Requested {count} Markov parameters but only {available} coefficients remain after "
            f"stripping {offset} leading zeros"
        )

    warnings = []
    if offset:
        message = f"Stripped {offset} leading zero input coefficients; output prefix treated as disturbance"
        logger.info(message)
        warnings.append(message)

    u_used = u.coeffs[offset:offset + count]
    y_used = y.coeffs[offset:offset + count]
    g = toeplitz_inverse_coeffs(u_used).g
    h = np.array([fsum(g[k - j] * y_used[j] for j in range(k + 1)) for k in range(count)])

    condition = float(np.max(np.abs(g)) * np.max(np.abs(u_used)))
    if condition > config.condition_warning:
        message = f"Toeplitz inversion is ill-conditioned (estimate {condition:.3e}); recovered values may be inaccurate"
        logger.warning(message)
        warnings.append(message)

    return MarkovSequence(
        h,
        params=u.params,
        offset=offset,
        disturbance_prefix=y.coeffs[:offset].copy(),
        condition_estimate=condition,
        warnings=warnings,
    )
