# core/laguerre/polynomials.py
"""Associerede Laguerre-polynomier og forsinkelsespolynomierne i kontinuert og diskret tid."""

import logging
from fractions import Fraction
from math import factorial
from typing import List, Sequence, Union

import numpy as np
from scipy.special import binom, comb

from ..config import config
from ..errors import LaguerreError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]


# --- Hjælpefunktioner ---

def _check_order(value, name: str, minimum: int = 0) -> int:
    """Validerer et polynomieindeks og returnerer det som int."""
    if isinstance(value, bool) or int(value) != value or value < minimum:
        raise LaguerreError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def _check_xi(xi: float) -> float:
    xi = float(xi)
    if not np.isfinite(xi) or not 0.0 < abs(xi) < 1.0:
        raise LaguerreError(f"xi must satisfy 0 < |xi| < 1, got {xi}")
    return xi


def binomial(n: int, k: int) -> int:
    """Integer binomial with C(n, k) = 0 for k > n and C(n, 0) = 1 for every n, negative n included."""
    if k < 0:
        return 0
    if k == 0:
        return 1
    if k > n:
        return 0
    return int(comb(n, k, exact=True))


def _horner(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    result = Fraction(0)
    for c in reversed(coeffs):
        result = result * x + c
    return result


def assoc_laguerre_coefficients(m: int, alpha: int) -> List[Fraction]:
    """Exact power-series coefficients of L_m(x; alpha) for integer alpha, lowest order first."""
    m = _check_order(m, "m")
    return [Fraction(binomial(m + alpha, m - n) * (-1) ** n, factorial(n)) for n in range(m + 1)]


# --- Associerede Laguerre-polynomier ---

def assoc_laguerre(m: int, alpha: float, x: ArrayLike):
    """
    Evaluates L_m(x; alpha) = sum_n (1/n!) C(m+alpha, m-n) (-x)^n.

    Integer alpha is summed in exact rational arithmetic (the argument is taken
    at its exact binary value), so the alternating sum does not cancel. Other
    values of alpha use gamma-based binomials in floating point.
    """
    m = _check_order(m, "m")
    alpha = float(alpha)
    if not np.isfinite(alpha):
        raise LaguerreError(f"alpha must be finite, got {alpha}")
    x_arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x_arr)):
        raise LaguerreError("assoc_laguerre requires finite arguments")

    if alpha.is_integer():
        coeffs = assoc_laguerre_coefficients(m, int(alpha))
        flat = [float(_horner(coeffs, Fraction(float(v)))) for v in x_arr.ravel()]
        values = np.array(flat, dtype=float).reshape(x_arr.shape)
    else:
        coeffs = np.array([binom(m + alpha, m - n) * (-1.0) ** n / factorial(n) for n in range(m + 1)])
        values = np.polynomial.polynomial.polyval(x_arr, coeffs)

    if values.ndim == 0:
        return float(values)
    return values


# --- Kontinuert forsinkelse: L_m(kappa) = L_m(+kappa; -1) ---

def cont_delay_poly_seq(m_max: int, kappa: ArrayLike) -> np.ndarray:
    """
    Returns [L_0(kappa), ..., L_{m_max}(kappa)] from the forward recurrence
    (m+1) L_{m+1} = (2m - kappa) L_m - (m-1) L_{m-1}, seeded with L_0 = 1, L_1 = -kappa.

    Array-valued kappa gives an array of shape (m_max + 1, *kappa.shape).
    """
    m_max = _check_order(m_max, "m_max")
    k = np.asarray(kappa, dtype=float)
    if not np.all(np.isfinite(k)) or np.any(k < 0):
        raise LaguerreError("kappa must be finite and non-negative")

    seq = np.empty((m_max + 1,) + k.shape, dtype=float)
    seq[0] = 1.0
    if m_max >= 1:
        seq[1] = -k
    for m in range(1, m_max):
        seq[m + 1] = ((2 * m - k) * seq[m] - (m - 1) * seq[m - 1]) / (m + 1)
    return seq


def cont_delay_poly(m: int, kappa: ArrayLike):
    """Single continuous delay polynomial; closed form up to the large-m threshold, recurrence above."""
    m = _check_order(m, "m")
    if m <= config.large_m_threshold:
        return assoc_laguerre(m, -1, kappa)
    values = cont_delay_poly_seq(m, kappa)[m]
    return float(values) if np.ndim(values) == 0 else values


# --- Diskret forsinkelse: L_m^(tau)(xi) ---

def disc_delay_poly(m: int, tau: int, xi: float) -> float:
    """
    Closed form (-xi)^(m-tau) * sum_{n<tau} C(m+n, n) C(m-1, tau-n-1) (-xi^2)^n.

    Evaluated exactly in rationals and rounded once. Undefined for m = 0.
    """
    if m == 0:
        raise LaguerreError("the discrete delay polynomial is undefined for m = 0; the recurrence never needs it")
    m = _check_order(m, "m", minimum=1)
    tau = _check_order(tau, "tau", minimum=1)
    x = Fraction(_check_xi(xi))

    total = sum(
        binomial(m + n, n) * binomial(m - 1, tau - n - 1) * (-x * x) ** n
        for n in range(tau)
    )
    return float((-x) ** (m - tau) * total)


def disc_delay_poly_seq(m_max: int, tau: int, xi: float, exact: bool = True) -> np.ndarray:
    """
    Returns [L_1^(tau)(xi), ..., L_{m_max}^(tau)(xi)] from the three-term recurrence
    L_{m+1} = a_m(xi) L_m + b_m L_{m-1}, seeded by L_1 = tau * xi^(tau-1); b_1 = 0 so L_0 never enters.

    Past m = tau the wanted solution is the recessive one (it decays like xi^m while the
    companion solution grows like xi^-m), so the floating-point recurrence loses about
    2*log10(1/xi) digits per step. With exact=True the recurrence runs in rational
    arithmetic and only the final values are rounded.
    """
    m_max = _check_order(m_max, "m_max", minimum=1)
    tau = _check_order(tau, "tau", minimum=1)
    xi = _check_xi(xi)
    one = Fraction(1) if exact else 1.0
    x = Fraction(xi) if exact else xi

    seq = [tau * x ** (tau - 1)]
    previous = 0 * one
    for m in range(1, m_max):
        a_m = -(m + tau) * one / (m + 1) * x - (m - tau) * one / ((m + 1) * x)
        b_m = -(m - 1) * one / (m + 1)
        seq.append(a_m * seq[-1] + b_m * previous)
        previous = seq[-2]
    return np.array([float(v) for v in seq], dtype=float)


def disc_delay_poly_roots(m: int, tau: int) -> np.ndarray:
    """
    Nonzero roots in xi of L_m^(tau), from the polynomial in s = xi^2 that
    remains after removing the monomial factor. Roots come in +/- pairs.
    """
    m = _check_order(m, "m", minimum=1)
    tau = _check_order(tau, "tau", minimum=1)
    coeffs = [binomial(m + n, n) * binomial(m - 1, tau - n - 1) * (-1) ** n for n in range(tau)]
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2:
        return np.array([], dtype=complex)

    s_roots = np.roots(np.array(coeffs[::-1], dtype=float)).astype(complex)
    xi_roots = np.sqrt(s_roots)
    return np.sort_complex(np.concatenate([xi_roots, -xi_roots]))


# --- Ortogonalitet ---

def orthogonality_integral(n: int, m: int) -> float:
    """
    Integral over (0, inf) of (e^-x / x) L_n(x) L_m(x) for the delay polynomials L_k = L_k(x; -1).

    L_k has no constant term for k >= 1, so the integrand is a polynomial times e^-x
    and the moments x^j -> j! give the exact value: 0 for n != m, 1/n for n = m.
    """
    if n == 0 or m == 0:
        raise LaguerreError("orthogonality integral diverges for index 0 (L_0 = 1 has a nonzero constant term)")
    n = _check_order(n, "n", minimum=1)
    m = _check_order(m, "m", minimum=1)

    left = assoc_laguerre_coefficients(n, -1)
    right = assoc_laguerre_coefficients(m, -1)
    product = [Fraction(0)] * (n + m + 1)
    for i, a in enumerate(left):
        for j, b in enumerate(right):
            product[i + j] += a * b
    # konstantleddet er nul, så division med x er et skift
    value = sum((c * factorial(j - 1) for j, c in enumerate(product) if j >= 1), Fraction(0))
    return float(value)
