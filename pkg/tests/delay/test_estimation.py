# tests/delay/test_estimation.py

import math
from fractions import Fraction

import numpy as np
import pytest

from core.errors import ConfigurationError, InsufficientDataError, LaguerreError, SingularDenominatorError
from core.laguerre.basis import Domain, LaguerreParams, Spectrum
from core.laguerre.polynomials import binomial
from core.delay.estimation import (
    DelayEstimate,
    EstimationMethod,
    estimate_delay,
    estimate_from_markov,
    kappa_from_markov,
    tau_disc_from_markov,
    tau_from_h0,
)
from core.delay.operator import DelaySpec, MarkovSequence, apply_delay, cont_markov, disc_markov, markov

U_COEFFS = [6.0, -3.0, 2.0, -1.0]


def cont_markov_for(kappa, count, p=0.18):
    return cont_markov(DelaySpec(LaguerreParams(p, "cont"), kappa / (2.0 * p)), count)


def disc_markov_for(tau, p, count):
    return disc_markov(DelaySpec(LaguerreParams(p, "disc"), tau), count)


def vanishes_exactly(m, tau, p_text):
    """True when L_m^(tau)(sqrt(p)) is zero for the exact decimal p (the polynomial part in s = p)."""
    s = Fraction(p_text)
    return sum(binomial(m + n, n) * binomial(m - 1, tau - n - 1) * (-s) ** n for n in range(tau)) == 0

# ======================================================================
#  KONTINUERT: KAPPA
# ======================================================================

def test_kappa_from_published_rounded_values():
    h = [0.40657, -0.7318, -0.0732, 0.1903]
    assert kappa_from_markov(h, 2) == pytest.approx(1.802, abs=1e-3)


def test_kappa_at_m_one_ignores_h0():
    h = cont_markov_for(1.8, 4).h.copy()
    assert kappa_from_markov(h, 1) == pytest.approx(1.8, rel=1e-12)
    h[0] = 123.0
    assert kappa_from_markov(h, 1) == pytest.approx(1.8, rel=1e-12)


def test_kappa_zero_delay():
    assert kappa_from_markov(cont_markov_for(0.0, 4), 1) == 0.0


@pytest.mark.parametrize("kappa", [0.1, 0.5, 1.8, 5.0, 20.0])
def test_kappa_constant_across_m(kappa):
    h = cont_markov_for(kappa, 22)
    for m in range(1, 21):
        assert kappa_from_markov(h, m) == pytest.approx(kappa, rel=1e-9)


def test_kappa_guard_on_vanishing_denominator():
    # L_2(2; -1) = 0, så h_2 forsvinder for kappa = 2
    h = cont_markov_for(2.0, 4, p=0.5)
    with pytest.raises(SingularDenominatorError):
        kappa_from_markov(h, 2)


def test_kappa_needs_three_entries():
    with pytest.raises(InsufficientDataError):
        kappa_from_markov([1.0, 0.5], 1)

# ======================================================================
#  DISKRET: TAU
# ======================================================================

@pytest.mark.parametrize("tau, p, m, expected", [
    (1, 0.25, 2, 1.0),
    (2, 0.25, 2, 2.0),
])
def test_tau_disc_examples(tau, p, m, expected):
    assert tau_disc_from_markov(disc_markov_for(tau, p, 4), m, p) == pytest.approx(expected, abs=1e-15)


def test_tau_disc_large_delay_at_m_one():
    assert tau_disc_from_markov(disc_markov_for(5, 0.5, 4), 1, 0.5) == pytest.approx(5.0, abs=1e-10)


@pytest.mark.parametrize("p_text", ["0.1", "0.3", "0.5", "0.7", "0.9"])
def test_tau_disc_integer_exact_over_grid(p_text):
    p = float(p_text)
    for tau in range(1, 51):
        h = disc_markov_for(tau, p, 12)
        scale = np.max(np.abs(h.h))
        for m in range(1, 11):
            if vanishes_exactly(m, tau, p_text):
                try:
                    raw = tau_disc_from_markov(h, m, p)
                except SingularDenominatorError:
                    continue
                assert round(raw) == tau
                continue
            raw = tau_disc_from_markov(h, m, p)
            assert round(raw) == tau
            if abs(h.h[m]) >= 1e-6 * scale:
                assert abs(raw - tau) <= 1e-8


def test_tau_disc_rejects_bad_p():
    with pytest.raises(LaguerreError):
        tau_disc_from_markov([0.5, 0.75, -0.375], 1, 1.0)


def test_known_vanishing_discrete_parameter():
    # p = 0.5, tau = 2: L_3^(2)(1/sqrt(2)) = 0
    assert vanishes_exactly(3, 2, "0.5")
    h = disc_markov_for(2, 0.5, 6)
    with pytest.raises(SingularDenominatorError):
        tau_disc_from_markov(h, 3, 0.5)

# ======================================================================
#  H0-FORMLEN
# ======================================================================

@pytest.mark.parametrize("h0, p, domain, expected", [
    (math.exp(-0.9), 0.18, "cont", 5.0),
    (0.25, 0.25, "disc", 2.0),
    (1.0, 0.7, "cont", 0.0),
])
def test_tau_from_h0(h0, p, domain, expected):
    assert tau_from_h0(h0, p, domain) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("h0", [0.0, -0.2])
def test_tau_from_h0_rejects_nonpositive(h0):
    with pytest.raises(LaguerreError):
        tau_from_h0(h0, 0.5, "cont")

# ======================================================================
#  AGGREGERING
# ======================================================================

def test_estimate_delay_continuous_pipeline():
    spec = DelaySpec(LaguerreParams(0.18, "cont"), 5.0)
    u = Spectrum(spec.params, U_COEFFS + [0.0] * 4)
    estimate = estimate_delay(u, apply_delay(spec, u), m_range={1, 2, 3})
    assert estimate.tau == pytest.approx(5.0, abs=1e-9)
    assert estimate.value == pytest.approx(1.8, abs=1e-9)
    assert [m for m, _ in estimate.per_m] == [1, 2, 3]
    assert estimate.tau_rounded is None


@pytest.fixture
def discrete_case():
    rng = np.random.default_rng(11)
    spec = DelaySpec(LaguerreParams(0.4, "disc"), 7)
    coeffs = rng.uniform(-0.2, 0.2, 12)
    coeffs[0] = 3.0
    u = Spectrum(spec.params, coeffs)
    return spec, u, apply_delay(spec, u)


def test_estimate_delay_discrete_pipeline(discrete_case):
    spec, u, y = discrete_case
    estimate = estimate_delay(u, y, m_range=range(1, 6))
    assert estimate.tau_rounded == 7
    assert estimate.domain is Domain.DISCRETE
    assert estimate.to_dict()["tau_rounded"] == 7


def test_estimate_delay_with_disturbance_prefix(discrete_case):
    spec, u, y = discrete_case
    u_shifted = Spectrum(spec.params, np.concatenate([[0.0, 0.0], u.coeffs]))
    y_shifted = Spectrum(spec.params, np.concatenate([[9.5, -14.0], y.coeffs]))
    base = estimate_delay(u, y, m_range=range(1, 6))
    shifted = estimate_delay(u_shifted, y_shifted, m_range=range(1, 6))
    assert shifted.tau_rounded == base.tau_rounded == 7
    assert shifted.value == base.value


@pytest.mark.parametrize("p", [0.05, 0.18, 0.5])
def test_continuous_estimate_independent_of_laguerre_parameter(p):
    spec = DelaySpec(LaguerreParams(p, "cont"), 5.0)
    u = Spectrum(spec.params, U_COEFFS + [0.0] * 21)
    assert estimate_delay(u, apply_delay(spec, u)).tau == pytest.approx(5.0, abs=1e-6)


@pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_discrete_estimate_independent_of_laguerre_parameter(p):
    for tau in (1, 4, 13, 50):
        h = disc_markov_for(tau, p, 12)
        assert estimate_from_markov(h, range(1, 11)).tau_rounded == tau


@pytest.mark.parametrize("domain, tau", [("cont", 5.0), ("cont", 0.7), ("disc", 3), ("disc", 9)])
def test_h0_method_agrees_with_three_term(domain, tau):
    spec = DelaySpec(LaguerreParams(0.3, domain), tau)
    h = markov(spec, 12)
    three_term = estimate_from_markov(h, range(1, 6))
    via_h0 = estimate_from_markov(h, method="h0_log")
    assert via_h0.method is EstimationMethod.H0_LOG
    assert via_h0.tau == pytest.approx(three_term.tau, abs=1e-9)


def test_estimate_skips_vanishing_m():
    h = disc_markov_for(2, 0.5, 8)
    estimate = estimate_from_markov(h, range(1, 6))
    assert 3 in estimate.skipped
    assert estimate.tau_rounded == 2


def test_estimate_caps_m_range():
    h = cont_markov_for(1.8, 5)
    estimate = estimate_from_markov(h, range(1, 10))
    assert [m for m, _ in estimate.per_m] == [1, 2, 3]
    assert any("capped" in w for w in estimate.warnings)


def test_empty_m_range_is_rejected():
    params = LaguerreParams(0.18, "cont")
    u = Spectrum(params, U_COEFFS)
    with pytest.raises(ConfigurationError):
        estimate_delay(u, u, m_range=[])


def test_estimate_needs_parameters():
    with pytest.raises(ConfigurationError):
        estimate_from_markov(MarkovSequence([1.0, 0.0, 0.0]))


def test_unknown_method_is_rejected():
    with pytest.raises(ConfigurationError):
        EstimationMethod.parse("least_squares")


def test_delay_estimate_serialises_per_m():
    estimate = DelayEstimate(1.8, [(1, 1.8), (2, 1.8)], EstimationMethod.THREE_TERM, Domain.CONTINUOUS, 5.0, 0.18)
    data = estimate.to_dict()
    assert data["domain"] == "continuous"
    assert data["per_m"] == [{"m": 1, "value": 1.8}, {"m": 2, "value": 1.8}]
    assert "tau_rounded" not in data
