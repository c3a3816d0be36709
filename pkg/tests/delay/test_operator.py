# tests/delay/test_operator.py

import math

import numpy as np
import pytest

from core.errors import DomainMismatchError, InsufficientDataError, LaguerreError
from core.laguerre.basis import (
    Domain,
    LaguerreParams,
    LaguerreSeries,
    Spectrum,
    project,
    project_function,
    synthesize,
    time_shift,
)
from core.delay.operator import (
    DelaySpec,
    MarkovSequence,
    StateSpaceRealization,
    apply_delay,
    cont_markov,
    disc_markov,
    disc_realization,
    hankel,
    hankel_singular_values,
    markov,
    numerical_rank,
    realization_markov,
    simulate_realization,
)


def cont_spec(kappa: float, p: float = 0.18) -> DelaySpec:
    return DelaySpec(LaguerreParams(p, Domain.CONTINUOUS), kappa / (2.0 * p))


def disc_spec(tau: int, p: float = 0.25) -> DelaySpec:
    return DelaySpec(LaguerreParams(p, Domain.DISCRETE), tau)

# ======================================================================
#  DELAYSPEC
# ======================================================================

def test_delay_spec_derived_values():
    spec = DelaySpec(LaguerreParams(0.18, "cont"), 5.0)
    assert spec.kappa == pytest.approx(1.8)
    assert disc_spec(3).xi == 0.5
    with pytest.raises(DomainMismatchError):
        spec.xi


@pytest.mark.parametrize("domain, tau", [
    ("cont", -0.5),
    ("disc", 0),
    ("disc", 2.5),
])
def test_delay_spec_validation(domain, tau):
    with pytest.raises(LaguerreError):
        DelaySpec(LaguerreParams(0.25, domain), tau)

# ======================================================================
#  MARKOV-PARAMETRE
# ======================================================================

def test_cont_markov_reproduces_published_values():
    h = cont_markov(DelaySpec(LaguerreParams(0.18, "cont"), 5.0), 4).h
    assert h[0] == pytest.approx(math.exp(-0.9), abs=1e-15)
    np.testing.assert_allclose(h[1:], [-0.7318, -0.0732, 0.1903], atol=5e-5)
    np.testing.assert_allclose(h, [0.40657, -0.73183, -0.07318, 0.19027], atol=1e-5)


def test_cont_markov_zero_delay_is_identity():
    np.testing.assert_array_equal(cont_markov(cont_spec(0.0), 3).h, [1.0, 0.0, 0.0])


def test_cont_markov_first_step():
    h = cont_markov(cont_spec(0.8), 2).h
    np.testing.assert_allclose(h, [math.exp(-0.4), -0.8 * math.exp(-0.4)], rtol=1e-12)


@pytest.mark.parametrize("tau, expected", [
    (1, [0.5, 0.75, -0.375, 0.1875]),
    (2, [0.25, 0.75, 0.1875, -0.375]),
])
def test_disc_markov_small_cases(tau, expected):
    np.testing.assert_allclose(disc_markov(disc_spec(tau), 4).h, expected, rtol=1e-15)


@pytest.mark.parametrize("tau", [1, 3, 7])
def test_disc_markov_single_entry(tau):
    assert disc_markov(disc_spec(tau, 0.3), 1).h[0] == pytest.approx(0.3 ** (tau / 2), rel=1e-14)


def test_markov_dispatch_and_domain_checks():
    assert markov(disc_spec(1), 2).spec.domain is Domain.DISCRETE
    with pytest.raises(DomainMismatchError):
        cont_markov(disc_spec(1), 3)
    with pytest.raises(DomainMismatchError):
        disc_markov(cont_spec(1.0), 3)


@pytest.mark.parametrize("tau", [1, 4, 9])
def test_disc_markov_has_unit_energy(tau):
    # forsinkelsen er en isometri, så impulssvaret har norm 1
    h = disc_markov(disc_spec(tau, 0.4), 200).h
    assert np.sum(h ** 2) == pytest.approx(1.0, abs=1e-12)


def test_markov_sequence_rejects_nonfinite():
    with pytest.raises(LaguerreError):
        MarkovSequence([1.0, np.nan])

# ======================================================================
#  SPEKTRAL FOLDNING
# ======================================================================

def test_apply_delay_zero_delay_is_identity():
    spec = cont_spec(0.0)
    u = Spectrum(spec.params, [6.0, -3.0, 2.0, -1.0])
    np.testing.assert_array_equal(apply_delay(spec, u).coeffs, u.coeffs)


def test_apply_delay_discrete_two_terms():
    spec = disc_spec(1)
    y = apply_delay(spec, Spectrum(spec.params, [1.0, 1.0]))
    np.testing.assert_allclose(y.coeffs, [0.5, 1.25])


def test_apply_delay_rejects_parameter_mismatch():
    spec = disc_spec(1)
    with pytest.raises(DomainMismatchError):
        apply_delay(spec, Spectrum(LaguerreParams(0.3, "disc"), [1.0]))


def test_apply_delay_is_causal_in_the_index():
    spec = cont_spec(1.8)
    y = apply_delay(spec, Spectrum(spec.params, [0.0, 0.0, 1.0, 2.0, -1.0]))
    assert y.coeffs[0] == 0.0 and y.coeffs[1] == 0.0


@pytest.mark.parametrize("seed", range(5))
def test_apply_delay_matches_discrete_time_domain_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 21))
    tau = int(rng.integers(1, 8))
    p = float(rng.uniform(0.1, 0.8))
    spec = disc_spec(tau, p)
    u = Spectrum(spec.params, rng.uniform(-5, 5, n))

    oracle = project(time_shift(synthesize(u), tau), spec.params, n)
    np.testing.assert_allclose(apply_delay(spec, u).coeffs, oracle.coeffs, atol=1e-8)


def test_apply_delay_matches_continuous_time_domain_oracle():
    spec = DelaySpec(LaguerreParams(0.18, "cont"), 5.0)
    u = Spectrum(spec.params, [6.0, -3.0, 2.0, -1.0] + [0.0] * 21)
    delayed = LaguerreSeries(u).delayed(spec.tau)
    oracle = project_function(delayed, spec.params, 25, duration=spec.tau, breakpoints=[spec.tau])
    np.testing.assert_allclose(apply_delay(spec, u).coeffs, oracle.coeffs, atol=1e-4)

    sampled = project(time_shift(synthesize(u), spec.tau), spec.params, 25)
    np.testing.assert_allclose(apply_delay(spec, u).coeffs, sampled.coeffs, atol=1e-4)

# ======================================================================
#  TILSTANDSFORM
# ======================================================================

def test_disc_realization_first_order():
    ss = disc_realization(disc_spec(1))
    np.testing.assert_allclose(ss.F, [[-0.5]])
    np.testing.assert_allclose(ss.G.ravel(), [0.75])
    np.testing.assert_allclose(ss.H.ravel(), [1.0])
    assert ss.J == 0.5


def test_disc_realization_second_order():
    ss = disc_realization(disc_spec(2))
    np.testing.assert_allclose(ss.F, [[-0.5, 0.75], [0.0, -0.5]])
    np.testing.assert_allclose(ss.G.ravel(), [0.375, 0.75])
    np.testing.assert_allclose(ss.H.ravel(), [1.0, 0.5])
    assert ss.J == 0.25


def test_disc_realization_requires_discrete_spec():
    with pytest.raises(DomainMismatchError):
        disc_realization(cont_spec(1.0))


@pytest.mark.parametrize("p", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
def test_realization_agrees_with_polynomials(p):
    for tau in range(1, 11):
        spec = disc_spec(tau, p)
        np.testing.assert_allclose(
            realization_markov(disc_realization(spec), 30), disc_markov(spec, 30).h, rtol=0, atol=1e-12
        )


@pytest.mark.parametrize("u, expected", [
    ([1.0, 0.0, 0.0, 0.0], [0.5, 0.75, -0.375, 0.1875]),
    ([0.0, 0.0, 0.0], [0.0, 0.0, 0.0]),
    ([1.0, 1.0], [0.5, 1.25]),
])
def test_simulate_realization(u, expected):
    spec = disc_spec(1)
    y = simulate_realization(disc_realization(spec), Spectrum(spec.params, u))
    np.testing.assert_allclose(y.coeffs, expected, atol=1e-15)


def test_state_space_dimension_mismatch():
    with pytest.raises(LaguerreError):
        StateSpaceRealization(np.eye(2), [1.0], [1.0, 0.0], 0.0)

# ======================================================================
#  HANKEL-RANG
# ======================================================================

def test_hankel_layout():
    h = np.arange(6, dtype=float)
    np.testing.assert_array_equal(hankel(h, 3, first=0), [[0, 1, 2], [1, 2, 3], [2, 3, 4]])
    np.testing.assert_array_equal(hankel(h, 3), [[1, 2, 3], [2, 3, 4], [3, 4, 5]])


def test_hankel_needs_enough_parameters():
    with pytest.raises(InsufficientDataError):
        hankel([1.0, 2.0, 3.0], 2)


@pytest.mark.parametrize("p", [0.25, 0.5])
@pytest.mark.parametrize("tau", range(1, 9))
def test_discrete_hankel_rank_is_min_of_size_and_delay(p, tau):
    h = disc_markov(disc_spec(tau, p), 2 * 12 + 1)
    for n in range(1, 13):
        assert numerical_rank(hankel(h, n), 1e-9) == min(n, tau)


@pytest.mark.parametrize("tau, n, expected", [(2, 3, 2), (5, 3, 3)])
def test_discrete_hankel_rank_examples(tau, n, expected):
    assert numerical_rank(hankel(disc_markov(disc_spec(tau), 2 * n + 1), n)) == expected


def test_hankel_with_feedthrough_adds_one_state():
    h = disc_markov(disc_spec(2), 7)
    assert numerical_rank(hankel(h, 3, first=0)) == 3


def test_hankel_singular_values_are_sorted_and_drop_after_the_delay():
    sigma = hankel_singular_values(hankel(disc_markov(disc_spec(2), 9), 4))
    assert np.all(np.diff(sigma) <= 0)
    assert sigma[1] > 1e-6 * sigma[0]
    assert np.all(sigma[2:] <= 1e-12 * sigma[0])


@pytest.mark.parametrize("kappa", [0.5, 1.8, 5.0])
def test_continuous_hankel_has_full_rank(kappa):
    h = cont_markov(cont_spec(kappa), 2 * 12 + 1)
    for n in range(1, 13):
        assert numerical_rank(hankel(h, n), 1e-9) == n


def test_numerical_rank_edge_cases():
    assert numerical_rank(np.zeros((3, 3))) == 0
    with pytest.raises(LaguerreError):
        numerical_rank(np.eye(2), tol=0.0)
