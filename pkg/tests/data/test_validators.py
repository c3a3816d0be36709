# tests/data/test_validators.py

import numpy as np
import pandas as pd
import pytest

from core.data.validators import (
    SignalDataValidator,
    parse_coeffs,
    parse_float_grid,
    parse_int_range,
    safe_numeric,
)
from core.errors import ConfigurationError, LaguerreError

# ======================================================================
#  UNIT TESTS FOR HJÆLPEFUNKTIONER
# ======================================================================

@pytest.mark.parametrize("value, expected", [
    ('2.5', 2.5),
    (' -1e-3 ', -0.001),
    (3, 3.0),
    ('N/A', None),
    ('-', None),
    ('', None),
    (float('nan'), None),
    (float('inf'), None),
    ('abc', None),
    (True, None),
    (None, None),
])
def test_safe_numeric(value, expected):
    assert safe_numeric(value) == expected


@pytest.mark.parametrize("value, expected", [
    ("1..5", [1, 2, 3, 4, 5]),
    ("1,3,7", [1, 3, 7]),
    ("4", [4]),
    (4, [4]),
    ([2, 3.0], [2, 3]),
])
def test_parse_int_range(value, expected):
    assert parse_int_range(value) == expected


@pytest.mark.parametrize("value", ["5..1", "a..b", "1,x", [1.5]])
def test_parse_int_range_invalid(value):
    with pytest.raises(ConfigurationError):
        parse_int_range(value)


@pytest.mark.parametrize("value, expected", [
    ("0.1..0.9:0.2", [0.1, 0.3, 0.5, 0.7, 0.9]),
    ("0.05,0.18,0.5", [0.05, 0.18, 0.5]),
    ("1..3", [1.0, 2.0, 3.0]),
    (0.5, [0.5]),
    ([0.5, 5], [0.5, 5.0]),
])
def test_parse_float_grid(value, expected):
    assert parse_float_grid(value) == expected


@pytest.mark.parametrize("value", ["1..0", "0..1:0", "0..1:-1", "x,y"])
def test_parse_float_grid_invalid(value):
    with pytest.raises(ConfigurationError):
        parse_float_grid(value)


def test_parse_coeffs():
    assert parse_coeffs("6,-3,2,-1") == [6.0, -3.0, 2.0, -1.0]
    assert parse_coeffs([1, 2]) == [1.0, 2.0]
    with pytest.raises(ConfigurationError):
        parse_coeffs("")

# ======================================================================
#  SIGNALTABELLER
# ======================================================================

def test_signal_frame_is_sorted_and_cleaned():
    df = pd.DataFrame({'t': [0.2, 0.0, 0.1, 'x'], 'value': [3.0, 1.0, 2.0, 9.0]})
    cleaned, warnings = SignalDataValidator.validate_signal_frame(df, 't', 'value', discrete=False)
    assert list(cleaned['value']) == [1.0, 2.0, 3.0]
    assert len(warnings) == 2


def test_non_uniform_grid_is_rejected():
    df = pd.DataFrame({'t': [0.0, 0.1, 0.3], 'value': [1.0, 2.0, 3.0]})
    with pytest.raises(LaguerreError, match="uniform"):
        SignalDataValidator.validate_signal_frame(df, 't', 'value', discrete=False)


def test_discrete_signal_needs_integer_times():
    df = pd.DataFrame({'t': [0.0, 0.5, 1.0], 'value': [1.0, 2.0, 3.0]})
    with pytest.raises(LaguerreError, match="integer"):
        SignalDataValidator.validate_signal_frame(df, 't', 'value', discrete=True)


def test_negative_times_give_a_warning():
    df = pd.DataFrame({'t': [-1.0, 0.0, 1.0], 'value': [1.0, 2.0, 3.0]})
    _, warnings = SignalDataValidator.validate_signal_frame(df, 't', 'value', discrete=True)
    assert any("t = 0" in w for w in warnings)


@pytest.mark.parametrize("df", [None, pd.DataFrame({'t': [], 'value': []}),
                                pd.DataFrame({'t': [0.0], 'value': [1.0]})])
def test_too_few_samples(df):
    with pytest.raises(LaguerreError):
        SignalDataValidator.validate_signal_frame(df, 't', 'value', discrete=False)

# ======================================================================
#  KOEFFICIENTTABELLER
# ======================================================================

def test_coefficient_frame_sorted_by_index():
    df = pd.DataFrame({'j': [1, 0, 2], 'coeff': [-3.0, 6.0, 2.0]})
    values, warnings = SignalDataValidator.validate_coefficient_frame(df, 'j', 'coeff')
    np.testing.assert_array_equal(values, [6.0, -3.0, 2.0])
    assert len(warnings) == 1


@pytest.mark.parametrize("df", [
    pd.DataFrame({'j': [0, 2], 'coeff': [1.0, 2.0]}),
    pd.DataFrame({'j': [0, 1], 'coeff': [1.0, 'x']}),
])
def test_invalid_coefficient_frames(df):
    with pytest.raises(LaguerreError):
        SignalDataValidator.validate_coefficient_frame(df, 'j', 'coeff')
