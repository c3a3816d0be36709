# core/data/validators.py
"""Validering af indlæste signaler og spektre samt fortolkning af intervaller og gitre."""

from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..errors import ConfigurationError, LaguerreError

GridLike = Union[str, int, float, Sequence[Union[int, float]]]


class SignalDataValidator:
    """Rensning af tabeldata før de bliver til signaler og spektre"""

    # Relativ tolerance for et ensartet tidsgitter
    grid_rtol: float = 1e-6

    @classmethod
    def validate_signal_frame(cls, df: pd.DataFrame, time_col: str, value_col: str,
                              discrete: bool) -> Tuple[pd.DataFrame, List[str]]:
        """
        Returns the cleaned (t, value) frame sorted by time and the warnings collected on the way.
        Rows with non-numeric entries are dropped with a warning; a non-uniform grid is an error.
        """
        if df is None or df.empty:
            raise LaguerreError("No signal samples provided")

        warnings = []
        cleaned = pd.DataFrame({
            't': df[time_col].map(cls.safe_numeric),
            'value': df[value_col].map(cls.safe_numeric),
        })
        invalid = cleaned.isna().any(axis=1)
        if invalid.any():
            warnings.append(f"Dropped {int(invalid.sum())} rows with non-numeric time or value")
            cleaned = cleaned[~invalid]
        if len(cleaned) < 2:
            raise LaguerreError("A signal needs at least two valid samples")

        if not cleaned['t'].is_monotonic_increasing:
            warnings.append("Samples were not sorted by time; sorted them")
            cleaned = cleaned.sort_values('t')
        cleaned = cleaned.reset_index(drop=True)

        steps = np.diff(cleaned['t'].to_numpy())
        dt = float(np.median(steps))
        if dt <= 0 or not np.allclose(steps, dt, rtol=cls.grid_rtol, atol=0):
            raise LaguerreError("Signal samples must lie on a uniform time grid")
        if discrete:
            t = cleaned['t'].to_numpy()
            if not np.allclose(t, np.rint(t)) or not np.isclose(dt, 1.0):
                raise LaguerreError("Discrete signals must be sampled at consecutive integer times")
            cleaned['t'] = np.rint(t)
        if cleaned['t'].iloc[0] < 0:
            warnings.append("Samples before t = 0 lie outside the Laguerre basis support")
        return cleaned, warnings

    @classmethod
    def validate_coefficient_frame(cls, df: pd.DataFrame, index_col: str,
                                   value_col: str) -> Tuple[np.ndarray, List[str]]:
        """Coefficients indexed 0..N-1; missing indices are an error, unsorted rows only a warning."""
        if df is None or df.empty:
            raise LaguerreError("No coefficients provided")
        warnings = []
        index = df[index_col].map(cls.safe_numeric)
        values = df[value_col].map(cls.safe_numeric)
        if index.isna().any() or values.isna().any():
            raise LaguerreError("Coefficient table contains non-numeric entries")
        order = np.argsort(index.to_numpy(), kind='stable')
        if not np.array_equal(order, np.arange(len(order))):
            warnings.append("Coefficient rows were not in index order; sorted them")
        index, values = index.to_numpy()[order], values.to_numpy()[order]
        if not np.array_equal(index, np.arange(len(index))):
            raise LaguerreError("Coefficient indices must be 0, 1, ..., N-1 without gaps")
        return values.astype(float), warnings

    @staticmethod
    def safe_numeric(value, default=None) -> Optional[float]:
        """Numeric conversion that maps blanks and placeholders to `default`"""
        if value is None:
            return default
        if isinstance(value, (int, float, np.integer, np.floating)) and not isinstance(value, bool):
            if np.isnan(value) or np.isinf(value):
                return default
            return float(value)
        if isinstance(value, str):
            cleaned = value.strip().upper()
            if cleaned in ['', 'N/A', 'NONE', '-', '--', 'NULL', 'NAN']:
                return default
            try:
                number = float(cleaned)
            except ValueError:
                return default
            return number if np.isfinite(number) else default
        return default


safe_numeric = SignalDataValidator.safe_numeric


# --- Intervaller og gitre ---

def _split(text: str) -> List[str]:
    return [part.strip() for part in str(text).split(',') if part.strip()]


def parse_int_range(value: GridLike) -> List[int]:
    """'1..5' -> [1, 2, 3, 4, 5]; '1,3,7' -> [1, 3, 7]; lists and single integers pass through."""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return [int(value)]
    if not isinstance(value, str):
        values = list(value)
        if any(float(v) != int(v) for v in values):
            raise ConfigurationError(f"Expected integers, got {values}")
        return [int(v) for v in values]

    text = value.strip()
    if '..' in text:
        start, _, stop = text.partition('..')
        try:
            first, last = int(start), int(stop)
        except ValueError:
            raise ConfigurationError(f"Invalid integer range '{value}', expected a..b")
        if last < first:
            raise ConfigurationError(f"Empty integer range '{value}'")
        return list(range(first, last + 1))
    try:
        return [int(part) for part in _split(text)]
    except ValueError:
        raise ConfigurationError(f"Invalid integer list '{value}'")


def parse_float_grid(value: GridLike) -> List[float]:
    """
    '0.1..0.9:0.2' -> [0.1, 0.3, 0.5, 0.7, 0.9]; '0.05,0.18' -> [0.05, 0.18].
    Grid points are rounded to 12 decimals so stepped grids give the literal values.
    """
    if isinstance(value, (int, float, np.integer, np.floating)) and not isinstance(value, bool):
        return [float(value)]
    if not isinstance(value, str):
        return [float(v) for v in value]

    text = value.strip()
    if '..' in text:
        bounds, _, step_text = text.partition(':')
        start, _, stop = bounds.partition('..')
        try:
            first, last = float(start), float(stop)
            step = float(step_text) if step_text else 1.0
        except ValueError:
            raise ConfigurationError(f"Invalid grid '{value}', expected a..b:step")
        if step <= 0 or last < first:
            raise ConfigurationError(f"Empty grid '{value}'")
        count = int(np.floor((last - first) / step + 1e-9)) + 1
        return [round(first + k * step, 12) for k in range(count)]
    try:
        return [float(part) for part in _split(text)]
    except ValueError:
        raise ConfigurationError(f"Invalid number list '{value}'")


def parse_coeffs(value: GridLike) -> List[float]:
    """'6,-3,2,-1' -> [6.0, -3.0, 2.0, -1.0]."""
    if isinstance(value, str):
        try:
            coeffs = [float(part) for part in _split(value)]
        except ValueError:
            raise ConfigurationError(f"Invalid coefficient list '{value}'")
    else:
        coeffs = [float(v) for v in np.atleast_1d(value)]
    if not coeffs:
        raise ConfigurationError("Coefficient list is empty")
    return coeffs
