# core/data/serialization.py
"""
CSV- og JSON-formater for signaler, spektre, Markov-parametre, realiseringer,
estimater og eksperimentrapporter.

CSV skrives med pandas og 17 betydende cifre; JSON skrives med json-modulets
repr af floats (korteste eksakte repræsentation), så samme input giver samme bytes.
"""

import json
import logging
import math
import os
import sys
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from ..delay.estimation import DelayEstimate
from ..delay.operator import MarkovSequence, StateSpaceRealization
from ..errors import ConfigurationError, LaguerreError
from ..laguerre.basis import Domain, LaguerreParams, SampledSignal, Spectrum
from .validators import SignalDataValidator

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'

TIME_COLUMNS = ['t', 'time', 'Time', 'T']
VALUE_COLUMNS = ['value', 'u', 'y', 'signal', 'Value']
INDEX_COLUMNS = ['j', 'k', 'index']
COEFF_COLUMNS = ['coeff', 'h', 'value', 'w']


def find_column_name(df: pd.DataFrame, possible_names: List[str]) -> Optional[str]:
    """Finder det første matchende kolonnenavn i en liste."""
    for name in possible_names:
        if name in df.columns:
            return name
    return None


def _require_column(df: pd.DataFrame, possible_names: List[str], path: str) -> str:
    name = find_column_name(df, possible_names)
    if name is None:
        raise LaguerreError(f"{path}: none of the columns {possible_names} found (got {list(df.columns)})")
    return name


def _detect_format(path: str, fmt: Optional[str]) -> str:
    if fmt:
        return fmt
    return 'json' if str(path).lower().endswith('.json') else 'csv'


# --- JSON ---

def _plain(value: Any) -> Any:
    """numpy and NaN free copy of a report structure."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, Domain):
        return value.value
    return value


def dumps_json(data: Any) -> str:
    return json.dumps(_plain(data), indent=2, allow_nan=False) + "\n"


def _write_text(text: str, path: Optional[str]):
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text)
    logger.debug(f"Wrote {path}")


def _read_json(path: str) -> Dict[str, Any]:
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def frame_to_csv(df: pd.DataFrame) -> str:
    return df.to_csv(index=False, float_format=FLOAT_FORMAT)


# --- Signaler ---

def signal_to_frame(signal: SampledSignal) -> pd.DataFrame:
    return pd.DataFrame({'t': signal.t, 'value': signal.values})


def write_signal(signal: SampledSignal, path: Optional[str] = None):
    _write_text(frame_to_csv(signal_to_frame(signal)), path)


def read_signal(path: str, domain) -> Tuple[SampledSignal, List[str]]:
    """Reads a sampled signal from CSV (columns t and value, common aliases accepted)."""
    domain = Domain.parse(domain)
    df = pd.read_csv(path)
    time_col = _require_column(df, TIME_COLUMNS, path)
    value_col = _require_column(df, VALUE_COLUMNS, path)
    cleaned, warnings = SignalDataValidator.validate_signal_frame(
        df, time_col, value_col, discrete=domain is Domain.DISCRETE
    )
    for warning in warnings:
        logger.warning(f"{path}: {warning}")
    t = cleaned['t'].to_numpy()
    dt = float(t[1] - t[0])
    return SampledSignal(domain, cleaned['value'].to_numpy(), dt=dt, t0=float(t[0])), warnings


# --- Spektre ---

def spectrum_to_dict(spectrum: Spectrum) -> Dict[str, Any]:
    data = {'p': spectrum.params.p, 'domain': spectrum.params.domain.value, 'coeffs': spectrum.coeffs}
    if spectrum.warnings:
        data['warnings'] = list(spectrum.warnings)
    return data


def spectrum_from_dict(data: Dict[str, Any]) -> Spectrum:
    try:
        params = LaguerreParams(data['p'], data['domain'])
        return Spectrum(params, data['coeffs'])
    except KeyError as e:
        raise LaguerreError(f"Spectrum JSON is missing the field {e}")


def spectrum_to_frame(spectrum: Spectrum) -> pd.DataFrame:
    return pd.DataFrame({'j': np.arange(len(spectrum)), 'coeff': spectrum.coeffs})


def write_spectrum(spectrum: Spectrum, path: Optional[str] = None, fmt: Optional[str] = None):
    if _detect_format(path or '', fmt) == 'json':
        _write_text(dumps_json(spectrum_to_dict(spectrum)), path)
    else:
        _write_text(frame_to_csv(spectrum_to_frame(spectrum)), path)


def read_spectrum(path: str, params: Optional[LaguerreParams] = None) -> Spectrum:
    """
    Reads a spectrum from JSON ({p, domain, coeffs}) or CSV (j, coeff).
    A CSV carries no parameters, so `params` is required there; for JSON it must agree if given.
    """
    if _detect_format(path, None) == 'json':
        spectrum = spectrum_from_dict(_read_json(path))
        if params is not None and params != spectrum.params:
            raise ConfigurationError(
                f"{path} holds a {spectrum.params.domain.value} spectrum with p={spectrum.params.p}, "
                f"not {params.domain.value} with p={params.p}"
            )
        return spectrum
    if params is None:
        raise ConfigurationError(f"{path}: CSV spectra need --p and --domain")
    df = pd.read_csv(path)
    index_col = _require_column(df, INDEX_COLUMNS, path)
    value_col = _require_column(df, [c for c in COEFF_COLUMNS if c != index_col], path)
    values, warnings = SignalDataValidator.validate_coefficient_frame(df, index_col, value_col)
    for warning in warnings:
        logger.warning(f"{path}: {warning}")
    return Spectrum(params, values)


# --- Markov-parametre og realiseringer ---

def markov_to_dict(seq: MarkovSequence) -> Dict[str, Any]:
    data = {
        'domain': seq.domain.value if seq.domain else None,
        'p': seq.params.p if seq.params else None,
        'tau': seq.spec.tau if seq.spec else None,
        'h': seq.h,
    }
    if seq.offset:
        data['offset'] = seq.offset
        data['disturbance_prefix'] = seq.disturbance_prefix
    if seq.condition_estimate is not None:
        data['condition_estimate'] = seq.condition_estimate
    if seq.warnings:
        data['warnings'] = list(seq.warnings)
    return data


def markov_to_frame(seq: MarkovSequence) -> pd.DataFrame:
    return pd.DataFrame({'k': np.arange(len(seq)), 'h': seq.h})


def write_markov(seq: MarkovSequence, path: Optional[str] = None, fmt: Optional[str] = None):
    if _detect_format(path or '', fmt) == 'json':
        _write_text(dumps_json(markov_to_dict(seq)), path)
    else:
        _write_text(frame_to_csv(markov_to_frame(seq)), path)


def read_markov(path: str, params: Optional[LaguerreParams] = None) -> MarkovSequence:
    if _detect_format(path, None) == 'json':
        data = _read_json(path)
        if 'h' not in data:
            raise LaguerreError(f"{path}: Markov JSON needs an 'h' field")
        if params is None and data.get('p') is not None and data.get('domain'):
            params = LaguerreParams(data['p'], data['domain'])
        return MarkovSequence(data['h'], params=params)
    df = pd.read_csv(path)
    index_col = _require_column(df, INDEX_COLUMNS, path)
    value_col = _require_column(df, [c for c in COEFF_COLUMNS if c != index_col], path)
    values, _ = SignalDataValidator.validate_coefficient_frame(df, index_col, value_col)
    return MarkovSequence(values, params=params)


def realization_to_dict(ss: StateSpaceRealization) -> Dict[str, Any]:
    """Row-major matrices; G is a column and H a row."""
    return {'order': ss.order, 'F': ss.F, 'G': ss.G, 'H': ss.H, 'J': ss.J}


def write_realization(ss: StateSpaceRealization, path: Optional[str] = None):
    _write_text(dumps_json(realization_to_dict(ss)), path)


# --- Estimater og rapporter ---

def write_estimate(estimate: DelayEstimate, path: Optional[str] = None, fmt: Optional[str] = None):
    if _detect_format(path or '', fmt) == 'json':
        _write_text(dumps_json(estimate.to_dict()), path)
        return
    rows = [{'m': m, 'value': v} for m, v in estimate.per_m] or [{'m': None, 'value': estimate.value}]
    df = pd.DataFrame(rows)
    df['tau'] = estimate.tau
    _write_text(frame_to_csv(df), path)


def write_report(report, path: Optional[str] = None, fmt: Optional[str] = None) -> List[str]:
    """
    JSON: the whole report in one document. CSV: one file per table, named
    <stem>_<table>.csv next to `path`; without a path only the first table goes to stdout.
    """
    fmt = _detect_format(path or '', fmt)
    if fmt == 'json':
        _write_text(dumps_json(report.to_dict()), path)
        return [path] if path else []

    tables = report.tables()
    if path is None:
        _write_text(frame_to_csv(next(iter(tables.values()))), None)
        return []
    stem, _ = os.path.splitext(path)
    written = []
    for name, df in tables.items():
        table_path = f"{stem}_{name}.csv"
        _write_text(frame_to_csv(df), table_path)
        written.append(table_path)
    logger.info(f"Wrote {len(written)} CSV tables next to {path}")
    return written
