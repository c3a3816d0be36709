# core/experiments/sweep.py
"""Sweep af de lukkede udtryk over (p, tau, m) på eksakte Markov-parametre."""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Any, Dict, List

import numpy as np
import pandas as pd

from ..delay.estimation import kappa_from_markov, tau_disc_from_markov
from ..delay.operator import DelaySpec, markov
from ..errors import LaguerreError, NumericalValidationError, SingularDenominatorError
from ..laguerre.basis import LaguerreParams
from .config import SweepConfig

logger = logging.getLogger(__name__)

COLUMNS = ['p', 'tau', 'm', 'raw', 'estimate', 'error', 'h_m', 'status']
# |h_m| under denne brøkdel af naboerne giver en dårligt konditioneret kvotient
ILL_CONDITIONED_RTOL = 1e-6


@dataclass
class SweepResult:
    config: SweepConfig
    table: pd.DataFrame

    @property
    def failures(self) -> int:
        return int((self.table['status'].isin(['fail', 'error'])).sum())

    def status_counts(self) -> Dict[str, int]:
        return {str(k): int(v) for k, v in self.table['status'].value_counts().sort_index().items()}

    def validate(self) -> "SweepResult":
        if self.failures:
            failed = self.table[self.table['status'].isin(['fail', 'error'])]
            first = failed.iloc[0]
            raise NumericalValidationError(
                f"{self.failures} sweep cases missed tolerance {self.config.tolerance:g} "
                f"(first: p={first['p']}, tau={first['tau']}, m={first['m']})"
            )
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            'experiment': 'sweep',
            'domain': self.config.domain.value,
            'tolerance': self.config.tolerance,
            'cases': int(len(self.table)),
            'failures': self.failures,
            'status_counts': self.status_counts(),
            'rows': self.table.to_dict(orient='records'),
        }

    def tables(self) -> Dict[str, pd.DataFrame]:
        return {'sweep': self.table}


def _local_scale(h: np.ndarray, m: int) -> float:
    return float(max(abs(h[m - 1]), abs(h[m + 1])))


def _evaluate_case(params: LaguerreParams, tau: float, ms: List[int], tolerance: float) -> List[Dict[str, Any]]:
    """All m for one (p, tau) pair."""
    spec = DelaySpec(params, tau)
    h = markov(spec, max(ms) + 2).h
    rows = []
    for m in ms:
        row = {'p': params.p, 'tau': spec.tau, 'm': m, 'raw': np.nan, 'estimate': np.nan,
               'error': np.nan, 'h_m': float(h[m])}
        try:
            if params.is_continuous:
                raw = kappa_from_markov(h, m)
                kappa = spec.kappa
                error = abs(raw - kappa) / kappa if kappa != 0 else abs(raw)
                row.update(raw=raw, estimate=raw / (2.0 * params.p), error=error)
                ok = error <= tolerance
            else:
                raw = tau_disc_from_markov(h, m, params.p)
                error = abs(raw - spec.tau)
                row.update(raw=raw, estimate=int(round(raw)), error=error)
                ok = int(round(raw)) == spec.tau and error <= tolerance
        except SingularDenominatorError:
            row['status'] = 'singular'
            rows.append(row)
            continue

        if ok:
            row['status'] = 'ok'
        elif abs(h[m]) < ILL_CONDITIONED_RTOL * _local_scale(h, m):
            row['status'] = 'ill_conditioned'
        else:
            row['status'] = 'fail'
        rows.append(row)
    return rows


def run_sweep(cfg: SweepConfig) -> SweepResult:
    """
    Evaluates every (p, tau, m) of the grids on exact Markov data.

    The (p, tau) pairs run in a thread pool; the table is sorted by (p, tau, m)
    afterwards, so the output does not depend on completion order.
    """
    ms = list(cfg.m_range)
    pairs = [(p, tau) for p in cfg.p_grid for tau in cfg.tau_grid]
    logger.info(f"Sweep ({cfg.domain.value}): {len(pairs)} (p, tau) pairs x {len(ms)} m, {cfg.workers} workers")

    rows: List[Dict[str, Any]] = []
    with ThreadPoolExecutor(max_workers=cfg.workers) as executor:
        future_to_case = {
            executor.submit(_evaluate_case, LaguerreParams(p, cfg.domain), tau, ms, cfg.tolerance): (p, tau)
            for p, tau in pairs
        }
        for future in as_completed(future_to_case):
            p, tau = future_to_case[future]
            try:
                rows.extend(future.result())
            except LaguerreError as e:
                logger.error(f"Sweep case p={p}, tau={tau} failed: {e}")
                rows.extend({'p': p, 'tau': tau, 'm': m, 'raw': np.nan, 'estimate': np.nan,
                             'error': np.nan, 'h_m': np.nan, 'status': 'error'} for m in ms)

    table = pd.DataFrame(rows, columns=COLUMNS).sort_values(['p', 'tau', 'm'], kind='stable').reset_index(drop=True)
    result = SweepResult(cfg, table)
    level = logging.WARNING if result.failures else logging.INFO
    logger.log(level, f"Sweep finished: {result.status_counts()}")
    return result
