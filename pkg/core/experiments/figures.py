# core/experiments/figures.py
"""Plotly-figurer med eksperimentdata; skrives som JSON til eksterne værktøjer."""

import logging
import os
from typing import Dict

import plotly.graph_objects as go

from .disturbance import DisturbanceReport
from .reproduction import ReproductionReport
from .sweep import SweepResult

logger = logging.getLogger(__name__)


def signal_figure(report: ReproductionReport) -> go.Figure:
    df = report.signals
    fig = go.Figure()
    fig.add_trace(go.Scatter(x=df['t'], y=df['u'], name='u(t)', mode='lines'))
    fig.add_trace(go.Scatter(x=df['t'], y=df['y'], name=f'y(t) = u(t - {report.config.tau:g})', mode='lines'))
    fig.add_trace(go.Scatter(x=df['t'], y=df['y_approx'], name=f'y, {report.config.coeff_count} terms',
                             mode='lines', line=dict(dash='dash')))
    fig.update_layout(title="Input og forsinket output", xaxis_title="t")
    return fig


def spectrum_figure(report: ReproductionReport) -> go.Figure:
    """Spectra of u and y plus the recovered Markov parameters, scaled by 10 as in the published figure."""
    spectra, table = report.spectra, report.markov_table
    fig = go.Figure()
    fig.add_trace(go.Bar(x=spectra['j'], y=spectra['u'], name='u_j'))
    fig.add_trace(go.Bar(x=spectra['j'], y=spectra['y'], name='y_j'))
    fig.add_trace(go.Scatter(x=table['k'], y=table['h_recovered_x10'], name='h_k x 10', mode='markers+lines'))
    fig.update_layout(title="Laguerre-spektre og Markov-parametre (h_k x 10)", xaxis_title="j", barmode='group')
    return fig


def disturbance_figure(report: DisturbanceReport) -> go.Figure:
    df = report.realizations
    fig = go.Figure()
    for column in df.columns.drop('t'):
        fig.add_trace(go.Scatter(x=df['t'], y=df[column], name=column, mode='lines'))
    fig.update_layout(title="Realisationer af forstyrrelsen d(t)", xaxis_title="t")
    return fig


def disturbance_signal_figure(report: DisturbanceReport) -> go.Figure:
    """Delayed input with and without the disturbance of the first draw."""
    df = report.signals
    fig = go.Figure()
    fig.add_trace(go.Scatter(x=df['t'], y=df['u'], name='u(t)', mode='lines'))
    fig.add_trace(go.Scatter(x=df['t'], y=df['y_clean'], name='u(t - tau)', mode='lines'))
    fig.add_trace(go.Scatter(x=df['t'], y=df['y_disturbed'], name='u(t - tau) + d(t)', mode='lines'))
    fig.update_layout(title="Forsinket input med og uden forstyrrelse", xaxis_title="t")
    return fig


def disturbance_spectrum_figure(report: DisturbanceReport) -> go.Figure:
    df = report.spectra
    fig = go.Figure()
    fig.add_trace(go.Bar(x=df['j'], y=df['y_clean'], name='u(t - tau)'))
    fig.add_trace(go.Bar(x=df['j'], y=df['y_disturbed'], name='u(t - tau) + d(t)'))
    fig.update_layout(title="Output-spektre med og uden forstyrrelse", xaxis_title="j", barmode='group')
    return fig


def sweep_figure(result: SweepResult) -> go.Figure:
    df = result.table
    fig = go.Figure()
    for (p, m), group in df.groupby(['p', 'm']):
        fig.add_trace(go.Scatter(x=group['tau'], y=group['error'], name=f'p={p:g}, m={m}', mode='markers'))
    fig.update_layout(title=f"Estimationsfejl ({result.config.domain.value})", xaxis_title="tau",
                      yaxis_title="fejl", yaxis_type='log')
    return fig


def build_figures(report) -> Dict[str, go.Figure]:
    """Figures for any experiment report, keyed by file stem."""
    if isinstance(report, ReproductionReport):
        return {'signals': signal_figure(report), 'spectra': spectrum_figure(report)}
    if isinstance(report, DisturbanceReport):
        return {'signals': disturbance_signal_figure(report), 'realizations': disturbance_figure(report),
                'spectra': disturbance_spectrum_figure(report)}
    if isinstance(report, SweepResult):
        return {'sweep': sweep_figure(report)}
    raise TypeError(f"No figures for {type(report).__name__}")


def write_figures(figures: Dict[str, go.Figure], directory: str) -> Dict[str, str]:
    os.makedirs(directory, exist_ok=True)
    paths = {}
    for name, fig in figures.items():
        path = os.path.join(directory, f"{name}.json")
        fig.write_json(path)
        paths[name] = path
    logger.info(f"Wrote {len(paths)} figures to {directory}")
    return paths
