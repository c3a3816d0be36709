# tests/experiments/test_figures.py

import json

import pytest

from core.experiments.config import ExperimentConfig, SweepConfig
from core.experiments.disturbance import run_disturbance_trials
from core.experiments.figures import build_figures, write_figures
from core.experiments.reproduction import run_reproduction
from core.experiments.sweep import run_sweep


def test_reproduction_figures_plot_markov_times_ten():
    report = run_reproduction(ExperimentConfig.from_profile('reproduction'))
    figures = build_figures(report)
    assert set(figures) == {'signals', 'spectra'}
    assert len(figures['signals'].data) == 3
    markov_trace = figures['spectra'].data[-1]
    assert list(markov_trace.y) == pytest.approx(list(report.markov_table['h_recovered_x10']))


def test_disturbance_figures_have_one_trace_per_realization():
    report = run_disturbance_trials(ExperimentConfig.from_profile('disturbance', trials=2))
    figures = build_figures(report)
    assert set(figures) == {'signals', 'realizations', 'spectra'}
    assert len(figures['realizations'].data) == 10
    assert [trace.name for trace in figures['spectra'].data] == ['u(t - tau)', 'u(t - tau) + d(t)']
    assert [trace.name for trace in figures['signals'].data] == ['u(t)', 'u(t - tau)', 'u(t - tau) + d(t)']


def test_sweep_figure_groups_by_p_and_m(tmp_path):
    result = run_sweep(SweepConfig(domain='disc', p_grid=[0.3, 0.7], tau_grid="1..4", m_range="1..2"))
    figures = build_figures(result)
    assert len(figures['sweep'].data) == 2 * 2
    paths = write_figures(figures, str(tmp_path / "figs"))
    assert 'data' in json.loads(open(paths['sweep']).read())


def test_unknown_report_type():
    with pytest.raises(TypeError):
        build_figures(object())
