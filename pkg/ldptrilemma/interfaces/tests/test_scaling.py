# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Scaling laws at desk scale

Every test runs ``1e5`` clients or more; select them with ``pytest -m slow``.
"""
import numpy as np
import pytest
from scipy import stats

from ..experiment import make_config, run_experiment

pytestmark = pytest.mark.slow


def _mean_error(metric='l2sq', **kwargs):
    return run_experiment(make_config(**kwargs)).summary()[metric]


def _loglog_slope(x, y):
    return stats.linregress(np.log(x), np.log(y)).slope


def test_sqkr_dimension_law():
    errors = [_mean_error(task='mean', scheme='sqkr', d=d, n=100000, eps=1.0, b=1, reps=8)
              for d in (16, 64)]
    assert 3.1 <= errors[1] / errors[0] <= 5.2


def test_sqkr_budget_law():
    errors = [_mean_error(task='mean', scheme='sqkr', d=64, n=100000, eps=8.0, b=b, reps=4)
              for b in (1, 4)]
    assert 4 / 1.5 <= errors[0] / errors[1] <= 4 * 1.5


def test_rhr_budget_law():
    errors = [_mean_error(task='frequency', scheme='rhr', d=1024, n=100000, eps=10.0, b=b,
                          reps=8, source='uniform')
              for b in (2, 5)]
    assert 5 <= errors[0] / errors[1] <= 13


def test_rhr_distribution_rate():
    grid = [50000, 200000, 500000]
    errors = [_mean_error('l1', task='distribution', scheme='rhr_dist', d=1000, n=n,
                          eps=2.0, b=2, reps=30, source='geometric(0.8)')
              for n in grid]
    assert np.all(np.diff(errors) < 0)
    assert -0.65 <= _loglog_slope(grid, errors) <= -0.38


def test_separation_gap():
    grid = [32, 64, 128, 256]
    slopes = []
    for scheme in ('separation', 'rhr_dist'):
        errors = [_mean_error(task='distribution', scheme=scheme, d=d, n=100000, eps=1.0,
                              b=1, reps=4)
                  for d in grid]
        slopes.append(_loglog_slope(grid, errors))
    assert slopes[0] - slopes[1] >= 0.5


def test_heavy_hitter_rate():
    errors = [_mean_error('linf', task='heavy_hitter', scheme='heavy_hitter', d=1024, n=n,
                          eps=1.0, b=1, reps=10)
              for n in (10000, 40000)]
    assert 1.5 <= errors[0] / errors[1] <= 2.6
