# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
""" Exact expectations: every estimator is unbiased """
import numpy as np
import pytest

from ...core.privacy import ldp_certificate
from ..baselines import SsParams
from ..heavy_hitter import HeavyHitterParams
from ..oracle import (
    heavy_hitter_exact_expectation, rhr_exact_expectation,
    sqkr_exact_expectation, ss_exact_expectation,
)
from ..rhr import DISTRIBUTION, RhrParams
from ..sqkr import PRIVATE_COIN, SqkrParams


@pytest.mark.parametrize('x', [[0.6, -0.8], [0.0, 0.3], [-0.5, -0.5]])
def test_sqkr_oracle(x):
    params = SqkrParams(2, np.log(3), 1)
    assert (params.N, params.k) == (4, 1)
    np.testing.assert_allclose(sqkr_exact_expectation(x, params), x, atol=1e-9)


def test_sqkr_oracle_two_samples():
    params = SqkrParams(3, 2.0, 2)
    assert params.k == 2
    x = np.array([0.2, -0.4, 0.5])
    np.testing.assert_allclose(sqkr_exact_expectation(x, params), x, atol=1e-9)
    with pytest.raises(ValueError):
        sqkr_exact_expectation(x, SqkrParams(3, 2.0, 2, mode=PRIVATE_COIN))


@pytest.mark.parametrize('symbol', range(4))
def test_rhr_oracle(symbol):
    params = RhrParams(4, np.log(3), 2)
    assert (params.D, params.k, params.B) == (4, 2, 2)
    np.testing.assert_allclose(rhr_exact_expectation([symbol], params), np.eye(4)[symbol],
                               atol=1e-9)


def test_rhr_oracle_pair():
    params = RhrParams(6, 2.0, 3)
    assert (params.D, params.k, params.B) == (8, 3, 2)
    np.testing.assert_allclose(rhr_exact_expectation([5, 1], params),
                               np.bincount([5, 1], minlength=6) / 2.0, atol=1e-9)


def test_rhr_distribution_oracle():
    params = RhrParams(4, np.log(3), 2, mode=DISTRIBUTION)
    np.testing.assert_allclose(rhr_exact_expectation([3, 3], params), np.eye(4)[3],
                               atol=1e-9)


@pytest.mark.parametrize('eps,b', [(1.0, 1), (2.5, 2)])
def test_heavy_hitter_oracle(eps, b):
    params = HeavyHitterParams(4, eps, b)
    for symbol in range(4):
        np.testing.assert_allclose(heavy_hitter_exact_expectation([symbol], params),
                                   np.eye(4)[symbol], atol=1e-9)


@pytest.mark.parametrize('d,eps', [(2, 0.5), (5, 1.0), (8, np.log(3))])
def test_ss_oracle(d, eps):
    params = SsParams(d, eps)
    np.testing.assert_allclose(ss_exact_expectation(d - 1, params), np.eye(d)[d - 1],
                               atol=1e-9)


def test_oracle_size_guard():
    with pytest.raises(ValueError):
        sqkr_exact_expectation(np.zeros(64), SqkrParams(64, 8.0, 8))


@pytest.mark.parametrize('eps', [0.5, np.log(3), 1.0, 2.0, 10.0])
@pytest.mark.parametrize('k', range(1, 11))
def test_certificate_grid(eps, k):
    assert ldp_certificate(eps, k) <= np.exp(eps) * (1 + 1e-12)
