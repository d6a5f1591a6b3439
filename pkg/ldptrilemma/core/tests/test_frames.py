# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
""" Tight frames and Kashin's representation """
import numpy as np
import pytest

from ..frames import (
    DEFAULT_KASHIN_LEVEL, build_frame, calibrate_kashin_level, kashin_decompose,
)


def _unit_vectors(n, d, seed):
    x = np.random.default_rng(seed).standard_normal((n, d))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


@pytest.mark.parametrize('d', [1, 3, 16, 200])
@pytest.mark.parametrize('rows', ['random', 'first'])
def test_tight_frame(d, rows):
    frame = build_frame(d, seed=3, rows=rows)
    assert frame.N == 2 * (1 << (d - 1).bit_length())
    A = frame.matrix
    assert A.shape == (d, frame.N)
    np.testing.assert_allclose(A @ A.T, np.eye(d), atol=1e-12)
    np.testing.assert_allclose(np.abs(A), 1.0 / np.sqrt(frame.N))


def test_frame_operators():
    frame = build_frame(10, seed=1)
    x = _unit_vectors(4, 10, 0)
    np.testing.assert_allclose(frame.analyze(x), x @ frame.matrix, atol=1e-12)
    np.testing.assert_allclose(frame.synthesize(frame.analyze(x)), x, atol=1e-12)
    with pytest.raises(ValueError):
        frame.analyze(np.ones(9))


def test_frame_reproducible():
    first, second = build_frame(20, seed=7), build_frame(20, seed=7)
    assert np.array_equal(first.matrix, second.matrix)
    assert not np.array_equal(first.matrix, build_frame(20, seed=8).matrix)


@pytest.mark.parametrize('d', [16, 64, 200])
def test_kashin_property(d):
    frame = build_frame(d, seed=0)
    x = _unit_vectors(1000, d, d)
    result = kashin_decompose(frame, x, max_restarts=0)
    bound = DEFAULT_KASHIN_LEVEL / np.sqrt(frame.N)
    assert np.all(np.abs(result.a) <= bound * (1 + 1e-9))
    assert np.all(np.linalg.norm(x - frame.synthesize(result.a), axis=1) <= 1e-6)
    assert np.all(result.level == DEFAULT_KASHIN_LEVEL)


def test_kashin_single_vector():
    frame = build_frame(5, seed=2)
    x = 0.5 * _unit_vectors(1, 5, 1)[0]
    result = kashin_decompose(frame, x)
    assert result.a.shape == (frame.N, )
    assert result.level_bound == pytest.approx(result.level * 0.5 / np.sqrt(frame.N))
    np.testing.assert_allclose(frame.synthesize(result.a), x, atol=1e-9)

    zero = kashin_decompose(frame, np.zeros(5))
    assert not np.any(zero.a)


def test_kashin_errors():
    frame = build_frame(4)
    with pytest.raises(ValueError):
        kashin_decompose(frame, np.ones(4))
    with pytest.raises(ValueError):
        kashin_decompose(frame, np.zeros(4), level=1.0)
    with pytest.raises(ValueError):
        kashin_decompose(frame, np.zeros(4), tol=2.0)


def test_calibrate_kashin_level():
    frame = build_frame(16)
    level = calibrate_kashin_level(frame, n_vectors=50)
    assert 1 < level <= 1.25 * DEFAULT_KASHIN_LEVEL
    assert level == calibrate_kashin_level(frame, n_vectors=50)
