# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
""" Recursive Hadamard response """
from timeit import repeat

import numpy as np
import pytest
from scipy.linalg import hadamard

from ...core.base import EmptyGroupError
from ...core.bits import unpack_fields
from ...core.hadamard import fwht, hadamard_signs
from ...core.privacy import StreamDesyncError
from ..rhr import (
    DISTRIBUTION, RHR, FrequencyEstimate, RHRDistribution, RhrMessage, RhrParams,
    check_symbols, hadamard_coefficients, rhr_aggregate, rhr_decode_frequency, rhr_distribution,
    rhr_encode, rhr_encode_clients, rhr_frequency_estimate,
)


def test_params():
    params = RhrParams(1000, 10.0, 5)
    assert (params.D, params.k, params.L, params.B) == (1024, 5, 16, 64)
    assert params.shared_bits_per_client == 6
    # k is capped by ceil(eps log2 e) and by log2 D
    assert RhrParams(1000, 1.0, 5).k == 2
    assert RhrParams(4, 10.0, 8).k == 2
    assert RhrParams(64, 1.0, 2, mode=DISTRIBUTION).shared_bits_per_client == 0


def test_kronecker_factorization():
    D, L = 16, 4
    B = D // L
    rows, cols = np.meshgrid(np.arange(D), np.arange(D), indexing='ij')
    m, r = rows // B, rows % B
    factored = hadamard_signs(m, cols // B) * hadamard_signs(r, cols % B)
    assert np.array_equal(factored, hadamard(D))


def test_encode_fields():
    params = RhrParams(16, 20.0, 3)
    rng = np.random.default_rng(0)
    # eps = 20 keeps every message
    payload = rhr_encode(13, 1, params, rng)
    sign, loc = unpack_fields(payload, params.k)
    assert loc == 13 // params.B
    assert sign == hadamard(16)[1, 13]
    with pytest.raises(ValueError):
        rhr_encode(16, 0, params, rng)
    with pytest.raises(ValueError):
        rhr_encode(3, params.B, params, rng)


def test_dense_estimator():
    params = RhrParams(12, 3.0, 3)
    assert (params.D, params.L, params.B) == (16, 4, 4)
    rng = np.random.default_rng(1)
    n = 50
    r = rng.integers(0, params.B, size=n)
    payloads = rng.integers(0, 1 << params.k, size=n)

    signs, locs = unpack_fields(payloads, params.k)
    H_L = hadamard(params.L)
    E = np.zeros(params.D)
    for ri, si, li in zip(r, signs, locs):
        for m in range(params.L):
            E[m * params.B + ri] += params.debias * si * H_L[m, li]
    dense = hadamard(params.D) @ (E / (n * params.L))

    est = rhr_frequency_estimate(r, payloads, params)
    np.testing.assert_allclose(est.raw_padded, dense, atol=1e-12)
    np.testing.assert_allclose(est.values, dense[:12], atol=1e-12)


def test_frequency_estimate():
    x = np.random.default_rng(2).integers(0, 8, size=20000)
    est = RHR(8, eps=2.0, b=2, shared_seed=1, random_state=3).fit(x)
    truth = np.bincount(x, minlength=8) / x.size
    assert np.abs(est.estimate_.values - truth).max() < 0.06
    messages = est.messages_
    assert np.all(messages.bits_per_client == 2)
    assert np.all(messages.shared_bits_per_client == est.params_.shared_bits_per_client)


def test_distribution_estimate():
    p = np.array([0.4, 0.2, 0.1, 0.1, 0.1, 0.05, 0.05])
    x = np.random.default_rng(4).choice(7, size=20000, p=p)
    params = RhrParams(7, 2.0, 2, mode=DISTRIBUTION)
    est = rhr_distribution(x, params, np.random.default_rng(5))
    assert np.abs(est.values - p).max() < 0.06
    assert est.raw_padded.shape == (8, )


def test_distribution_empty_group():
    params = RhrParams(16, 1.0, 1, mode=DISTRIBUTION)
    assert params.B == 16
    with pytest.raises(EmptyGroupError):
        rhr_encode_clients(np.arange(8), params, np.random.default_rng(0))
    with pytest.raises(EmptyGroupError):
        RHRDistribution(16, eps=1.0, b=1).fit(np.arange(8))


def test_desync():
    params = RhrParams(8, 1.0, 1)
    messages = rhr_encode_clients(np.arange(8), params, np.random.default_rng(0), shared=2)
    estimate = rhr_decode_frequency(messages, params, shared=2)
    assert isinstance(estimate, FrequencyEstimate)
    messages.draws = messages.draws * 0
    with pytest.raises(StreamDesyncError):
        rhr_decode_frequency(messages, params, shared=2)
    with pytest.raises(ValueError):
        rhr_decode_frequency(messages, params, n=9, shared=2)


def test_message_wire():
    message = RhrMessage(3, 5)
    assert (message.sign, message.loc) == (1, 1)
    assert message.to_wire() == b'\x03\xa0'
    assert RhrMessage.from_wire(message.to_wire()) == message


def test_clip_normalized():
    est = FrequencyEstimate([0.7, -0.1, 0.5, 0.0])
    clipped = est.clip_normalized()
    assert clipped.sum() == pytest.approx(1.0)
    assert clipped[1] == 0.0
    assert np.allclose(FrequencyEstimate([-1.0, -2.0]).clip_normalized(), 0.5)
    assert np.asarray(est).shape == (4, )


def test_check_symbols():
    assert check_symbols([0, 3.0], 4).tolist() == [0, 3]
    with pytest.raises(ValueError):
        check_symbols([1.5], 4)
    with pytest.raises(ValueError):
        check_symbols([-1], 4)


def _best_of(func, number=5):
    return min(repeat(func, number=1, repeat=number))


@pytest.mark.slow
def test_decode_cost():
    params = RhrParams(1 << 16, 2.0, 3)
    rng = np.random.default_rng(0)
    timings = {}
    for n in (100000, 400000):
        r = rng.integers(0, params.B, size=n)
        payloads = rng.integers(0, 1 << params.k, size=n)
        hist = rhr_aggregate(r, payloads, params)
        timings[n] = (
            _best_of(lambda: fwht(hadamard_coefficients(hist))),
            _best_of(lambda: rhr_frequency_estimate(r, payloads, params)),
        )
    transform = timings[400000][0] / timings[100000][0]
    decode = timings[400000][1] / timings[100000][1]
    # the transform stage does not see n; the aggregation pass is linear in it
    assert transform < 2.0
    assert decode < 4.4
