# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
""" SQKR mean estimation """
import numpy as np
import pytest
from sklearn.base import clone

from ...core.base import EmptyGroupError
from ...core.privacy import StreamDesyncError, client_streams
from ..sqkr import (
    GROUPING, PRIVATE_COIN, PUBLIC_COIN, SQKR, SqkrMessage, SqkrParams, StatisticalSQKR,
    sqkr_decode, sqkr_encode, sqkr_group_encode, sqkr_mse_bound, sqkr_quantize,
    sqkr_statistical,
)


def _unit_rows(n, d, seed=0):
    x = np.random.default_rng(seed).standard_normal((n, d))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def test_params():
    params = SqkrParams(2, np.log(3), 1)
    assert (params.N, params.k, params.index_bits) == (4, 1, 2)
    assert params.budget_bits == 1
    assert params.shared_bits_per_client == 2
    assert params.level == pytest.approx(2.0)

    private = SqkrParams(2, np.log(3), 1, mode=PRIVATE_COIN)
    assert private.budget_bits == 3
    assert private.shared_bits_per_client == 0
    # indices travel with the payload
    private = SqkrParams(64, 8.0, 4, mode=PRIVATE_COIN)
    assert private.k == 4
    assert private.budget_bits == 4 * (1 + private.index_bits)
    assert private.budget_bits > 4 * 6

    # k = min(ceil(eps), b), b* = min(ceil(eps log2 e), b)
    params = SqkrParams(16, 2.0, 8, mode=GROUPING)
    assert (params.k, params.b_star, params.N, params.n_groups) == (2, 3, 32, 11)
    assert params.width == 3
    assert params.effective_n(25) == 22
    assert SqkrParams(16, 1.0, 8).k == 1

    with pytest.raises(ValueError):
        SqkrParams(4, 1.0, 1, mode='bogus')
    with pytest.raises(ValueError):
        SqkrParams(4, 0.0, 1)


def test_quantize_unbiased():
    rng = np.random.default_rng(0)
    a = np.array([0.5, -0.25, 0.0, 1.0])
    q = sqkr_quantize(np.tile(a, (40000, 1)), 1.0, rng)
    assert set(np.unique(q)) <= {-1.0, 1.0}
    np.testing.assert_allclose(q.mean(axis=0), a, atol=0.02)
    with pytest.raises(ValueError):
        sqkr_quantize([1.5], 1.0, rng)


@pytest.mark.parametrize('coin', [PUBLIC_COIN, PRIVATE_COIN])
def test_encode_bits(coin):
    X = _unit_rows(50, 16)
    params = SqkrParams(16, 1.0, 1, mode=coin)
    messages = sqkr_encode(X, params, 5, np.random.default_rng(1))
    assert len(messages) == 50
    assert np.all(messages.bits_per_client <= params.budget_bits)
    assert np.all(messages.shared_bits_per_client == params.shared_bits_per_client)
    assert np.all(messages.payloads < 2 ** params.k)


def test_public_private_agree():
    X = _unit_rows(200, 8)
    public = SQKR(8, eps=2.0, b=2, shared_seed=3, random_state=4).fit(X)
    private = SQKR(8, eps=2.0, b=2, coin=PRIVATE_COIN, shared_seed=3, random_state=4).fit(X)
    np.testing.assert_allclose(public.estimate_, private.estimate_)
    assert np.array_equal(public.messages_.payloads, private.messages_.payloads)
    assert private.messages_.bits_per_client[0] == 2 * (1 + 4)
    assert public.messages_.bits_per_client[0] == 2


def test_mse_matches_bound():
    d, n = 16, 2000
    params = SqkrParams(d, 1.0, 1)
    errors = []
    for rep in range(8):
        X = _unit_rows(n, d, seed=rep)
        rng = np.random.default_rng(100 + rep)
        est = sqkr_decode(sqkr_encode(X, params, rep, rng), params, shared=rep)
        errors.append(np.sum((est - X.mean(axis=0)) ** 2))
    ratio = np.mean(errors) / sqkr_mse_bound(params, n)
    assert 0.5 < ratio < 1.5


def test_desync_detected():
    X = _unit_rows(20, 8)
    params = SqkrParams(8, 1.0, 1)
    messages = sqkr_encode(X, params, 9, np.random.default_rng(0))
    with pytest.raises(StreamDesyncError):
        sqkr_decode(messages, params, shared=client_streams(9, 19))
    messages.draws = messages.draws + 1
    with pytest.raises(StreamDesyncError):
        sqkr_decode(messages, params, shared=9)

    # streams already used by an earlier round no longer match a fresh replay
    streams = client_streams(9, 20)
    for stream in streams:
        stream.draw_uniform(params.N)
    messages = sqkr_encode(X, params, streams, np.random.default_rng(0))
    assert np.all(messages.draws == 1 + params.k)
    with pytest.raises(StreamDesyncError):
        sqkr_decode(messages, params, shared=streams)

    private = SqkrParams(8, 1.0, 1, mode=PRIVATE_COIN)
    messages = sqkr_encode(X, private, 9, np.random.default_rng(0))
    messages.indices[0, 0] = private.N
    with pytest.raises(StreamDesyncError):
        sqkr_decode(messages, private)


def test_decode_needs_streams():
    params = SqkrParams(8, 1.0, 1)
    messages = sqkr_encode(_unit_rows(4, 8), params, 0, np.random.default_rng(0))
    with pytest.raises(ValueError):
        sqkr_decode(messages, params)


def test_message_wire():
    params = SqkrParams(8, 2.0, 2, mode=PRIVATE_COIN)
    messages = sqkr_encode(_unit_rows(3, 8), params, 0, np.random.default_rng(0))
    wire = messages.to_wire()
    assert all(len(frame) == 2 + 1 + 1 for frame in wire)
    assert SqkrMessage.from_wire(wire[1], params.index_bits) == messages[1]

    public = SqkrMessage(PUBLIC_COIN, 3, 5, None)
    assert public.to_wire() == b'\x00\x03\xa0'
    assert SqkrMessage.from_wire(public.to_wire()) == public
    with pytest.raises(ValueError):
        SqkrMessage.from_wire(b'\x07\x01\x00')


def test_grouping_recovers_mean():
    d, n = 16, 32000
    x = _unit_rows(1, d)[0] * 0.8
    params = SqkrParams(d, 1.0, 2, mode=GROUPING)
    est = sqkr_statistical(np.tile(x, (n, 1)), params, np.random.default_rng(0))
    assert np.sum((est - x) ** 2) < 3 * sqkr_mse_bound(params, n)


def test_grouping_groups():
    params = SqkrParams(16, 1.0, 1, mode=GROUPING)
    assert params.n_groups == 32
    messages = sqkr_group_encode(_unit_rows(70, 16), params, np.random.default_rng(0))
    assert len(messages) == 64
    assert messages.n_input == 70
    assert np.array_equal(np.bincount(messages.groups), np.full(32, 2))
    assert np.all(messages.bits_per_client == 1)
    assert np.all(messages.shared_bits_per_client == 0)
    with pytest.raises(EmptyGroupError):
        sqkr_group_encode(_unit_rows(31, 16), params, np.random.default_rng(0))


def test_estimators_api():
    est = SQKR(16, eps=2.0)
    assert clone(est).get_params()['eps'] == 2.0
    stat = StatisticalSQKR(4, eps=1.0, b=1, random_state=0).fit(_unit_rows(64, 4))
    assert stat.estimate_.shape == (4, )
    with pytest.raises(ValueError):
        SQKR(4, coin='shared').fit(_unit_rows(2, 4))


def test_origin_unbiased():
    params = SqkrParams(4, 1.0, 1)
    rng = np.random.default_rng(8)
    zero = np.zeros((1, 4))
    estimates = np.array([sqkr_decode(sqkr_encode(zero, params, seed, rng), params, shared=seed)
                          for seed in range(10000)])
    sigma = estimates.std(axis=0) / np.sqrt(len(estimates))
    assert np.all(np.abs(estimates.mean(axis=0)) < 5 * sigma)
