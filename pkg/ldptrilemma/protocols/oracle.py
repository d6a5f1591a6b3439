# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Exact expectations by enumeration
---------------------------------

For small instances, every joint realization of the shared draws, the
quantizer and the randomized response is enumerated and the decoder output
is averaged with its exact probability. Unbiased protocols return the
ground truth up to float round-off.

"""
from itertools import combinations, product

import numpy as np

from ..core.bits import bits_to_values, pack_fields
from ..core.frames import kashin_decompose
from ..core.hadamard import hadamard_signs
from ..core.privacy import rr_transition_matrix
from .baselines import ss_decode
from .heavy_hitter import heavy_hitter_from_columns
from .rhr import (
    DISTRIBUTION, RhrMessages, check_symbols, rhr_decode_distribution, rhr_frequency_estimate,
)
from .sqkr import PUBLIC_COIN, sqkr_aggregate

#: refuse enumerations above this many joint realizations
MAX_REALIZATIONS = 1 << 20


def _check_size(count):
    if count > MAX_REALIZATIONS:
        raise ValueError('%d joint realizations are too many to enumerate' % count)


def sqkr_exact_expectation(x, params):
    """
    :math:`E[\\hat x]` of public-coin SQKR for a single client

    Enumerates the ``N**k`` index tuples, the quantized signs of the distinct
    sampled coordinates and the ``2**k`` randomized-response outputs.
    """
    if params.mode != PUBLIC_COIN:
        raise ValueError('the SQKR oracle covers the public-coin mode')
    N, k = params.N, params.k
    _check_size(N ** k * 4 ** k)
    a = kashin_decompose(params.frame, np.asarray(x, dtype=float),
                         level=params.kashin_level, max_restarts=0).a
    p_plus = np.clip((a + params.level) / (2 * params.level), 0.0, 1.0)
    channel = rr_transition_matrix(params.rr)
    outputs = np.arange(1 << k)

    coeffs = np.zeros(N)
    for indices in product(range(N), repeat=k):
        indices = np.array(indices)
        distinct = np.unique(indices)
        for pattern in product((0, 1), repeat=distinct.size):
            sign_of = dict(zip(distinct, pattern))
            prob = np.prod([p_plus[j] if sign_of[j] else 1 - p_plus[j] for j in distinct])
            if prob == 0:
                continue
            true_value = int(bits_to_values([sign_of[j] for j in indices]))
            for out in outputs:
                weight = prob * channel[true_value, out] / N ** k
                coeffs += weight * sqkr_aggregate(indices[None, :], [out], params)
    return params.frame.synthesize(coeffs)


def rhr_exact_expectation(xs, params):
    """
    :math:`E[\\hat D]` of RHR for a handful of clients

    Frequency mode enumerates the ``B**n`` row-group draws; distribution mode
    uses the positional groups. Both enumerate the ``2**(k n)`` RR outputs.
    """
    xs = check_symbols(xs, params.d)
    n = xs.size
    _check_size((params.B ** n if params.mode != DISTRIBUTION else 1) * (1 << (params.k * n)))
    channel = rr_transition_matrix(params.rr)
    if params.mode == DISTRIBUTION:
        draws = [tuple(np.arange(n) % params.B)]
    else:
        draws = list(product(range(params.B), repeat=n))

    total = np.zeros(params.d)
    for r in draws:
        r = np.array(r)
        true_values = pack_fields(hadamard_signs(r, xs), xs // params.B, params.k)
        for outs in product(range(1 << params.k), repeat=n):
            prob = np.prod(channel[true_values, list(outs)]) / len(draws)
            if params.mode == DISTRIBUTION:
                est = rhr_decode_distribution(RhrMessages(outs, params), params)
            else:
                est = rhr_frequency_estimate(r, np.array(outs), params)
            total += prob * est.values
    return total


def heavy_hitter_exact_expectation(xs, params):
    """:math:`E[\\hat D]` of the heavy-hitter scheme over columns and flips"""
    xs = check_symbols(xs, params.d)
    n, k = xs.size, params.k
    _check_size(params.D ** (n * k) * (1 << (n * k)))
    keep = 1.0 / (1.0 + np.exp(-params.eps_prime))

    total = np.zeros(params.d)
    for cols in product(range(params.D), repeat=n * k):
        cols = np.array(cols).reshape(n, k)
        bits = (hadamard_signs(xs[:, None], cols) > 0).astype(np.int64)
        for flips in product((0, 1), repeat=n * k):
            flips = np.array(flips).reshape(n, k)
            prob = np.prod(np.where(flips, 1 - keep, keep)) / params.D ** (n * k)
            est = heavy_hitter_from_columns(cols, bits_to_values(bits ^ flips), params)
            total += prob * est.values
    return total


def ss_output_law(x, params):
    """Exact law of the SS report of symbol ``x``: ``{subset: probability}``"""
    _check_size(int(np.prod(range(params.d - params.w + 1, params.d + 1))))
    law = {}
    for subset in combinations(range(params.d), params.w):
        y = np.zeros(params.d, dtype=bool)
        y[list(subset)] = True
        law[subset] = params.likelihood(y, x)
    return law


def ss_exact_expectation(x, params):
    """:math:`E[\\hat p]` of SS for a single client holding ``x``"""
    total = np.zeros(params.d)
    for subset, prob in ss_output_law(x, params).items():
        y = np.zeros((1, params.d), dtype=bool)
        y[0, list(subset)] = True
        total += prob * ss_decode(y, params).values
    return total
