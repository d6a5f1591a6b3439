# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Randomized response and shared randomness
-----------------------------------------

:math:`\\varepsilon` is expressed in nats everywhere.

Shared (public-coin) randomness is a per-client substream of a
counter-based generator (:class:`numpy.random.Philox`) keyed by
``(seed, client_id)``; the server re-derives exactly the same draws by
replaying the substream, independently of the order clients are visited.

"""
from collections import namedtuple

import numpy as np


class PrivacyCertificateError(RuntimeError):
    """The randomized-response transition matrix is not eps-LDP"""


class RRParams(namedtuple('RRParams', ['eps', 'k'])):
    """
    Constants of the :math:`2^k`-ary randomized response

    >>> RRParams(np.log(3), 2).keep_prob
    0.5

    """

    __slots__ = ()

    def __new__(cls, eps, k):
        eps, k = float(eps), int(k)
        if eps < 0:
            raise ValueError('privacy level must be nonnegative, got %g' % eps)
        if not 1 <= k <= 62:
            raise ValueError('message width must lie in [1, 62], got %d' % k)
        return super(RRParams, cls).__new__(cls, eps, k)

    @property
    def alphabet(self):
        return 1 << self.k

    @property
    def keep_prob(self):
        # e^eps / (e^eps + 2^k - 1), written to stay finite for large eps
        return 1.0 / (1.0 + (self.alphabet - 1) * np.exp(-self.eps))

    @property
    def debias(self):
        return rr_debias(self)


def rr_debias(params):
    """
    Debias factor :math:`(e^\\varepsilon + 2^k - 1)/(e^\\varepsilon - 1)`

    Raises
    ------

    ValueError
        if ``eps == 0`` (the factor is undefined)

    """
    if params.eps <= 0:
        raise ValueError('the debias factor requires eps > 0')
    return (1.0 + (params.alphabet - 1) * np.exp(-params.eps)) / -np.expm1(-params.eps)


def rr_perturb(values, params, rng):
    """
    Apply :math:`2^k`-RR to ``k``-bit integers

    Each value is kept with probability ``params.keep_prob`` and otherwise
    replaced by a value drawn uniformly among the remaining ``2**k - 1``.
    Scalars return a Python ``int``; arrays are perturbed elementwise.

    """
    scalar = np.ndim(values) == 0
    values = np.atleast_1d(np.asarray(values, dtype=np.int64))
    if np.any(values < 0) or np.any(values >= params.alphabet):
        raise ValueError('values must lie in [0, 2**%d)' % params.k)

    keep = rng.random(values.shape) < params.keep_prob
    other = rng.integers(0, params.alphabet - 1, size=values.shape, dtype=np.int64)
    other += other >= values
    out = np.where(keep, values, other)
    return int(out[0]) if scalar else out


def binary_debias(eps):
    """Debias factor :math:`(e^{\\varepsilon'} + 1)/(e^{\\varepsilon'} - 1)` of a binary channel"""
    return rr_debias(RRParams(eps, 1))


def binary_ldp(bits, eps, rng):
    """Binary :math:`\\varepsilon'`-LDP channel: :func:`rr_perturb` with ``k = 1``"""
    return rr_perturb(bits, RRParams(eps, 1), rng)


def rr_transition_matrix(params):
    """Row-stochastic matrix ``Q[x, y] = P(output y | input x)``"""
    size = params.alphabet
    stay = params.keep_prob
    # 1 / (e^eps + 2^k - 1), without the cancellation in 1 - stay
    move = stay * np.exp(-params.eps)
    matrix = np.full((size, size), move)
    np.fill_diagonal(matrix, stay)
    return matrix


def ldp_certificate(eps, k):
    """
    Check exactly that the :math:`2^k`-RR transition matrix is eps-LDP

    Returns the maximum likelihood ratio over inputs ``x, x'`` and outputs
    ``y``; raises :class:`PrivacyCertificateError` if it exceeds
    :math:`e^\\varepsilon` (up to float round-off).

    """
    if k > 10:
        raise ValueError('certificates are computed for k <= 10')
    matrix = rr_transition_matrix(RRParams(eps, k))
    ratio = float((matrix.max(axis=0) / matrix.min(axis=0)).max())
    if ratio > np.exp(eps) * (1 + 1e-12):
        raise PrivacyCertificateError(
            'likelihood ratio %g exceeds e^eps = %g (k=%d)' % (ratio, np.exp(eps), k))
    return ratio


def uniform_bits(range_):
    """Bits charged for one uniform draw over ``range_`` values"""
    return (int(range_) - 1).bit_length()


def _philox_driver():
    """A generator whose Philox state is swapped in and out per stream"""
    return np.random.Generator(np.random.Philox(key=0))


class SharedRandomness(object):
    """
    A reproducible random stream bound to ``(seed, client_id)``

    Both the client and the server instantiate it from the same pair; every
    call to :meth:`draw_uniform` advances ``counter`` and charges
    :math:`\\lceil \\log_2 range \\rceil` bits per value to ``bits_consumed``.

    The stream only stores its Philox state (key ``(seed << 64) | client_id``),
    so that large rounds draw through one driver generator instead of
    building one generator per client.

    """

    def __init__(self, seed, client_id):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.client_id = int(client_id)
        if self.client_id < 0:
            raise ValueError('client ids are nonnegative')
        self.counter = 0
        self.bits_consumed = 0
        self._state = {
            'bit_generator': 'Philox',
            'state': {
                'counter': np.zeros(4, dtype=np.uint64),
                'key': np.array([self.client_id & 0xFFFFFFFFFFFFFFFF, self.seed],
                                dtype=np.uint64),
            },
            'buffer': np.zeros(4, dtype=np.uint64),
            'buffer_pos': 4,
            'has_uint32': 0,
            'uinteger': 0,
        }

    def __repr__(self):
        return 'SharedRandomness(seed=%d, client_id=%d, counter=%d)' % (
            self.seed, self.client_id, self.counter)

    def replay(self):
        """A fresh copy positioned at the start of the same stream"""
        return SharedRandomness(self.seed, self.client_id)

    def draw_uniform(self, range_, size=None, driver=None):
        """
        Uniform integer(s) in ``[0, range_)``

        ``driver`` is a :class:`numpy.random.Generator` over a Philox bit
        generator, reused across streams by :func:`draw_indices`.
        """
        range_ = int(range_)
        if range_ < 1:
            raise ValueError('range must be at least 1')
        count = 1 if size is None else int(np.prod(size))
        self.counter += count
        self.bits_consumed += count * uniform_bits(range_)
        if range_ == 1:
            return 0 if size is None else np.zeros(size, dtype=np.int64)
        if driver is None:
            driver = _philox_driver()
        driver.bit_generator.state = self._state
        value = driver.integers(0, range_, size=size, dtype=np.int64)
        self._state = driver.bit_generator.state
        return int(value) if size is None else value


def draw_uniform(shared, range_):
    """Draw one uniform integer in ``[0, range_)`` from a shared stream"""
    return shared.draw_uniform(range_)


def client_streams(seed, n, offset=0):
    """One :class:`SharedRandomness` per client ``offset, ..., offset + n - 1``"""
    return [SharedRandomness(seed, offset + i) for i in range(int(n))]


def draw_indices(streams, range_, count):
    """Draw ``count`` uniform values per stream; returns an ``(n, count)`` array"""
    out = np.zeros((len(streams), count), dtype=np.int64)
    driver = _philox_driver()
    for i, stream in enumerate(streams):
        out[i] = stream.draw_uniform(range_, size=count, driver=driver)
    return out


class StreamDesyncError(RuntimeError):
    """Server-side reconstruction of shared draws disagrees with the clients"""
