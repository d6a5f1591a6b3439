# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Recursive Hadamard response
+++++++++++++++++++++++++++

Frequency and distribution estimation over ``d`` symbols with ``k``-bit
messages. With :math:`D = 2^{\\lceil \\log_2 d \\rceil}`, ``L = 2^{k-1}`` and
``B = D / L``, the Sylvester matrix factors as :math:`H_D = H_L \\otimes H_B`,
so a client assigned to row group ``r < B`` learns all ``L`` entries
:math:`(H_D)_{m B + r, x}` from a single sign and the block ``loc = x // B``
of its symbol:

.. math::

    (H_D)_{m B + r, x} = (H_L)_{m, loc} \\cdot (H_B)_{r, x \\bmod B}.

The ``k``-bit ``(sign, loc)`` message is privatized with :math:`2^k`-RR.
In ``frequency`` mode ``r`` is a shared draw; in ``distribution`` mode it is
the position ``i mod B`` of the client.

"""
from collections import namedtuple

import numpy as np
from sklearn.utils import column_or_1d

from ..core.base import EmptyGroupError, ProtocolParams, _BaseProtocol, ceil_int
from ..core.bits import BitPayload, MessageBatch, pack_fields, unpack_fields
from ..core.hadamard import fwht, hadamard_signs, log2_int, next_power_of_two
from ..core.privacy import (
    RRParams, StreamDesyncError, client_streams, draw_indices, rr_perturb, uniform_bits,
)

FREQUENCY = 'frequency'
DISTRIBUTION = 'distribution'


def check_symbols(x, d):
    """Validate an array of symbols in ``[0, d)``"""
    x = column_or_1d(np.atleast_1d(x))
    if not np.issubdtype(x.dtype, np.integer):
        if np.any(x != np.round(x)):
            raise ValueError('symbols must be integers')
    x = x.astype(np.int64)
    if np.any(x < 0) or np.any(x >= d):
        raise ValueError('symbols must lie in [0, %d)' % d)
    return x


class RhrParams(ProtocolParams):
    """
    Parameters of one RHR round

    Attributes
    ----------

    D : int
        padded alphabet size, a power of two
    k : int
        message bits, ``min(b, ceil(eps * log2(e)), log2(D))`` (at least 1)
    B : int
        number of row groups, ``D / 2**(k - 1)``
    L : int
        locations per message, ``2**(k - 1)``

    """

    def __init__(self, d, eps, b, n=None, mode=FREQUENCY):
        super(RhrParams, self).__init__(d, eps, b)
        if mode not in (FREQUENCY, DISTRIBUTION):
            raise ValueError('unknown RHR mode "%s"' % mode)
        self.n = None if n is None else int(n)
        self.mode = mode
        self.D = next_power_of_two(self.d)
        self.k = max(1, min(self.b, ceil_int(self.eps * np.log2(np.e)), log2_int(self.D)))
        self.L = 1 << (self.k - 1)
        self.B = self.D // self.L

    @property
    def d_raw(self):
        return self.d

    @property
    def rr(self):
        return RRParams(self.eps, self.k)

    @property
    def debias(self):
        return self.rr.debias

    @property
    def shared_bits_per_client(self):
        return uniform_bits(self.B) if self.mode == FREQUENCY else 0

    @property
    def rr_widths(self):
        return (self.k, )


class RhrMessage(namedtuple('RhrMessage', ['k', 'payload'])):
    """
    A ``k``-bit ``(sign, loc)`` report

    The row group ``r`` is never on the wire: the server re-derives it from
    the shared stream or from the client position.
    """

    __slots__ = ()

    @property
    def sign(self):
        return 1 if self.payload >> (self.k - 1) else -1

    @property
    def loc(self):
        return self.payload & ((1 << (self.k - 1)) - 1)

    def to_wire(self):
        return bytes([self.k]) + BitPayload(self.payload, self.k).to_bytes()

    @classmethod
    def from_wire(cls, data):
        data = bytes(data)
        if not data:
            raise ValueError('empty RHR message')
        k = data[0]
        return cls(k, BitPayload.from_bytes(data[1:1 + (k + 7) // 8], k).value)


class RhrMessages(MessageBatch):
    """Reports of a round of RHR clients"""

    def __init__(self, payloads, params, shared_bits=None, draws=None):
        self.payloads = np.asarray(payloads, dtype=np.int64).reshape(-1)
        self.k = params.k
        self.mode = params.mode
        n = self.payloads.size
        self._shared_bits = (np.zeros(n, dtype=np.int64) if shared_bits is None
                             else np.asarray(shared_bits, dtype=np.int64))
        self.draws = np.zeros(n, dtype=np.int64) if draws is None else np.asarray(draws)

    def __len__(self):
        return self.payloads.size

    def __getitem__(self, index):
        return RhrMessage(self.k, int(self.payloads[index]))

    @property
    def bits_per_client(self):
        return np.full(len(self), self.k, dtype=np.int64)

    @property
    def shared_bits_per_client(self):
        return self._shared_bits

    @property
    def payload_values(self):
        return self.payloads, self.k


class FrequencyEstimate(object):
    """
    An unbiased frequency (or distribution) estimate

    Attributes
    ----------

    values : numpy.ndarray, shape (d,)
        the estimate; entries may fall outside ``[0, 1]``
    raw_padded : numpy.ndarray, shape (D,)
        the estimate over the padded alphabet, before truncation

    """

    def __init__(self, values, raw_padded=None):
        self.values = np.asarray(values, dtype=float)
        self.raw_padded = self.values if raw_padded is None else np.asarray(raw_padded)

    def __len__(self):
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def clip_normalized(self):
        """Clip to ``[0, 1]`` and renormalize (display only, introduces bias)"""
        clipped = np.clip(self.values, 0.0, 1.0)
        total = clipped.sum()
        if total <= 0:
            return np.full(self.values.size, 1.0 / self.values.size)
        return clipped / total


def _streams(shared, n):
    if shared is None:
        raise ValueError('frequency mode needs the shared streams')
    return client_streams(shared, n) if np.isscalar(shared) else list(shared)


def rhr_groups(params, n, shared=None):
    """
    Row group of every client

    Frequency mode draws one value in ``[0, B)`` from each shared stream
    (``shared`` is a list of streams or their seed); distribution mode
    assigns ``i mod B``.
    """
    if params.mode == DISTRIBUTION:
        return np.arange(n) % params.B
    return draw_indices(_streams(shared, n), params.B, 1)[:, 0]


def rhr_encode(x, r, params, rng):
    """
    Client-side RHR encoder

    ``loc = x // B``, ``sign = (H_D)_{r, x}``; the packed ``k``-bit value is
    privatized with :math:`2^k`-RR. ``x`` and ``r`` may be scalars or
    equal-length arrays; the perturbed payloads are returned.

    """
    scalar = np.ndim(x) == 0
    x = check_symbols(x, params.d)
    r = np.broadcast_to(np.asarray(r, dtype=np.int64), x.shape)
    if np.any(r < 0) or np.any(r >= params.B):
        raise ValueError('row group must lie in [0, %d)' % params.B)
    values = pack_fields(hadamard_signs(r, x), x // params.B, params.k)
    out = rr_perturb(values, params.rr, rng)
    return int(out[0]) if scalar else out


def rhr_encode_clients(x, params, rng, shared=None):
    """Encode a whole round; returns :class:`RhrMessages`"""
    x = check_symbols(x, params.d)
    n = x.size
    if params.mode == DISTRIBUTION:
        if n < params.B:
            raise EmptyGroupError('%d clients cannot populate %d row groups' % (n, params.B))
        return RhrMessages(rhr_encode(x, rhr_groups(params, n), params, rng), params)

    streams = _streams(shared, n)
    r = draw_indices(streams, params.B, 1)[:, 0]
    consumed = np.array([stream.bits_consumed for stream in streams], dtype=np.int64)
    draws = np.array([stream.counter for stream in streams], dtype=np.int64)
    return RhrMessages(rhr_encode(x, r, params, rng), params, shared_bits=consumed, draws=draws)


def rhr_aggregate(r, payloads, params):
    """
    Signed ``(B, L)`` histogram of the debiased reports

    ``S[r, loc]`` accumulates ``debias * sign`` over clients of group ``r``.
    """
    signs, locs = unpack_fields(payloads, params.k)
    cells = np.asarray(r, dtype=np.int64) * params.L + locs
    hist = np.bincount(cells, weights=params.debias * signs, minlength=params.B * params.L)
    return hist.reshape(params.B, params.L)


def hadamard_coefficients(hist):
    """
    Expand the per-group histograms into :math:`H_D`-domain coefficients

    Entry ``m B + r`` of the result is
    :math:`\\sum_{loc} (H_L)_{m, loc} S[r, loc]`: one length-``L`` transform
    per group.
    """
    return fwht(hist).T.ravel()


def rhr_decode_frequency(messages, params, n=None, shared=None):
    """
    Unbiased estimate of the empirical frequencies :math:`D_{X^n}`

    :math:`\\hat E[mB + r] = \\frac{1}{nL}\\sum_{i: r_i = r} debias \\cdot
    (H_L)_{m, \\tilde{loc}_i} \\widetilde{sign}_i`, followed by
    :math:`\\hat D = H_D \\hat E` truncated to ``d``.

    Raises
    ------

    StreamDesyncError
        if replaying the shared streams does not reproduce the clients' draws

    """
    n = len(messages) if n is None else int(n)
    if n != len(messages) or not n:
        raise ValueError('expected %d messages, got %d' % (n, len(messages)))
    if messages.k != params.k:
        raise ValueError('messages were produced with k=%d, not %d' % (messages.k, params.k))
    if shared is None:
        raise ValueError('frequency mode needs the shared streams')
    streams = (client_streams(shared, n) if np.isscalar(shared)
               else [stream.replay() for stream in shared])
    if len(streams) != n:
        raise StreamDesyncError('%d shared streams for %d messages' % (len(streams), n))
    r = draw_indices(streams, params.B, 1)[:, 0]
    if np.any(np.array([stream.counter for stream in streams]) != messages.draws):
        raise StreamDesyncError('shared draws replayed at the server differ from the clients')

    return rhr_frequency_estimate(r, messages.payloads, params)


def rhr_frequency_estimate(r, payloads, params):
    """Frequency estimate from known row groups ``r`` and perturbed ``payloads``"""
    n = np.size(payloads)
    coeffs = hadamard_coefficients(rhr_aggregate(r, payloads, params)) / (n * params.L)
    padded = fwht(coeffs)
    return FrequencyEstimate(padded[:params.d], padded)


def rhr_decode_distribution(messages, params):
    """
    Estimate of the generating distribution ``p`` from positional groups

    Group ``j`` holds clients ``i = j (mod B)``; every group is normalized by
    its own size and :math:`\\hat p = H_D \\hat E / D`.

    """
    n = len(messages)
    r = np.arange(n) % params.B
    sizes = np.bincount(r, minlength=params.B)
    if np.any(sizes == 0):
        raise EmptyGroupError('%d clients cannot populate %d row groups' % (n, params.B))
    hist = rhr_aggregate(r, messages.payloads, params) / sizes[:, None]
    padded = fwht(hadamard_coefficients(hist)) / params.D
    return FrequencyEstimate(padded[:params.d], padded)


def rhr_distribution(samples, params, rng):
    """Encode and decode i.i.d. ``samples`` in distribution mode"""
    if params.mode != DISTRIBUTION:
        raise ValueError('rhr_distribution requires the distribution mode')
    return rhr_decode_distribution(rhr_encode_clients(samples, params, rng), params)


class RHR(_BaseProtocol):
    """
    Frequency estimation with public-coin RHR

    >>> RHR(d=4, eps=np.log(3), b=2).get_protocol_params().B
    2

    """

    def __init__(self, d, eps=1.0, b=1, shared_seed=0, random_state=None):
        self.d = d
        self.eps = eps
        self.b = b
        self.shared_seed = shared_seed
        self.random_state = random_state

    def get_protocol_params(self, n=None):
        return RhrParams(self.d, self.eps, self.b, n=n, mode=FREQUENCY)

    def encode(self, X):
        x = check_symbols(X, self.d)
        self.params_ = self.get_protocol_params(n=x.size)
        return rhr_encode_clients(x, self.params_, np.random.default_rng(self.random_state),
                                  shared=self.shared_seed)

    def decode(self, messages):
        params = getattr(self, 'params_', None) or self.get_protocol_params(n=len(messages))
        return rhr_decode_frequency(messages, params, shared=self.shared_seed)


class RHRDistribution(_BaseProtocol):
    """Distribution estimation with RHR and positional groups (no shared randomness)"""

    def __init__(self, d, eps=1.0, b=1, random_state=None):
        self.d = d
        self.eps = eps
        self.b = b
        self.random_state = random_state

    def get_protocol_params(self, n=None):
        return RhrParams(self.d, self.eps, self.b, n=n, mode=DISTRIBUTION)

    def encode(self, X):
        x = check_symbols(X, self.d)
        self.params_ = self.get_protocol_params(n=x.size)
        return rhr_encode_clients(x, self.params_, np.random.default_rng(self.random_state))

    def decode(self, messages):
        params = getattr(self, 'params_', None) or self.get_protocol_params(n=len(messages))
        return rhr_decode_distribution(messages, params)
