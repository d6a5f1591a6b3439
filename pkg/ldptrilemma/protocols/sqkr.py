# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Subsampled and quantized Kashin's response
++++++++++++++++++++++++++++++++++++++++++

Mean estimation of vectors in the unit ball under :math:`\\varepsilon`-LDP
and a ``b``-bit uplink. Every client expands its vector ``x`` in a
:class:`~ldptrilemma.core.frames.TightFrame` with uniformly small (Kashin)
coefficients, quantizes each coefficient without bias to
:math:`\\pm K_0/\\sqrt{N}`, keeps ``k = min(ceil(eps), b)`` coordinates
sampled with replacement and privatizes the resulting ``k`` bits with
:math:`2^k`-RR.

Three modes are available:

``public``
    sampled coordinates come from the shared stream and never travel.
``private``
    the client samples from its own stream and appends the coordinates.
``grouping``
    sampling is replaced by a fixed block of ``b*`` coordinates per client
    group (estimation of :math:`\\theta(P)` without shared randomness).

"""
from collections import namedtuple

import numpy as np
from nipype import logging
from sklearn.utils import check_array

from ..core.base import EmptyGroupError, ProtocolParams, _BaseProtocol, ceil_int
from ..core.bits import BitPayload, MessageBatch, bits_to_values, values_to_bits
from ..core.frames import DEFAULT_KASHIN_LEVEL, NORM_SLACK, build_frame, kashin_decompose
from ..core.privacy import (
    RRParams, SharedRandomness, StreamDesyncError,
    client_streams, draw_indices, rr_perturb, uniform_bits,
)

LOGGER = logging.getLogger('nipype.interface')

PUBLIC_COIN = 'public'
PRIVATE_COIN = 'private'
GROUPING = 'grouping'
#: one-byte mode tags of the wire format
MODE_TAGS = {PUBLIC_COIN: 0, PRIVATE_COIN: 1, GROUPING: 2}
#: relative reconstruction tolerance of the encoder
KASHIN_TOL = 1e-6


class SqkrParams(ProtocolParams):
    """
    Parameters of one SQKR round

    Attributes
    ----------

    k : int
        sampled coordinates per client, ``min(ceil(eps), b)``
    b_star : int
        block size of the grouping mode, ``min(ceil(eps * log2(e)), b)``
    frame : TightFrame
        the frame shared by clients and server
    kashin_level : float
        ``K0``; coefficients are quantized to :math:`\\pm K_0/\\sqrt{N}`

    In private-coin mode a client sends its ``k`` sampled indices together with
    the payload, so :attr:`budget_bits` is ``k * (1 + ceil(log2 N))``. With
    ``k = b`` this exceeds ``b * ceil(log2 d)`` bits, as a single index into the
    frame already needs ``ceil(log2 N) >= ceil(log2 d)`` bits. Public-coin and
    grouping modes send exactly ``b``.

    """

    def __init__(self, d, eps, b, n=None, mode=PUBLIC_COIN, frame=None,
                 kashin_level=DEFAULT_KASHIN_LEVEL, frame_seed=0):
        super(SqkrParams, self).__init__(d, eps, b)
        if mode not in MODE_TAGS:
            raise ValueError('unknown SQKR mode "%s"' % mode)
        if not kashin_level > 1:
            raise ValueError('the Kashin level must be larger than 1')
        if frame is None:
            frame = build_frame(self.d, seed=frame_seed)
        elif frame.d != self.d:
            raise ValueError('frame dimension %d does not match d=%d' % (frame.d, self.d))

        self.n = None if n is None else int(n)
        self.mode = mode
        self.frame = frame
        self.kashin_level = float(kashin_level)
        self.k = max(1, min(ceil_int(self.eps), self.b))
        self.b_star = max(1, min(ceil_int(self.eps * np.log2(np.e)), self.b))

    @property
    def N(self):
        return self.frame.N

    @property
    def width(self):
        """Payload bits of one client"""
        return self.b_star if self.mode == GROUPING else self.k

    @property
    def n_groups(self):
        """Client groups ``m`` of the grouping mode (last block zero-padded)"""
        return -(-self.N // self.b_star)

    @property
    def level(self):
        """Quantization level :math:`c/\\sqrt{d} = K_0/\\sqrt{N}`"""
        return self.kashin_level / np.sqrt(self.N)

    @property
    def index_bits(self):
        return uniform_bits(self.N)

    @property
    def rr(self):
        return RRParams(self.eps, self.width)

    @property
    def debias(self):
        return self.rr.debias

    @property
    def budget_bits(self):
        if self.mode == PRIVATE_COIN:
            return self.k * (1 + self.index_bits)
        return self.b

    @property
    def shared_bits_per_client(self):
        return self.k * self.index_bits if self.mode == PUBLIC_COIN else 0

    @property
    def rr_widths(self):
        return (self.width, )

    def effective_n(self, n):
        """Clients kept by the grouping mode (remainder clients are dropped)"""
        if self.mode != GROUPING:
            return int(n)
        return (int(n) // self.n_groups) * self.n_groups


class SqkrMessage(namedtuple('SqkrMessage', ['mode', 'k', 'payload', 'indices'])):
    """
    The report of one client

    Wire format: mode tag byte, ``k`` byte, the ``k``-bit payload padded to
    whole bytes and, in private-coin mode, the ``k`` sampled coordinates
    packed little-endian at ``index_bits`` each.

    """

    __slots__ = ()

    def to_wire(self, index_bits=None):
        head = bytes([MODE_TAGS[self.mode], self.k]) + BitPayload(self.payload, self.k).to_bytes()
        if self.mode != PRIVATE_COIN:
            return head
        if not index_bits:
            raise ValueError('private-coin messages need the index width')
        packed = 0
        for pos, index in enumerate(self.indices):
            if not 0 <= index < (1 << index_bits):
                raise ValueError('index %d overflows %d bits' % (index, index_bits))
            packed |= int(index) << (pos * index_bits)
        return head + packed.to_bytes((len(self.indices) * index_bits + 7) // 8, 'little')

    @classmethod
    def from_wire(cls, data, index_bits=None):
        data = bytes(data)
        if len(data) < 2:
            raise ValueError('truncated SQKR message')
        modes = {tag: mode for mode, tag in MODE_TAGS.items()}
        if data[0] not in modes:
            raise ValueError('unknown mode tag %d' % data[0])
        mode, k = modes[data[0]], data[1]
        end = 2 + (k + 7) // 8
        payload = BitPayload.from_bytes(data[2:end], k).value
        indices = None
        if mode == PRIVATE_COIN:
            if not index_bits:
                raise ValueError('private-coin messages need the index width')
            packed = int.from_bytes(data[end:], 'little')
            mask = (1 << index_bits) - 1
            indices = tuple((packed >> (pos * index_bits)) & mask for pos in range(k))
        return cls(mode, k, payload, indices)


class SqkrMessages(MessageBatch):
    """
    Reports of a round of SQKR clients

    ``indices`` is only set in private-coin mode and ``groups`` only in the
    grouping mode; ``n_input`` counts the clients before remainder clients
    were dropped.
    """

    def __init__(self, payloads, params, indices=None, groups=None,
                 shared_bits=None, draws=None, n_input=None):
        self.payloads = np.asarray(payloads, dtype=np.int64).reshape(-1)
        self.mode = params.mode
        self.k = params.width
        self.index_bits = params.index_bits
        self.indices = None if indices is None else np.asarray(indices, dtype=np.int64)
        self.groups = None if groups is None else np.asarray(groups, dtype=np.int64)
        n = self.payloads.size
        self._shared_bits = (np.zeros(n, dtype=np.int64) if shared_bits is None
                             else np.asarray(shared_bits, dtype=np.int64))
        self.draws = np.zeros(n, dtype=np.int64) if draws is None else np.asarray(draws)
        self.n_input = n if n_input is None else int(n_input)

    def __len__(self):
        return self.payloads.size

    def __getitem__(self, index):
        indices = None if self.indices is None else tuple(int(v) for v in self.indices[index])
        return SqkrMessage(self.mode, self.k, int(self.payloads[index]), indices)

    @property
    def bits_per_client(self):
        bits = self.k
        if self.mode == PRIVATE_COIN:
            bits += self.k * self.index_bits
        return np.full(len(self), bits, dtype=np.int64)

    @property
    def shared_bits_per_client(self):
        return self._shared_bits

    @property
    def payload_values(self):
        return self.payloads, self.k

    def to_wire(self):
        return [self[i].to_wire(self.index_bits) for i in range(len(self))]


def sqkr_quantize(a, level, rng):
    """
    Unbiased one-bit quantization of Kashin coefficients

    Each :math:`a_j` becomes ``+level`` with probability
    ``(a_j + level) / (2 level)`` and ``-level`` otherwise, so that
    :math:`E[q_j] = a_j`.

    Parameters
    ----------

    a : array_like or KashinCoefficients
        coefficients with :math:`|a_j| \\le` ``level``
    level : float
        :math:`c/\\sqrt{d}`
    rng : numpy.random.Generator
        the client's private randomness

    """
    a = np.asarray(getattr(a, 'a', a), dtype=float)
    if np.any(np.abs(a) > level * (1 + NORM_SLACK)):
        raise ValueError('a coefficient exceeds the quantization level %g' % level)
    plus = rng.random(a.shape) < np.clip((a + level) / (2 * level), 0.0, 1.0)
    return np.where(plus, level, -level)


def _as_streams(shared, n):
    if isinstance(shared, SharedRandomness):
        return [shared]
    if np.isscalar(shared):
        return client_streams(shared, n)
    return list(shared)


def _kashin_coefficients(X, params):
    # the quantizer needs |a_j| <= K0/sqrt(N), so the level may not be doubled
    return kashin_decompose(params.frame, X, level=params.kashin_level, tol=KASHIN_TOL,
                            max_restarts=0).a


def sqkr_encode(X, params, shared, rng):
    """
    Client-side SQKR encoder

    Parameters
    ----------

    X : array_like, shape (d,) or (n, d)
        client vectors with :math:`\\|x\\|_2 \\le 1`
    params : SqkrParams
        ``public`` or ``private`` mode
    shared : list of SharedRandomness, SharedRandomness or int
        one stream per client (or the seed they derive from); in private-coin
        mode these streams stay at the client
    rng : numpy.random.Generator
        private randomness for quantization and randomized response

    Returns
    -------

    messages : SqkrMessages

    """
    if params.mode == GROUPING:
        raise ValueError('the grouping mode is encoded by sqkr_group_encode')
    X = check_array(np.atleast_2d(X), dtype=float)
    n = X.shape[0]
    streams = _as_streams(shared, n)
    if len(streams) != n:
        raise ValueError('%d streams for %d clients' % (len(streams), n))

    quantized = sqkr_quantize(_kashin_coefficients(X, params), params.level, rng)
    before = np.array([stream.bits_consumed for stream in streams], dtype=np.int64)
    indices = draw_indices(streams, params.N, params.k)
    consumed = np.array([stream.bits_consumed for stream in streams], dtype=np.int64) - before
    # absolute stream positions; the server replays every stream from its start
    draws = np.array([stream.counter for stream in streams], dtype=np.int64)

    bits = np.take_along_axis(quantized, indices, axis=1) > 0
    payloads = rr_perturb(bits_to_values(bits), params.rr, rng)
    if params.mode == PRIVATE_COIN:
        return SqkrMessages(payloads, params, indices=indices, draws=draws)
    return SqkrMessages(payloads, params, shared_bits=consumed, draws=draws)


def sqkr_aggregate(indices, payloads, params):
    """
    Sum of the per-client coefficient estimates

    :math:`\\hat a_j = (N/k) \\cdot debias \\cdot \\sum_m \\tilde q_m 1\\{j = s_m\\}`
    accumulated over clients into one length-``N`` vector.

    """
    indices = np.asarray(indices, dtype=np.int64).reshape(-1, params.k)
    signs = 2.0 * values_to_bits(payloads, params.k) - 1.0
    weight = params.debias * params.N / params.k * params.level
    return np.bincount(indices.ravel(), weights=weight * signs.ravel(), minlength=params.N)


def sqkr_decode(messages, params, shared=None):
    """
    Server-side estimate of the empirical mean :math:`\\frac{1}{n}\\sum_i x_i`

    In public-coin mode the sampled coordinates are re-derived by replaying
    ``shared`` (a list of client streams or the seed they derive from).

    Raises
    ------

    StreamDesyncError
        if the replayed or transmitted coordinates are inconsistent with the
        messages

    """
    n = len(messages)
    if not n:
        raise ValueError('no messages to decode')
    if messages.mode != params.mode or messages.k != params.width:
        raise ValueError('messages were produced by a different parametrization')
    if params.mode == GROUPING:
        return sqkr_group_decode(messages, params)

    if params.mode == PUBLIC_COIN:
        if shared is None:
            raise ValueError('public-coin decoding needs the shared streams')
        streams = [stream.replay() for stream in _as_streams(shared, n)]
        if len(streams) != n:
            raise StreamDesyncError('%d shared streams for %d messages' % (len(streams), n))
        indices = draw_indices(streams, params.N, params.k)
        replayed = np.array([stream.counter for stream in streams], dtype=np.int64)
        if np.any(replayed != messages.draws):
            raise StreamDesyncError('shared draws replayed at the server differ from the clients')
    else:
        indices = messages.indices
        if indices is None or indices.shape != (n, params.k):
            raise StreamDesyncError('private-coin messages carry no usable indices')
        if np.any(indices < 0) or np.any(indices >= params.N):
            raise StreamDesyncError('a transmitted index lies outside [0, %d)' % params.N)

    return params.frame.synthesize(sqkr_aggregate(indices, messages.payloads, params) / n)


def sqkr_group_encode(X, params, rng):
    """
    Client-side encoder of the grouping mode

    Client ``i`` belongs to group ``l = i mod m`` and reports the quantized
    signs of coordinates ``[l b*, (l + 1) b*)`` through :math:`2^{b^*}`-RR.
    Clients beyond the largest multiple of ``m`` are dropped.

    Raises
    ------

    EmptyGroupError
        if there are fewer clients than groups

    """
    if params.mode != GROUPING:
        raise ValueError('sqkr_group_encode requires the grouping mode')
    X = check_array(np.atleast_2d(X), dtype=float)
    n, m, width = X.shape[0], params.n_groups, params.b_star
    if n < m:
        raise EmptyGroupError('%d clients cannot populate %d coordinate groups' % (n, m))
    n_eff = params.effective_n(n)
    if n_eff < n:
        LOGGER.info('SQKR grouping: dropping %d remainder client(s), effective n=%d',
                    n - n_eff, n_eff)

    coeffs = np.zeros((n_eff, m * width))
    coeffs[:, :params.N] = _kashin_coefficients(X[:n_eff], params)
    quantized = sqkr_quantize(coeffs, params.level, rng)
    groups = np.arange(n_eff) % m
    block = groups[:, None] * width + np.arange(width)
    bits = np.take_along_axis(quantized, block, axis=1) > 0
    payloads = rr_perturb(bits_to_values(bits), params.rr, rng)
    return SqkrMessages(payloads, params, groups=groups, n_input=n)


def sqkr_group_decode(messages, params):
    """Average the per-group coordinate estimates and synthesize"""
    m, width = params.n_groups, params.b_star
    groups = messages.groups
    if groups is None:
        groups = np.arange(len(messages)) % m
    sizes = np.bincount(groups, minlength=m)
    if np.any(sizes == 0):
        raise EmptyGroupError('%d coordinate group(s) received no clients' % (sizes == 0).sum())

    sums = np.zeros((m, width))
    np.add.at(sums, groups, 2.0 * values_to_bits(messages.payloads, width) - 1.0)
    coeffs = params.debias * params.level * sums / sizes[:, None]
    return params.frame.synthesize(coeffs.ravel()[:params.N])


def sqkr_statistical(X, params, rng):
    """Estimate :math:`\\theta(P)` from i.i.d. clients without shared randomness"""
    return sqkr_group_decode(sqkr_group_encode(X, params, rng), params)


def sqkr_mse_bound(params, n):
    """
    Upper bound on the :math:`\\ell_2^2` error of the averaged estimate

    :math:`K_0^2 \\cdot debias^2 \\cdot d / (k n)` for the sampling modes and
    :math:`K_0^2 \\cdot debias^2 \\cdot d\\,m / (N n)` for the grouping mode.

    """
    scale = params.kashin_level ** 2 * params.debias ** 2 * params.d / float(n)
    if params.mode == GROUPING:
        return scale * params.n_groups / params.N
    return scale / params.k


class SQKR(_BaseProtocol):
    """
    Mean estimation with SQKR

    Parameters
    ----------

    d : int
        dimension
    eps : float
        privacy level (nats)
    b : int
        bit budget per client
    coin : str
        ``'public'`` (shared sampling) or ``'private'`` (indices transmitted)
    kashin_level : float
        ``K0``
    frame_seed : int
        seed of the tight frame
    shared_seed : int
        seed of the per-client sampling streams
    random_state : int, numpy.random.Generator or None
        private randomness of the clients

    """

    def __init__(self, d, eps=1.0, b=1, coin=PUBLIC_COIN, kashin_level=DEFAULT_KASHIN_LEVEL,
                 frame_seed=0, shared_seed=0, random_state=None):
        self.d = d
        self.eps = eps
        self.b = b
        self.coin = coin
        self.kashin_level = kashin_level
        self.frame_seed = frame_seed
        self.shared_seed = shared_seed
        self.random_state = random_state

    def get_protocol_params(self, n=None):
        if self.coin not in (PUBLIC_COIN, PRIVATE_COIN):
            raise ValueError('coin must be "public" or "private", got "%s"' % self.coin)
        return SqkrParams(self.d, self.eps, self.b, n=n, mode=self.coin,
                          kashin_level=self.kashin_level, frame_seed=self.frame_seed)

    def encode(self, X):
        X = np.atleast_2d(X)
        self.params_ = self.get_protocol_params(n=X.shape[0])
        # private coin: the same streams, held by the clients alone
        streams = client_streams(self.shared_seed, X.shape[0])
        return sqkr_encode(X, self.params_, streams, np.random.default_rng(self.random_state))

    def decode(self, messages):
        params = getattr(self, 'params_', None) or self.get_protocol_params(n=len(messages))
        return sqkr_decode(messages, params, shared=self.shared_seed)


class StatisticalSQKR(_BaseProtocol):
    """Estimation of :math:`\\theta(P)` with SQKR and deterministic grouping"""

    def __init__(self, d, eps=1.0, b=1, kashin_level=DEFAULT_KASHIN_LEVEL, frame_seed=0,
                 random_state=None):
        self.d = d
        self.eps = eps
        self.b = b
        self.kashin_level = kashin_level
        self.frame_seed = frame_seed
        self.random_state = random_state

    def get_protocol_params(self, n=None):
        return SqkrParams(self.d, self.eps, self.b, n=n, mode=GROUPING,
                          kashin_level=self.kashin_level, frame_seed=self.frame_seed)

    def encode(self, X):
        X = np.atleast_2d(X)
        self.params_ = self.get_protocol_params(n=X.shape[0])
        return sqkr_group_encode(X, self.params_, np.random.default_rng(self.random_state))

    def decode(self, messages):
        params = getattr(self, 'params_', None) or self.get_protocol_params(n=len(messages))
        return sqkr_group_decode(messages, params)
