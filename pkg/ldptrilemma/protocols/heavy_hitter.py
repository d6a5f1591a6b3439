# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Frequency estimation in :math:`\\ell_\\infty`
---------------------------------------------

Each client draws ``k = min(b, ceil(eps))`` Hadamard columns ``r`` from the
shared stream and sends the bits :math:`(H_D)_{x, r}` through ``k``
binary channels with :math:`\\varepsilon' = \\varepsilon / k`. The server
estimates

.. math::

    \\hat D(j) = \\frac{1}{nk} \\sum_i \\sum_\\ell debias(\\varepsilon')
    (H_D)_{j, r_i^{(\\ell)}} \\tilde y_i^{(\\ell)}

with a single transform of length ``D``.

"""
import numpy as np

from ..core.base import ProtocolParams, _BaseProtocol, ceil_int
from ..core.bits import BitPayload, MessageBatch, bits_to_values, values_to_bits
from ..core.hadamard import fwht, hadamard_signs, next_power_of_two
from ..core.privacy import (
    RRParams, StreamDesyncError, binary_ldp, client_streams, draw_indices, uniform_bits,
)
from .rhr import FrequencyEstimate, check_symbols


class HeavyHitterParams(ProtocolParams):
    """``k = min(b, ceil(eps))`` one-bit reports, each :math:`\\varepsilon/k`-LDP"""

    def __init__(self, d, eps, b, n=None):
        super(HeavyHitterParams, self).__init__(d, eps, b)
        self.n = None if n is None else int(n)
        self.D = next_power_of_two(self.d)
        self.k = max(1, min(self.b, ceil_int(self.eps)))
        self.eps_prime = self.eps / self.k

    @property
    def debias(self):
        return RRParams(self.eps_prime, 1).debias

    @property
    def subgaussian_norm(self):
        """Bound on the sub-Gaussian norm of every per-coordinate estimate"""
        return 2.0 * self.debias

    @property
    def index_bits(self):
        return uniform_bits(self.D)

    @property
    def shared_bits_per_client(self):
        return self.k * self.index_bits

    @property
    def rr_widths(self):
        return (1, )


class HeavyHitterMessages(MessageBatch):
    """``k``-bit reports (bit ``l`` is the output of the ``l``-th binary channel)"""

    def __init__(self, payloads, params, shared_bits=None, draws=None):
        self.payloads = np.asarray(payloads, dtype=np.int64).reshape(-1)
        self.k = params.k
        n = self.payloads.size
        self._shared_bits = (np.zeros(n, dtype=np.int64) if shared_bits is None
                             else np.asarray(shared_bits, dtype=np.int64))
        self.draws = np.zeros(n, dtype=np.int64) if draws is None else np.asarray(draws)

    def __len__(self):
        return self.payloads.size

    @property
    def bits_per_client(self):
        return np.full(len(self), self.k, dtype=np.int64)

    @property
    def shared_bits_per_client(self):
        return self._shared_bits

    @property
    def payload_values(self):
        return self.payloads, self.k

    def to_wire(self):
        return [bytes([self.k]) + BitPayload(int(value), self.k).to_bytes()
                for value in self.payloads]


def heavy_hitter_encode(x, params, shared, rng):
    """
    Client-side encoder

    Parameters
    ----------

    x : array_like of int
        one symbol per client
    shared : list of SharedRandomness or int
        per-client shared streams (or their seed)

    """
    x = check_symbols(x, params.d)
    n = x.size
    streams = client_streams(shared, n) if np.isscalar(shared) else list(shared)
    before = np.array([stream.bits_consumed for stream in streams], dtype=np.int64)
    cols = draw_indices(streams, params.D, params.k)
    consumed = np.array([stream.bits_consumed for stream in streams], dtype=np.int64) - before
    draws = np.array([stream.counter for stream in streams], dtype=np.int64)

    bits = (hadamard_signs(x[:, None], cols) > 0).astype(np.int64)
    noisy = binary_ldp(bits, params.eps_prime, rng)
    return HeavyHitterMessages(bits_to_values(noisy), params, shared_bits=consumed, draws=draws)


def heavy_hitter_from_columns(cols, payloads, params):
    """Estimate from known Hadamard columns ``cols`` of shape ``(n, k)``"""
    cols = np.asarray(cols, dtype=np.int64).reshape(-1, params.k)
    signs = 2.0 * values_to_bits(payloads, params.k) - 1.0
    weights = np.bincount(cols.ravel(), weights=params.debias * signs.ravel(),
                          minlength=params.D)
    padded = fwht(weights) / (cols.shape[0] * params.k)
    return FrequencyEstimate(padded[:params.d], padded)


def heavy_hitter_decode(messages, params, shared):
    """Server-side estimate; columns are re-derived by replaying ``shared``"""
    n = len(messages)
    if not n:
        raise ValueError('no messages to decode')
    streams = (client_streams(shared, n) if np.isscalar(shared)
               else [stream.replay() for stream in shared])
    if len(streams) != n:
        raise StreamDesyncError('%d shared streams for %d messages' % (len(streams), n))
    cols = draw_indices(streams, params.D, params.k)
    if np.any(np.array([stream.counter for stream in streams]) != messages.draws):
        raise StreamDesyncError('shared draws replayed at the server differ from the clients')
    return heavy_hitter_from_columns(cols, messages.payloads, params)


def heavy_hitter_estimate(data, eps, b, params=None, shared=0, rng=None):
    """Run one round over ``data`` and return the :class:`FrequencyEstimate`"""
    data = np.atleast_1d(data)
    if params is None:
        params = HeavyHitterParams(int(data.max()) + 1, eps, b, n=data.size)
    rng = np.random.default_rng(rng)
    return heavy_hitter_decode(heavy_hitter_encode(data, params, shared, rng), params, shared)


class HeavyHitter(_BaseProtocol):
    """Frequency estimation with an :math:`\\ell_\\infty` guarantee"""

    def __init__(self, d, eps=1.0, b=1, shared_seed=0, random_state=None):
        self.d = d
        self.eps = eps
        self.b = b
        self.shared_seed = shared_seed
        self.random_state = random_state

    def get_protocol_params(self, n=None):
        return HeavyHitterParams(self.d, self.eps, self.b, n=n)

    def encode(self, X):
        x = check_symbols(X, self.d)
        self.params_ = self.get_protocol_params(n=x.size)
        return heavy_hitter_encode(x, self.params_, self.shared_seed,
                                   np.random.default_rng(self.random_state))

    def decode(self, messages):
        params = getattr(self, 'params_', None) or self.get_protocol_params(n=len(messages))
        return heavy_hitter_decode(messages, params, self.shared_seed)
