# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Baselines
~~~~~~~~~

Subset selection (SS) and the separation baseline, which privatizes with SS
and then quantizes by letting each client ship only one block of
``min(2**b, d)`` coordinates of its report.

With :math:`w = \\lceil d/(e^\\varepsilon + 1) \\rceil`, SS reports a
``w``-subset ``y`` with :math:`Q(y \\mid x) \\propto e^\\varepsilon y_x + (1 - y_x)`.
Coordinate ``j`` of the report is set with probability ``pi1`` when
``x = j`` and ``pi0`` otherwise, so ``(T_j/n - pi0)/(pi1 - pi0)`` is unbiased.

"""
import numpy as np
from scipy.special import comb

from ..core.base import EmptyGroupError, ProtocolParams, _BaseProtocol
from ..core.bits import MessageBatch
from .rhr import FrequencyEstimate, check_symbols

#: clients sampled together by the vectorized SS encoder (bounded memory)
SS_CHUNK_CELLS = 1 << 22


class SsParams(ProtocolParams):
    """
    Parameters of subset selection over ``d >= 2`` symbols

    The natural encoding of a report is a ``d``-bit bitmap; ``budget_bits``
    is therefore ``d``.
    """

    def __init__(self, d, eps, n=None):
        super(SsParams, self).__init__(d, eps, d)
        if self.d < 2:
            raise ValueError('subset selection needs at least two symbols')
        self.n = None if n is None else int(n)
        self.w = int(np.ceil(self.d / (np.exp(self.eps) + 1.0)))

    @property
    def include_prob(self):
        """:math:`e^\\varepsilon C(d-1, w-1) / (e^\\varepsilon C(d-1, w-1) + C(d-1, w))`"""
        # C(d-1, w) / C(d-1, w-1) = (d - w) / w
        return 1.0 / (1.0 + (self.d - self.w) / (self.w * np.exp(self.eps)))

    @property
    def pi1(self):
        return self.include_prob

    @property
    def pi0(self):
        incl = self.include_prob
        return (incl * (self.w - 1) + (1.0 - incl) * self.w) / (self.d - 1)

    def likelihood(self, y, x):
        """Exact :math:`Q_{SS}(y \\mid x)` of a bitmap ``y`` with ``w`` ones"""
        norm = (np.exp(self.eps) * comb(self.d - 1, self.w - 1, exact=True) +
                comb(self.d - 1, self.w, exact=True))
        return (np.exp(self.eps) if y[x] else 1.0) / norm


class SsReports(MessageBatch):
    """``(n, d)`` boolean bitmaps, each with exactly ``w`` ones"""

    def __init__(self, bitmaps):
        self.bitmaps = np.asarray(bitmaps, dtype=bool)

    def __len__(self):
        return self.bitmaps.shape[0]

    @property
    def bits_per_client(self):
        return np.full(len(self), self.bitmaps.shape[1], dtype=np.int64)

    def to_wire(self):
        return [np.packbits(row).tobytes() for row in self.bitmaps]

    @classmethod
    def from_wire(cls, frames, d):
        rows = [np.unpackbits(np.frombuffer(frame, dtype=np.uint8))[:d] for frame in frames]
        return cls(np.array(rows, dtype=bool))


def ss_encode(x, params, rng):
    """
    Two-stage SS sampler

    ``x`` itself is included with probability ``include_prob``; the remaining
    ``w - 1`` (or ``w``) slots are filled uniformly without replacement from
    the other ``d - 1`` symbols, by ranking uniform keys.
    """
    x = check_symbols(x, params.d)
    n, d, w = x.size, params.d, params.w
    out = np.zeros((n, d), dtype=bool)
    step = max(1, SS_CHUNK_CELLS // d)
    for start in range(0, n, step):
        sym = x[start:start + step]
        rows = np.arange(sym.size)
        include = rng.random(sym.size) < params.include_prob
        slots = w - include.astype(np.int64)
        keys = rng.random((sym.size, d))
        keys[rows, sym] = np.inf
        ranks = np.argsort(np.argsort(keys, axis=1), axis=1)
        chunk = ranks < slots[:, None]
        chunk[rows, sym] = include
        out[start:start + step] = chunk
    return SsReports(out)


def ss_decode(reports, params, n=None):
    """Closed-form affine debias of the column counts ``T_j``"""
    bitmaps = getattr(reports, 'bitmaps', reports)
    n = bitmaps.shape[0] if n is None else int(n)
    if n < 1:
        raise ValueError('at least one report is required')
    freq = bitmaps.sum(axis=0) / float(n)
    return FrequencyEstimate((freq - params.pi0) / (params.pi1 - params.pi0))


class SeparationParams(ProtocolParams):
    """
    Separation baseline: SS over the padded alphabet, ``s`` blocks of
    ``chunk = min(2**b, d)`` coordinates; client ``i`` reports block ``i mod s``
    """

    def __init__(self, d, eps, b, n=None):
        super(SeparationParams, self).__init__(d, eps, b)
        if self.d < 2:
            raise ValueError('the separation baseline needs at least two symbols')
        self.n = None if n is None else int(n)
        self.chunk = min(1 << min(self.b, 62), self.d)
        self.s = -(-self.d // self.chunk)
        self.ss = SsParams(self.s * self.chunk, self.eps)

    @property
    def budget_bits(self):
        # the block is sent in full even where it exceeds b
        return max(self.b, self.chunk)

    def samples_per_block(self, n):
        """Effective sample size ``n'`` of every block"""
        return np.bincount(np.arange(int(n)) % self.s, minlength=self.s)


class SeparationReports(MessageBatch):
    """Group-restricted SS reports: ``(n, chunk)`` bitmaps plus the block of each client"""

    def __init__(self, bitmaps, groups):
        self.bitmaps = np.asarray(bitmaps, dtype=bool)
        self.groups = np.asarray(groups, dtype=np.int64)

    def __len__(self):
        return self.bitmaps.shape[0]

    @property
    def bits_per_client(self):
        return np.full(len(self), self.bitmaps.shape[1], dtype=np.int64)

    def to_wire(self):
        # group id is positional at the server; it is framed for self-description
        return [int(group).to_bytes(4, 'big') + np.packbits(row).tobytes()
                for group, row in zip(self.groups, self.bitmaps)]


def separation_encode(x, params, rng):
    """Privatize with SS, then keep the block of coordinates of each client's group"""
    x = check_symbols(x, params.d)
    n = x.size
    if n < params.s:
        raise EmptyGroupError('%d clients cannot populate %d coordinate blocks' % (n, params.s))
    full = ss_encode(x, params.ss, rng).bitmaps
    groups = np.arange(n) % params.s
    cols = groups[:, None] * params.chunk + np.arange(params.chunk)
    return SeparationReports(np.take_along_axis(full, cols, axis=1), groups)


def separation_decode(reports, params):
    """Per-block SS debias with the ``n'`` reports each block received"""
    sizes = np.bincount(reports.groups, minlength=params.s)
    if np.any(sizes == 0):
        raise EmptyGroupError('%d coordinate block(s) received no reports' % (sizes == 0).sum())
    counts = np.zeros((params.s, params.chunk))
    np.add.at(counts, reports.groups, reports.bitmaps.astype(float))
    freq = (counts / sizes[:, None]).ravel()
    padded = (freq - params.ss.pi0) / (params.ss.pi1 - params.ss.pi0)
    return FrequencyEstimate(padded[:params.d], padded)


def separation_distribution(data, eps, b, d=None, rng=None):
    """Run the separation baseline over ``data`` (symbols in ``[0, d)``)"""
    data = np.atleast_1d(data)
    d = int(data.max()) + 1 if d is None else int(d)
    params = SeparationParams(d, eps, b, n=data.size)
    reports = separation_encode(data, params, np.random.default_rng(rng))
    return separation_decode(reports, params)


class SubsetSelection(_BaseProtocol):
    """Frequency/distribution estimation with subset selection"""

    def __init__(self, d, eps=1.0, random_state=None):
        self.d = d
        self.eps = eps
        self.random_state = random_state

    def get_protocol_params(self, n=None):
        return SsParams(self.d, self.eps, n=n)

    def encode(self, X):
        x = check_symbols(X, self.d)
        self.params_ = self.get_protocol_params(n=x.size)
        return ss_encode(x, self.params_, np.random.default_rng(self.random_state))

    def decode(self, messages):
        params = getattr(self, 'params_', None) or self.get_protocol_params(n=len(messages))
        return ss_decode(messages, params)


class Separation(_BaseProtocol):
    """Privatize-then-quantize baseline for distribution estimation"""

    def __init__(self, d, eps=1.0, b=1, random_state=None):
        self.d = d
        self.eps = eps
        self.b = b
        self.random_state = random_state

    def get_protocol_params(self, n=None):
        return SeparationParams(self.d, self.eps, self.b, n=n)

    def encode(self, X):
        x = check_symbols(X, self.d)
        self.params_ = self.get_protocol_params(n=x.size)
        return separation_encode(x, self.params_, np.random.default_rng(self.random_state))

    def decode(self, messages):
        params = getattr(self, 'params_', None) or self.get_protocol_params(n=len(messages))
        return separation_decode(messages, params)
