# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""

Base interface for private, communication-constrained estimation protocols

"""
from abc import ABCMeta, abstractmethod

import numpy as np
import six
from sklearn.base import BaseEstimator


class EmptyGroupError(ValueError):
    """A deterministic client group received no clients"""


class AccountingError(RuntimeError):
    """Measured shared-randomness consumption differs from the protocol formula"""


class ProtocolParams(object):
    """
    Parameters shared by every protocol: dimension (or alphabet size) ``d``,
    privacy level ``eps`` (nats) and per-client bit budget ``b``. Subclasses
    add the derived quantities (``k``, ``N``, ``B``, ...).
    """

    def __init__(self, d, eps, b):
        d, b, eps = int(d), int(b), float(eps)
        if d < 1:
            raise ValueError('dimension must be at least 1, got %d' % d)
        if b < 1:
            raise ValueError('bit budget must be at least 1, got %d' % b)
        if not eps > 0 or not np.isfinite(eps):
            raise ValueError('privacy level must be finite and positive, got %g' % eps)
        self.d = d
        self.eps = eps
        self.b = b

    def __repr__(self):
        fields = ', '.join('%s=%r' % (key, val) for key, val in sorted(vars(self).items())
                           if np.isscalar(val))
        return '%s(%s)' % (self.__class__.__name__, fields)

    @property
    def budget_bits(self):
        """Declared per-client bit budget enforced by the channel"""
        return self.b

    @property
    def shared_bits_per_client(self):
        """Shared-randomness bits every client consumes"""
        return 0

    @property
    def rr_widths(self):
        """Widths ``k`` of the randomized-response alphabets this protocol uses"""
        return ()


class _BaseProtocol(six.with_metaclass(ABCMeta, BaseEstimator)):
    """
    A base, abstract class for estimation protocols

    A protocol encodes the local data of ``n`` clients into a
    :class:`~ldptrilemma.core.bits.MessageBatch` and decodes a batch into an
    estimate at the server. ``fit`` runs both ends.
    """

    @abstractmethod
    def get_protocol_params(self, n=None):
        """
        Returns the :class:`ProtocolParams` for a round with ``n`` clients

        """

    @abstractmethod
    def encode(self, X):
        """
        Placeholder for encode. Subclasses should implement this method!

        Parameters
        ----------

        X : array_like
            one row (mean estimation) or one symbol (frequency/distribution
            estimation) per client

        Returns
        -------

        messages : MessageBatch

        """

    @abstractmethod
    def decode(self, messages):
        """
        Server-side estimator computed from the received ``messages``

        """

    def fit(self, X, y=None):
        """
        Simulate one round: encode ``X`` at the clients and decode at the server

        Returns
        -------

        self : object
            Returns the instance itself, with ``messages_`` and ``estimate_`` set.

        """
        self.messages_ = self.encode(X)
        self.estimate_ = self.decode(self.messages_)
        return self


def ceil_int(value, slack=1e-9):
    """``ceil(value)``, ignoring round-off just above an integer (``ceil(1.0000000001) == 1``)"""
    return int(np.ceil(value - slack))
