# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Bit payloads and the budget-enforcing channel
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

A ``k``-bit RHR/SQKR message packs a location in the ``k - 1`` low-order
bits and a sign in the top bit (``1`` for ``+1``). Payloads serialize
big-endian within bytes and are zero-padded to whole bytes; the framed
wire format prepends a one-byte header with the unpadded length.

"""
from abc import ABCMeta, abstractmethod

import numpy as np
import six


class BudgetViolationError(RuntimeError):
    """A client payload exceeded the declared bit budget"""


class BitPayload(object):
    """An ordered bit string of fixed ``length`` holding ``value``"""

    __slots__ = ('value', 'length')

    def __init__(self, value, length):
        value, length = int(value), int(length)
        if length < 0 or value < 0 or value >> length:
            raise ValueError('value %d does not fit in %d bits' % (value, length))
        self.value = value
        self.length = length

    @property
    def bits(self):
        """Bits, most significant first"""
        return tuple((self.value >> shift) & 1
                     for shift in range(self.length - 1, -1, -1))

    def __len__(self):
        return self.length

    def __eq__(self, other):
        return (isinstance(other, BitPayload) and
                (self.value, self.length) == (other.value, other.length))

    def __hash__(self):
        return hash((self.value, self.length))

    def __repr__(self):
        return 'BitPayload(%r)' % ''.join(str(bit) for bit in self.bits)

    def to_bytes(self):
        """Big-endian, zero-padded to a whole byte"""
        return np.packbits(np.array(self.bits, dtype=np.uint8)).tobytes()

    @classmethod
    def from_bytes(cls, data, length):
        bits = np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8))
        if bits.size < length:
            raise ValueError('%d bytes cannot hold %d bits' % (len(data), length))
        if np.any(bits[length:]):
            raise ValueError('nonzero padding after %d bits' % length)
        value = 0
        for bit in bits[:length]:
            value = (value << 1) | int(bit)
        return cls(value, length)

    def to_wire(self):
        """Framed encoding: one-byte length header followed by the payload"""
        if self.length > 255:
            raise ValueError('framed payloads hold at most 255 bits')
        return bytes([self.length]) + self.to_bytes()

    @classmethod
    def from_wire(cls, data):
        data = bytes(data)
        if not data:
            raise ValueError('empty frame')
        length = data[0]
        return cls.from_bytes(data[1:1 + (length + 7) // 8], length)


def pack_message(sign, loc, k):
    """
    Pack a ``(sign, loc)`` pair into a ``k``-bit payload

    Parameters
    ----------

    sign : int or bool
           ``+1``/``True`` is stored as bit ``1``; ``-1``/``False`` as ``0``
    loc : int
          location in ``[0, 2**(k - 1))``; must be ``0`` when ``k == 1``
    k : int
        payload width

    """
    k = int(k)
    if k < 1:
        raise ValueError('payload width must be at least one bit')
    loc = int(loc)
    if not 0 <= loc < (1 << (k - 1)):
        raise ValueError('loc %d overflows %d bits' % (loc, k - 1))
    sign_bit = 1 if (sign is True or (sign is not False and sign > 0)) else 0
    return BitPayload((sign_bit << (k - 1)) | loc, k)


def unpack_message(payload, k):
    """Inverse of :func:`pack_message`; returns ``(sign, loc)`` with sign in {+1, -1}"""
    if payload.length != k:
        raise ValueError('expected a %d-bit payload, got %d bits' % (k, payload.length))
    sign = 1 if payload.value >> (k - 1) else -1
    return sign, payload.value & ((1 << (k - 1)) - 1)


def pack_fields(signs, locs, k):
    """Vectorized :func:`pack_message` over arrays of signs and locations"""
    signs = np.asarray(signs)
    locs = np.asarray(locs, dtype=np.int64)
    if np.any(locs < 0) or np.any(locs >> (k - 1)):
        raise ValueError('a location overflows %d bits' % (k - 1))
    return ((signs > 0).astype(np.int64) << (k - 1)) | locs


def unpack_fields(values, k):
    """Vectorized :func:`unpack_message`; returns ``(signs, locs)`` arrays"""
    values = np.asarray(values, dtype=np.int64)
    signs = np.where(values >> (k - 1), 1, -1).astype(np.int8)
    return signs, values & ((1 << (k - 1)) - 1)


def bits_to_values(bits):
    """Pack an ``(n, k)`` array of bits (first column most significant)"""
    bits = np.asarray(bits, dtype=np.int64)
    weights = np.left_shift(1, np.arange(bits.shape[-1] - 1, -1, -1, dtype=np.int64))
    return bits @ weights


def values_to_bits(values, k):
    """Inverse of :func:`bits_to_values`"""
    values = np.asarray(values, dtype=np.int64)
    shifts = np.arange(k - 1, -1, -1, dtype=np.int64)
    return ((values[..., None] >> shifts) & 1).astype(np.uint8)


class MessageBatch(six.with_metaclass(ABCMeta, object)):
    """
    Messages produced by ``n`` clients in one round. Subclasses know how to
    count the bits each client put on the wire and how many shared-randomness
    bits each client consumed.
    """

    @abstractmethod
    def __len__(self):
        """Number of clients"""

    @property
    @abstractmethod
    def bits_per_client(self):
        """Integer array with the number of bits sent by every client"""

    @property
    def shared_bits_per_client(self):
        """Integer array of shared-randomness bits consumed per client"""
        return np.zeros(len(self), dtype=np.int64)

    @property
    def payload_values(self):
        """Integer payloads and their widths, when the scheme has fixed-width payloads"""
        return None, None


class Channel(object):
    """
    Simulated uplink that rejects any client message above ``budget`` bits

    >>> Channel(2).budget
    2

    """

    def __init__(self, budget):
        self.budget = int(budget)
        self.total_bits = 0
        self.messages = 0

    def transmit(self, batch):
        bits = np.asarray(batch.bits_per_client)
        over = np.flatnonzero(bits > self.budget)
        if over.size:
            raise BudgetViolationError(
                'client %d sent %d bits over a %d-bit budget (%d offending clients)' % (
                    over[0], bits[over[0]], self.budget, over.size))
        values, width = batch.payload_values
        if values is not None:
            values = np.asarray(values, dtype=np.int64)
            if np.any(values < 0) or np.any(values >> width):
                raise BudgetViolationError('a payload value does not fit its %d-bit field' % width)
        self.total_bits += int(bits.sum())
        self.messages += len(batch)
        return batch
