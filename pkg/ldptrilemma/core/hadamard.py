# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Sylvester-Hadamard primitives
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

Entries of :math:`H_d` are computed as :math:`(-1)^{\\mathrm{popcount}(r \\wedge c)}`
with 0-based indices, which agrees with the recursion
:math:`H_{2m} = [[H_m, H_m], [H_m, -H_m]]`. The transform is unnormalized;
callers apply every :math:`1/d` factor themselves.

"""
from collections import namedtuple

import numpy as np


def is_power_of_two(value):
    """Return ``True`` if ``value`` is ``2**m`` for some integer ``m >= 0``"""
    value = int(value)
    return value >= 1 and (value & (value - 1)) == 0


def log2_int(value):
    """Base-2 logarithm of a power of two"""
    if not is_power_of_two(value):
        raise ValueError('%d is not a power of two' % value)
    return int(value).bit_length() - 1


def next_power_of_two(value):
    """Smallest power of two greater or equal than ``value`` (``value >= 1``)"""
    value = int(value)
    if value < 1:
        raise ValueError('expected a positive integer, got %d' % value)
    return 1 << (value - 1).bit_length()


def parity(values):
    """Vectorized parity of the popcount of nonnegative integers"""
    values = np.asarray(values, dtype=np.int64).copy()
    for shift in (32, 16, 8, 4, 2, 1):
        values ^= values >> shift
    return values & 1


class HadamardIndex(namedtuple('HadamardIndex', ['row', 'col', 'order'])):
    """A validated position ``(row, col)`` inside :math:`H_{order}`"""

    __slots__ = ()

    def __new__(cls, row, col, order):
        if not is_power_of_two(order):
            raise ValueError('Hadamard order must be a power of two, got %s' % order)
        if not 0 <= row < order or not 0 <= col < order:
            raise ValueError('index (%d, %d) out of range for order %d' % (row, col, order))
        return super(HadamardIndex, cls).__new__(cls, int(row), int(col), int(order))

    @property
    def sign(self):
        return -1 if bin(self.row & self.col).count('1') % 2 else 1


def hadamard_entry(row, col, order):
    """
    Entry ``(row, col)`` of the Sylvester-Hadamard matrix of size ``order``

    >>> hadamard_entry(1, 1, 2)
    -1
    >>> hadamard_entry(3, 3, 4)
    1

    """
    return HadamardIndex(row, col, order).sign


def hadamard_signs(rows, cols):
    """Vectorized :func:`hadamard_entry` (no range checks) as an ``int8`` array"""
    bits = parity(np.bitwise_and(np.asarray(rows, dtype=np.int64),
                                 np.asarray(cols, dtype=np.int64)))
    return (1 - 2 * bits).astype(np.int8)


def fwht(values):
    """
    Fast Walsh-Hadamard transform along the last axis

    Returns :math:`H_d \\cdot v` (unnormalized) in :math:`O(d \\log d)`
    operations per vector. Leading axes are treated as a batch.

    Parameters
    ----------

    values : array_like, shape (..., d)
             ``d`` must be a power of two

    Returns
    -------

    out : numpy.ndarray of float, same shape as ``values``

    """
    out = np.array(values, dtype=float)
    if out.ndim == 0:
        raise ValueError('fwht expects at least one dimension')
    length = out.shape[-1]
    if not is_power_of_two(length):
        raise ValueError('fwht length must be a power of two, got %d' % length)

    lead = out.shape[:-1]
    half = 1
    while half < length:
        out = out.reshape(lead + (length // (2 * half), 2, half))
        upper = out[..., 0, :]
        lower = out[..., 1, :]
        out = np.stack((upper + lower, upper - lower), axis=-2)
        half *= 2
    return out.reshape(lead + (length,))
