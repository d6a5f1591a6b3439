# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
""" Bit payloads and the channel """
import numpy as np
import pytest

from ..bits import (
    BitPayload, BudgetViolationError, Channel, MessageBatch,
    bits_to_values, pack_fields, pack_message, unpack_fields, unpack_message, values_to_bits,
)


class _Batch(MessageBatch):
    def __init__(self, bits, values=None, width=None):
        self._bits = np.asarray(bits)
        self._values = values
        self._width = width

    def __len__(self):
        return self._bits.size

    @property
    def bits_per_client(self):
        return self._bits

    @property
    def payload_values(self):
        return self._values, self._width


def test_pack_message():
    payload = pack_message(+1, 2, 3)
    assert payload == BitPayload(0b110, 3)
    assert payload.bits == (1, 1, 0)
    assert unpack_message(payload, 3) == (1, 2)
    assert unpack_message(pack_message(-1, 0, 1), 1) == (-1, 0)


@pytest.mark.parametrize('k', range(1, 9))
def test_pack_message_exhaustive(k):
    for value in range(1 << k):
        sign, loc = unpack_message(BitPayload(value, k), k)
        payload = pack_message(sign, loc, k)
        assert payload.value == value
        assert BitPayload.from_wire(payload.to_wire()) == payload
    signs, locs = unpack_fields(np.arange(1 << k), k)
    assert np.array_equal(pack_fields(signs, locs, k), np.arange(1 << k))


def test_pack_message_overflow():
    with pytest.raises(ValueError):
        pack_message(1, 1, 1)
    with pytest.raises(ValueError):
        pack_message(1, 4, 3)
    with pytest.raises(ValueError):
        unpack_message(BitPayload(1, 2), 3)


def test_payload_bytes():
    payload = BitPayload(0b110, 3)
    assert payload.to_bytes() == b'\xc0'
    assert BitPayload.from_bytes(b'\xc0', 3) == payload
    assert payload.to_wire() == b'\x03\xc0'
    assert BitPayload.from_wire(payload.to_wire()) == payload
    with pytest.raises(ValueError):
        BitPayload.from_bytes(b'\xc1', 3)
    with pytest.raises(ValueError):
        BitPayload(8, 3)


def test_vectorized_fields():
    signs = np.array([1, -1, -1, 1])
    locs = np.array([3, 0, 2, 1])
    values = pack_fields(signs, locs, 3)
    assert values.tolist() == [7, 0, 2, 5]
    back_signs, back_locs = unpack_fields(values, 3)
    assert back_signs.tolist() == signs.tolist()
    assert back_locs.tolist() == locs.tolist()
    assert [pack_message(s, loc, 3).value for s, loc in zip(signs, locs)] == values.tolist()


def test_bits_values():
    bits = np.array([[1, 0, 1], [0, 0, 1]])
    assert bits_to_values(bits).tolist() == [5, 1]
    assert values_to_bits([5, 1], 3).tolist() == bits.tolist()


def test_channel_budget():
    channel = Channel(2)
    channel.transmit(_Batch([1, 2, 2]))
    assert channel.total_bits == 5
    assert channel.messages == 3
    with pytest.raises(BudgetViolationError):
        channel.transmit(_Batch([1, 3]))


def test_channel_payload_overflow():
    with pytest.raises(BudgetViolationError):
        Channel(2).transmit(_Batch([2, 2], values=[3, 4], width=2))
