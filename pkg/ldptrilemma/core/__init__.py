# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
The :mod:`ldptrilemma.core` module includes the Hadamard primitives, bit
payloads, randomized tight frames, randomized response and the base
interfaces of the estimation protocols.
"""
from .hadamard import HadamardIndex, hadamard_entry, fwht
from .bits import (
    BitPayload, BudgetViolationError, Channel, MessageBatch,
    pack_message, unpack_message,
)
from .frames import (
    DEFAULT_KASHIN_LEVEL, KashinCoefficients, KashinDecompositionError, TightFrame,
    analyze, build_frame, calibrate_kashin_level, kashin_decompose, synthesize,
)
from .privacy import (
    PrivacyCertificateError, RRParams, SharedRandomness, StreamDesyncError, binary_ldp,
    client_streams,
    draw_uniform, ldp_certificate, rr_debias, rr_perturb,
)
from .base import AccountingError, EmptyGroupError, ProtocolParams, ceil_int
