# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
from .__about__ import (
    __version__,
    __author__,
    __email__,
    __maintainer__,
    __copyright__,
    __credits__,
    __license__,
    __status__,
    __description__,
    __longdesc__,
    __url__,
    __download__,
)

from .core.base import AccountingError, EmptyGroupError
from .core.bits import BudgetViolationError
from .core.frames import KashinDecompositionError
from .core.privacy import PrivacyCertificateError, StreamDesyncError
