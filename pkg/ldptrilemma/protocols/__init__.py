# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Estimation protocols: SQKR (mean), RHR and the heavy-hitter scheme
(frequency and distribution), subset selection and the separation baseline.
"""
from .sqkr import (
    GROUPING, PRIVATE_COIN, PUBLIC_COIN, SQKR, SqkrMessage, SqkrMessages, SqkrParams,
    StatisticalSQKR, sqkr_decode, sqkr_encode, sqkr_mse_bound, sqkr_quantize,
    sqkr_statistical,
)
from .rhr import (
    DISTRIBUTION, FREQUENCY, RHR, FrequencyEstimate, RHRDistribution, RhrMessage,
    RhrMessages, RhrParams, rhr_decode_frequency, rhr_distribution, rhr_encode,
)
from .heavy_hitter import HeavyHitter, HeavyHitterParams, heavy_hitter_estimate
from .baselines import (
    Separation, SeparationParams, SsParams, SubsetSelection, separation_distribution,
    ss_decode, ss_encode,
)
