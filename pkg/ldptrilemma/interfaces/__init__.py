# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
from .datasets import (
    gen_categorical_data, gen_mean_data, mean_data_theta, source_pmf,
)
from .experiment import (
    COLUMNS, EstimateReport, ExperimentConfig, RunExperiment, RunRepetition, make_config,
    run_experiment,
)
