# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
import os

os.environ.setdefault('NIPYPE_NO_ET', '1')


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: scaling-law reproductions at n = 1e5 (minutes)')
