# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""Configuration files and symbol inputs shipped with the package"""


def get_data(fname):
    """Absolute path of a file in ``ldptrilemma/data``"""
    from pkg_resources import resource_filename as pkgrf
    return pkgrf('ldptrilemma', 'data/%s' % fname)


def get_default_config():
    return get_data('default.cfg')


def get_worst_case_symbols():
    """Symbols for ``source = file:PATH`` runs over ``d = 16``"""
    return get_data('worst_case_symbols.txt')
