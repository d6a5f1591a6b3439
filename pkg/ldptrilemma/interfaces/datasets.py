# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Synthetic client data
---------------------

Mean estimation uses a two-component Gaussian mixture normalized to the unit
sphere: half the clients around ``1 * ones(d)`` and half around
``10 * ones(d)``. Categorical data come from a truncated geometric law, the
uniform law or a file of symbols.
"""
import os
import re
from functools import lru_cache

import numpy as np
from nipype import logging

LOGGER = logging.getLogger('nipype.interface')

#: means of the two mixture components (times the all-ones vector)
MIXTURE_MEANS = (1.0, 10.0)
DEFAULT_GEOMETRIC = 0.8


def gen_mean_data(d, n, seed, iid=False):
    """
    Unit-norm client vectors from the normalized Gaussian mixture

    Parameters
    ----------

    d : int
        dimension
    n : int
        number of clients; with odd ``n`` the extra client is drawn around
        the larger mean
    seed : int
        data seed
    iid : bool
        draw the mixture component of every client independently (i.i.d.
        samples of the mixture) instead of splitting the clients in halves

    Returns
    -------

    X : numpy.ndarray, shape (n, d)

    """
    d, n = int(d), int(n)
    if d < 1 or n < 1:
        raise ValueError('d and n must be positive')
    rng = np.random.default_rng(seed)
    if iid:
        component = rng.integers(0, 2, size=n)
    else:
        component = np.r_[np.zeros(n // 2, dtype=int), np.ones(n - n // 2, dtype=int)]
    means = np.asarray(MIXTURE_MEANS)[component]
    Z = rng.standard_normal((n, d)) + means[:, None]
    return Z / np.linalg.norm(Z, axis=1, keepdims=True)


@lru_cache(maxsize=32)
def _theta_along_ones(d, n_samples, seed):
    rng = np.random.default_rng(seed)
    proj = []
    for mean in MIXTURE_MEANS:
        t = mean * np.sqrt(d) + rng.standard_normal(n_samples)
        rest = rng.chisquare(d - 1, size=n_samples) if d > 1 else np.zeros(n_samples)
        proj.append(np.mean(t / np.sqrt(t ** 2 + rest)))
    return float(np.mean(proj))


def mean_data_theta(d, n_samples=10 ** 6, seed=0):
    """
    :math:`\\theta(P) = E[X]` of the normalized mixture

    Both components are rotation-invariant around the all-ones axis, so the
    mean lies on that axis and its length is a one-dimensional Monte Carlo
    average of the normalized projection.
    """
    d = int(d)
    return np.full(d, _theta_along_ones(d, int(n_samples), int(seed)) / np.sqrt(d))


def parse_source(source):
    """
    Split a source string into ``(kind, argument)``

    >>> parse_source('geometric(0.5)')
    ('geometric', 0.5)
    >>> parse_source('uniform')
    ('uniform', None)

    """
    source = str(source).strip()
    if source.startswith('file:'):
        return 'file', source[len('file:'):]
    match = re.match(r'^geometric(?:\((?P<lam>[^)]*)\))?$', source)
    if match:
        lam = float(match.group('lam')) if match.group('lam') else DEFAULT_GEOMETRIC
        if not 0 <= lam < 1:
            raise ValueError('geometric parameter must lie in [0, 1), got %g' % lam)
        return 'geometric', lam
    if source == 'uniform':
        return 'uniform', None
    raise ValueError('unknown data source "%s"' % source)


def source_pmf(d, source):
    """Distribution of a generative source (``None`` for file sources)"""
    kind, arg = parse_source(source)
    if kind == 'file':
        return None
    if kind == 'uniform':
        return np.full(int(d), 1.0 / d)
    weights = np.power(arg, np.arange(int(d), dtype=float))
    return weights / weights.sum()


def read_symbols(fname, d):
    """Load whitespace-separated symbols and check them against ``[0, d)``"""
    if not os.path.isfile(fname):
        raise ValueError('symbol file "%s" does not exist' % fname)
    symbols = np.loadtxt(fname, dtype=np.int64, comments='#', ndmin=1)
    if not symbols.size:
        raise ValueError('symbol file "%s" is empty' % fname)
    if np.any(symbols < 0) or np.any(symbols >= d):
        raise ValueError('symbol file "%s" has symbols outside [0, %d)' % (fname, d))
    return symbols


def gen_categorical_data(d, n, source, seed):
    """
    ``n`` symbols in ``[0, d)``

    ``source`` is ``geometric(lambda)``, ``uniform`` or ``file:PATH``. File
    symbols are used as given and cycled when ``n`` exceeds their count.
    """
    d, n = int(d), int(n)
    kind, arg = parse_source(source)
    if kind == 'file':
        symbols = read_symbols(arg, d)
        if symbols.size < n:
            LOGGER.info('cycling %d file symbols over %d clients', symbols.size, n)
        return np.resize(symbols, n)
    rng = np.random.default_rng(seed)
    return rng.choice(d, size=n, p=source_pmf(d, source))


def empirical_frequency(x, d):
    """Realized histogram :math:`D_{X^n}`"""
    return np.bincount(np.asarray(x, dtype=np.int64), minlength=int(d)) / float(np.size(x))
