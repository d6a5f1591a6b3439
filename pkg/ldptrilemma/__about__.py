# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
ldp-trilemma
"""
import os.path as op
from datetime import date

PACKAGE_NAME = 'ldptrilemma'

with open(op.join(op.dirname(op.abspath(__file__)), 'VERSION')) as vfile:
    __version__ = vfile.readline().strip()

__author__ = 'The ldp-trilemma developers'
__email__ = 'ldp-trilemma@googlegroups.com'
__maintainer__ = 'The ldp-trilemma developers'
__copyright__ = 'Copyright %d, %s' % (date.today().year, __author__)
__credits__ = __author__
__license__ = 'MIT License'
__status__ = '3 - Alpha'
__description__ = ('Private and communication-constrained distributed '
                   'estimation in python')
__longdesc__ = ('ldp-trilemma simulates locally differentially private, '
                'communication-constrained distributed estimation. It implements '
                'Subsampled and Quantized Kashin\'s Response (SQKR) for mean '
                'estimation, Recursive Hadamard Response (RHR) for frequency and '
                'distribution estimation, a heavy-hitter scheme with l-infinity '
                'guarantees, the subset-selection and separation baselines, '
                'exact-expectation oracles and an experiment harness that writes '
                'one CSV row per repetition.')

__url__ = 'http://{}.readthedocs.org/'.format(PACKAGE_NAME)
__download__ = ('https://github.com/ldp-trilemma/{}/archive/'
                '{}.tar.gz').format(PACKAGE_NAME, __version__)


CLASSIFIERS = [
    'Development Status :: %s' % __status__,
    'Intended Audience :: Science/Research',
    'Topic :: Scientific/Engineering :: Mathematics',
    'Topic :: Security',
    'License :: OSI Approved :: %s' % __license__,
    'Programming Language :: Python :: 3.8',
    'Programming Language :: Python :: 3.9',
    'Programming Language :: Python :: 3.10',
    'Programming Language :: Python :: 3.11',
]

SETUP_REQUIRES = []

REQUIRES = [
    'numpy>=1.17.0',
    'scikit-learn>=0.22.0',
    'scipy',
    'six',
    'nipype>=1.2.0',
    'pandas>=1.0',
]

LINKS_REQUIRES = [
]


TESTS_REQUIRES = [
    'pytest',
    'codecov',
    'pytest-xdist',
]

EXTRA_REQUIRES = {
    'doc': ['sphinx>=1.5', 'sphinx_rtd_theme>=0.2.4', 'sphinx-argparse'],
    'tests': TESTS_REQUIRES,
    'notebooks': ['ipython', 'jupyter'],
}

# Enable a handle to install all extra dependencies at once
EXTRA_REQUIRES['all'] = sorted({val for vals in EXTRA_REQUIRES.values() for val in vals})
