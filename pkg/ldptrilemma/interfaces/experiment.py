# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Experiment runner
~~~~~~~~~~~~~~~~~

One experiment runs ``reps`` independent repetitions of a scheme: generate
the client data, encode every client, push the batch through the
budget-enforcing :class:`~ldptrilemma.core.bits.Channel`, check the
shared-randomness accounting and the LDP certificate, decode, and score the
estimate against the ground truth. Results are one CSV row per repetition
plus a summary row.

"""
import os
import time

import numpy as np
import pandas as pd
from nipype import logging
from nipype.interfaces.base import (
    BaseInterfaceInputSpec, File, SimpleInterface, TraitedSpec, traits,
)
from scipy import stats

from ..core.base import AccountingError
from ..core.bits import Channel
from ..core.frames import (
    DEFAULT_KASHIN_LEVEL, KashinDecompositionError, build_frame, calibrate_kashin_level,
)
from ..core.privacy import ldp_certificate
from ..protocols import (
    RHR, SQKR, HeavyHitter, RHRDistribution, Separation, StatisticalSQKR, SubsetSelection,
)
from .datasets import (
    empirical_frequency, gen_categorical_data, gen_mean_data, mean_data_theta, source_pmf,
)

LOGGER = logging.getLogger('nipype.interface')
UTILS_LOGGER = logging.getLogger('nipype.utils')

#: fixed column order of the result files
COLUMNS = ['scheme', 'task', 'd', 'n', 'eps', 'b', 'rep', 'l1', 'l2sq', 'linf',
           'bits_per_client', 'shared_bits', 'encode_ms', 'decode_ms']
ERROR_METRICS = ('l1', 'l2sq', 'linf')
#: schemes admissible for every task
TASK_SCHEMES = {
    'mean': ('sqkr', ),
    'statistical_mean': ('sqkr_stat', 'sqkr'),
    'frequency': ('rhr', 'heavy_hitter', 'ss'),
    'distribution': ('rhr_dist', 'rhr', 'ss', 'separation'),
    'heavy_hitter': ('heavy_hitter', 'rhr'),
}
#: frame redraws allowed when a Kashin decomposition fails
MAX_FRAME_REDRAWS = 3
#: largest RR width whose transition matrix is certified
CERTIFIED_WIDTH = 10


def _to_bool(value):
    if isinstance(value, bool):
        return value
    lowered = str(value).strip().lower()
    if lowered in ('1', 'true', 'yes', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError('cannot interpret "%s" as a boolean' % value)


#: converters from the text of config files and CLI flags
CONFIG_TYPES = {
    'task': str, 'scheme': str, 'source': str, 'out_file': str, 'coin': str,
    'd': int, 'n': int, 'b': int, 'reps': int, 'seed': int,
    'eps': float, 'kashin_level': float,
    'calibrate_kashin': _to_bool, 'timings': _to_bool,
}


class RunExperimentInputSpec(BaseInterfaceInputSpec):
    task = traits.Enum('mean', 'statistical_mean', 'frequency', 'distribution',
                       'heavy_hitter', usedefault=True, desc='estimation task')
    scheme = traits.Enum('sqkr', 'sqkr_stat', 'rhr', 'rhr_dist', 'heavy_hitter', 'ss',
                         'separation', usedefault=True, desc='protocol')
    d = traits.Range(low=1, value=16, usedefault=True, desc='dimension or alphabet size')
    n = traits.Range(low=1, value=1000, usedefault=True, desc='number of clients')
    eps = traits.Range(low=0.0, value=1.0, exclude_low=True, usedefault=True,
                       desc='privacy level (nats)')
    b = traits.Range(low=1, value=1, usedefault=True, desc='bits per client')
    source = traits.Str('geometric(0.8)', usedefault=True,
                        desc='categorical source: geometric(lambda), uniform or file:PATH')
    reps = traits.Range(low=1, value=1, usedefault=True, desc='repetitions')
    seed = traits.Range(low=0, value=0, usedefault=True, desc='master seed')
    out_file = File('ldp_trilemma.csv', usedefault=True, desc='output CSV')
    coin = traits.Enum('public', 'private', usedefault=True,
                       desc='SQKR sampling: shared (public) or transmitted (private)')
    kashin_level = traits.Range(low=1.0, value=DEFAULT_KASHIN_LEVEL, exclude_low=True,
                                usedefault=True, desc='Kashin level K0')
    calibrate_kashin = traits.Bool(False, usedefault=True,
                                   desc='calibrate K0 on random unit vectors first')
    timings = traits.Bool(False, usedefault=True,
                          desc='record wall-clock times (CSV no longer byte-reproducible)')


#: the experiment configuration is the traits spec of the interface
ExperimentConfig = RunExperimentInputSpec


class RunExperimentOutputSpec(TraitedSpec):
    out_file = File(exists=True, desc='per-repetition results and a summary row')
    summary = traits.Dict(desc='mean errors, standard errors and bit counts')


def check_config(config):
    """Raise ``ValueError`` if the scheme cannot run the task"""
    if config.scheme not in TASK_SCHEMES[config.task]:
        raise ValueError('scheme "%s" cannot run the "%s" task (choose from %s)' % (
            config.scheme, config.task, ', '.join(TASK_SCHEMES[config.task])))
    return config


def make_config(**kwargs):
    """
    Build a validated :class:`ExperimentConfig`

    String values (from config files or flags) are converted first; traits
    validation rejects out-of-range values.

    >>> make_config(task='frequency', scheme='rhr', d='8').d
    8

    """
    config = ExperimentConfig()
    known = set(config.copyable_trait_names())
    for key, value in kwargs.items():
        if key not in known:
            raise ValueError('unknown configuration key "%s"' % key)
        if isinstance(value, str) and key in CONFIG_TYPES:
            value = CONFIG_TYPES[key](value)
        setattr(config, key, value)
    return check_config(config)


def config_fields(config):
    """The configuration as a plain dictionary"""
    return {key: getattr(config, key) for key in CONFIG_TYPES}


def estimate_errors(estimate, truth):
    """:math:`\\ell_1`, :math:`\\ell_2^2` and :math:`\\ell_\\infty` errors"""
    diff = np.asarray(estimate, dtype=float) - np.asarray(truth, dtype=float)
    return {'l1': float(np.abs(diff).sum()),
            'l2sq': float(np.dot(diff, diff)),
            'linf': float(np.abs(diff).max())}


class EstimateReport(object):
    """
    Per-repetition errors and bit counts of one experiment

    Attributes
    ----------

    rows : list of dict
        one record per repetition, keyed by :data:`COLUMNS`
    estimates : list of numpy.ndarray
        the decoded estimates

    """

    def __init__(self, rows, estimates=None):
        self.rows = list(rows)
        self.estimates = [] if estimates is None else list(estimates)

    def __len__(self):
        return len(self.rows)

    @property
    def frame(self):
        return pd.DataFrame(self.rows, columns=COLUMNS)

    def summary(self):
        """Means and standard errors of the errors; worst-case bit counts"""
        frame = self.frame
        out = {}
        for metric in ERROR_METRICS:
            values = frame[metric].to_numpy(dtype=float)
            out[metric] = float(values.mean())
            out[metric + '_se'] = float(stats.sem(values)) if values.size > 1 else 0.0
        out['bits_per_client'] = int(frame['bits_per_client'].max())
        out['shared_bits'] = int(frame['shared_bits'].max())
        out['encode_ms'] = float(frame['encode_ms'].mean())
        out['decode_ms'] = float(frame['decode_ms'].mean())
        return out

    def to_frame(self):
        """Repetition rows followed by the summary row (``rep == 'mean'``)"""
        frame = self.frame
        summary = dict(self.rows[0])
        summary.update(self.summary())
        summary['rep'] = 'mean'
        return pd.concat([frame, pd.DataFrame([summary], columns=COLUMNS)], ignore_index=True)

    def to_csv(self, fname):
        self.to_frame().to_csv(fname, index=False, float_format='%.10g')
        return os.path.abspath(fname)

    @classmethod
    def from_csv(cls, fname):
        """Read back the repetition rows of a file written by :meth:`to_csv`"""
        frame = pd.read_csv(fname, dtype={'rep': str})
        frame = frame[frame['rep'] != 'mean'].astype({'rep': int})
        return cls(frame.to_dict('records'))


def generate_data(config, seed):
    """Client data and ground truth of one repetition"""
    if config.task in ('mean', 'statistical_mean'):
        statistical = config.task == 'statistical_mean'
        X = gen_mean_data(config.d, config.n, seed, iid=statistical)
        truth = mean_data_theta(config.d) if statistical else X.mean(axis=0)
        return X, truth

    x = gen_categorical_data(config.d, config.n, config.source, seed)
    truth = None
    if config.task == 'distribution':
        truth = source_pmf(config.d, config.source)
    if truth is None:
        truth = empirical_frequency(x, config.d)
    return x, truth


def make_protocol(config, shared_seed, client_seed, kashin_level=None, frame_seed=None):
    """Instantiate the estimator of ``config.scheme``"""
    d, eps, b = config.d, config.eps, config.b
    kashin_level = config.kashin_level if kashin_level is None else kashin_level
    frame_seed = config.seed if frame_seed is None else frame_seed
    shared_seed, client_seed = int(shared_seed), int(client_seed)
    if config.scheme == 'sqkr':
        return SQKR(d, eps=eps, b=b, coin=config.coin, kashin_level=kashin_level,
                    frame_seed=frame_seed, shared_seed=shared_seed, random_state=client_seed)
    if config.scheme == 'sqkr_stat':
        return StatisticalSQKR(d, eps=eps, b=b, kashin_level=kashin_level,
                               frame_seed=frame_seed, random_state=client_seed)
    if config.scheme == 'rhr':
        return RHR(d, eps=eps, b=b, shared_seed=shared_seed, random_state=client_seed)
    if config.scheme == 'rhr_dist':
        return RHRDistribution(d, eps=eps, b=b, random_state=client_seed)
    if config.scheme == 'heavy_hitter':
        return HeavyHitter(d, eps=eps, b=b, shared_seed=shared_seed, random_state=client_seed)
    if config.scheme == 'ss':
        return SubsetSelection(d, eps=eps, random_state=client_seed)
    if config.scheme == 'separation':
        return Separation(d, eps=eps, b=b, random_state=client_seed)
    raise ValueError('unknown scheme "%s"' % config.scheme)


def check_accounting(messages, params):
    """Measured shared-randomness bits must equal the protocol formula"""
    measured = np.asarray(messages.shared_bits_per_client)
    expected = params.shared_bits_per_client
    if np.any(measured != expected):
        raise AccountingError('clients consumed %s shared bits, the formula gives %d' % (
            np.unique(measured).tolist(), expected))
    return expected


def certify(params):
    """Certify every randomized-response channel the protocol uses"""
    eps = getattr(params, 'eps_prime', params.eps)
    return [ldp_certificate(eps, width) for width in params.rr_widths
            if width <= CERTIFIED_WIDTH]


def _encode(config, data, shared_seed, client_seed, kashin_level):
    frame_seed = config.seed
    for attempt in range(MAX_FRAME_REDRAWS + 1):
        protocol = make_protocol(config, shared_seed, client_seed, kashin_level, frame_seed)
        try:
            return protocol, protocol.encode(data)
        except KashinDecompositionError:
            if attempt == MAX_FRAME_REDRAWS:
                raise
            frame_seed += 1
            UTILS_LOGGER.warning('Kashin decomposition failed; redrawing the frame with '
                                 'seed %d', frame_seed)


def run_repetition(config, rep, kashin_level=None):
    """
    Run repetition ``rep`` of ``config``

    Seeds for the data, the shared streams and the clients' private
    randomness derive from ``(seed, rep)``.
    """
    data_seed, shared_seed, client_seed = np.random.SeedSequence(
        [config.seed, rep]).generate_state(3)
    data, truth = generate_data(config, data_seed)

    start = time.perf_counter()
    protocol, messages = _encode(config, data, shared_seed, client_seed, kashin_level)
    encode_ms = 1e3 * (time.perf_counter() - start)

    params = protocol.params_
    Channel(params.budget_bits).transmit(messages)
    shared_bits = check_accounting(messages, params)
    certify(params)

    start = time.perf_counter()
    estimate = np.asarray(protocol.decode(messages), dtype=float)
    decode_ms = 1e3 * (time.perf_counter() - start)

    row = dict(scheme=config.scheme, task=config.task, d=config.d, n=config.n,
               eps=config.eps, b=config.b, rep=rep,
               bits_per_client=int(np.max(messages.bits_per_client)),
               shared_bits=int(shared_bits),
               encode_ms=encode_ms if config.timings else 0.0,
               decode_ms=decode_ms if config.timings else 0.0)
    row.update(estimate_errors(estimate, truth))
    LOGGER.info('%s rep %d: l1=%.4g l2sq=%.4g linf=%.4g, %d bits/client, %d shared bits',
                config.scheme, rep, row['l1'], row['l2sq'], row['linf'],
                row['bits_per_client'], row['shared_bits'])
    return row, estimate


def resolve_kashin_level(config):
    """The configured ``K0``, or a calibrated one when ``calibrate_kashin`` is set"""
    if not (config.calibrate_kashin and config.scheme in ('sqkr', 'sqkr_stat')):
        return config.kashin_level
    kashin_level = calibrate_kashin_level(build_frame(config.d, seed=config.seed),
                                          seed=config.seed)
    LOGGER.info('calibrated Kashin level K0=%.3f for d=%d', kashin_level, config.d)
    return kashin_level


def run_experiment(config):
    """
    Run every repetition of ``config``

    Returns
    -------

    report : EstimateReport

    """
    check_config(config)
    kashin_level = resolve_kashin_level(config)
    rows, estimates = [], []
    for rep in range(config.reps):
        row, estimate = run_repetition(config, rep, kashin_level)
        rows.append(row)
        estimates.append(estimate)
    return EstimateReport(rows, estimates)


class RunExperiment(SimpleInterface):
    """
    Run an experiment and write its CSV

    A relative ``out_file`` is resolved against the working directory of the
    interface (the node directory when run inside a workflow).
    """
    input_spec = RunExperimentInputSpec
    output_spec = RunExperimentOutputSpec

    def _run_interface(self, runtime):
        report = run_experiment(self.inputs)
        out_file = self.inputs.out_file
        if not os.path.isabs(out_file):
            out_file = os.path.join(runtime.cwd, out_file)
        self._results['out_file'] = report.to_csv(out_file)
        self._results['summary'] = report.summary()
        return runtime


class RunRepetitionInputSpec(RunExperimentInputSpec):
    rep = traits.Range(low=0, mandatory=True, desc='repetition index')


class RunRepetitionOutputSpec(TraitedSpec):
    row = traits.Dict(desc='errors and bit counts of the repetition')


class RunRepetition(SimpleInterface):
    """
    Run a single repetition of an experiment

    Seeds derive from ``(seed, rep)`` exactly as in :func:`run_experiment`,
    so repetitions may run in any order or in parallel.
    """
    input_spec = RunRepetitionInputSpec
    output_spec = RunRepetitionOutputSpec

    def _run_interface(self, runtime):
        config = check_config(self.inputs)
        row, _ = run_repetition(config, self.inputs.rep, resolve_kashin_level(config))
        self._results['row'] = row
        return runtime
