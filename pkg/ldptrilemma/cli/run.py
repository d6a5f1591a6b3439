#!/usr/bin/env python
# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
The ``ldp-trilemma`` command line

``ldp-trilemma run [CONFIG] [flags]`` runs one experiment and
``ldp-trilemma sweep [CONFIG] --grid param=v1,v2 ...`` runs a grid of them.
Flags override the values of the ``key=value`` configuration file.
"""
import os
import sys
from argparse import ArgumentParser, RawDescriptionHelpFormatter

os.environ.setdefault('NIPYPE_NO_ET', '1')

from nipype import logging  # noqa: E402

LOGGER = logging.getLogger('nipype.workflow')

#: command-line flags and the configuration keys they set
FLAGS = (
    ('task', 'task'), ('scheme', 'scheme'), ('d', 'd'), ('n', 'n'), ('eps', 'eps'),
    ('b', 'b'), ('source', 'source'), ('reps', 'reps'), ('seed', 'seed'),
    ('out', 'out_file'), ('coin', 'coin'), ('kashin-level', 'kashin_level'),
)


def read_config(fname):
    """
    Read a flat ``key=value`` file (``#`` starts a comment)

    Keys are the flag names; ``out`` maps to ``out_file``.
    """
    config = {}
    with open(fname) as fobj:
        for lineno, line in enumerate(fobj, 1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition('=')
            if not sep:
                raise ValueError('%s:%d: expected key=value' % (fname, lineno))
            key = key.strip().replace('-', '_')
            config['out_file' if key == 'out' else key] = value.strip()
    return config


def get_parser():
    """Build parser object"""
    parser = ArgumentParser(description='Simulate private, communication-constrained '
                                        'estimation protocols',
                            formatter_class=RawDescriptionHelpFormatter)
    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True

    run = subparsers.add_parser('run', help='run one experiment')
    sweep = subparsers.add_parser('sweep', help='run an experiment per grid point')
    for sub in (run, sweep):
        sub.add_argument('config', nargs='?', help='key=value configuration file')
        for flag, key in FLAGS:
            sub.add_argument('--%s' % flag, dest=key, default=None)
        sub.add_argument('--calibrate-kashin', dest='calibrate_kashin', action='store_true',
                         default=None, help='calibrate the Kashin level first')
        sub.add_argument('--timings', action='store_true', default=None,
                         help='record wall-clock encode/decode times')
        sub.add_argument('--nprocs', type=int, default=1,
                         help='parallel processes (repetitions and grid points)')
        sub.add_argument('--work-dir', help='nipype working directory')
        sub.add_argument('-v', '--verbose', action='count', default=0,
                         help='increases log verbosity for each occurence')

    sweep.add_argument('--grid', action='append', default=[], metavar='PARAM=V1,V2',
                       help='parameter values to sweep (repeatable)')
    return parser


def _settings(opts):
    settings = read_config(opts.config) if opts.config else {}
    keys = [key for _, key in FLAGS] + ['calibrate_kashin', 'timings']
    settings.update({key: getattr(opts, key) for key in keys
                     if getattr(opts, key) is not None})
    return settings


def _print_summary(summary):
    for key in sorted(summary):
        print('%s\t%s' % (key, summary[key]))


def main(argv=None):
    """Entry point"""
    opts = get_parser().parse_args(argv)
    if opts.verbose:
        LOGGER.setLevel(max(10, 20 - 10 * opts.verbose))

    from ..interfaces.experiment import EstimateReport, make_config, run_experiment
    from ..workflows.sweep import parse_grid, run_sweep
    try:
        settings = _settings(opts)
        if opts.command == 'run':
            config = make_config(**settings)
            if opts.nprocs > 1:
                out_file = run_sweep(settings, {}, out_file=config.out_file,
                                     nprocs=opts.nprocs, work_dir=opts.work_dir)
                report = EstimateReport.from_csv(out_file)
            else:
                report = run_experiment(config)
                out_file = report.to_csv(config.out_file)
            LOGGER.info('results written to %s', out_file)
            _print_summary(report.summary())
        else:
            grid = parse_grid(opts.grid)
            if not grid:
                raise ValueError('sweep needs at least one --grid parameter')
            out_file = settings.pop('out_file', 'sweep.csv')
            out_file = run_sweep(settings, grid, out_file=out_file, nprocs=opts.nprocs,
                                 work_dir=opts.work_dir)
            print(out_file)
    except Exception as exc:
        LOGGER.error('%s: %s', exc.__class__.__name__, exc)
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
