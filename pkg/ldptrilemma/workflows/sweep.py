# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Parameter sweeps
++++++++++++++++

Defines the workflow that runs one experiment per point of a parameter grid
and merges the per-point CSV files.

"""
import os

import nipype.pipeline.engine as pe             # pipeline engine
from nipype import logging
from nipype.interfaces import utility as niu    # utility

from ..interfaces.experiment import CONFIG_TYPES, RunRepetition, config_fields, make_config

LOGGER = logging.getLogger('nipype.workflow')
#: settings fixed for a whole sweep
UNSWEPT = ('out_file', 'reps')


def parse_grid(specs):
    """
    Parse ``param=v1,v2,...`` strings into ``{param: [values]}``

    >>> parse_grid(['n=100,200', 'b=1'])
    {'n': [100, 200], 'b': [1]}

    """
    grid = {}
    for spec in specs:
        key, sep, values = spec.partition('=')
        key = key.strip().replace('-', '_')
        if key == 'out':
            key = 'out_file'
        if not sep or not values.strip():
            raise ValueError('grid entries look like param=v1,v2 (got "%s")' % spec)
        if key not in CONFIG_TYPES or key in UNSWEPT:
            raise ValueError('"%s" cannot be swept' % key)
        grid[key] = [CONFIG_TYPES[key](value.strip()) for value in values.split(',')]
    return grid


def init_sweep_wf(config, grid, out_file='sweep.csv', name='ldp_sweep'):
    """
    A nipype workflow running every repetition of an experiment as its own
    node, over the cartesian product of ``grid``.

    Repetitions of a grid point are joined into one experiment file (rows and
    summary row, as written by :func:`~ldptrilemma.interfaces.run_experiment`)
    and the experiment files of all grid points are concatenated. With an
    empty ``grid`` the workflow runs the single experiment of ``config``.

    .. workflow::
        :graph2use: orig
        :simple_form: yes
        from ldptrilemma.workflows.sweep import init_sweep_wf
        wf = init_sweep_wf({'task': 'frequency', 'scheme': 'rhr', 'reps': 4},
                           {'n': [1000, 4000]})

    **Parameters**
        config
            experiment settings shared by every grid point
        grid
            ``{parameter: [values]}``

    **Outputs**
        out_file
            all repetition and summary rows of every grid point

    """
    settings = config_fields(make_config(**dict(config, out_file='experiment.csv')))
    for key in grid:
        if key not in CONFIG_TYPES or key in UNSWEPT:
            raise ValueError('"%s" cannot be swept' % key)
    for point in _grid_points(grid):
        make_config(**dict(settings, **point))  # fail before any node runs

    workflow = pe.Workflow(name=name)
    outputnode = pe.Node(niu.IdentityInterface(fields=['out_file']), name='outputnode')

    repnode = pe.Node(niu.IdentityInterface(fields=['rep']), name='repetitions')
    repnode.iterables = [('rep', list(range(settings['reps'])))]
    run = pe.Node(RunRepetition(**settings), name='run_repetition')
    report = pe.JoinNode(niu.Function(function=_write_report,
                                      input_names=['rows', 'out_file'],
                                      output_names=['out_file']),
                         joinsource='repetitions', joinfield=['rows'], name='report')

    workflow.connect([
        (repnode, run, [('rep', 'rep')]),
        (run, report, [('row', 'rows')]),
    ])
    if not grid:
        report.inputs.out_file = os.path.abspath(out_file)
        workflow.connect(report, 'out_file', outputnode, 'out_file')
        return workflow

    report.inputs.out_file = 'experiment.csv'
    inputnode = pe.Node(niu.IdentityInterface(fields=sorted(grid)), name='inputnode')
    inputnode.iterables = [(key, values) for key, values in sorted(grid.items())]
    merge = pe.JoinNode(niu.Function(function=_merge_csvs,
                                     input_names=['in_files', 'out_file'],
                                     output_names=['out_file']),
                        joinsource='inputnode', joinfield=['in_files'], name='merge')
    merge.inputs.out_file = os.path.abspath(out_file)

    workflow.connect([
        (inputnode, run, [(key, key) for key in sorted(grid)]),
        (report, merge, [('out_file', 'in_files')]),
        (merge, outputnode, [('out_file', 'out_file')]),
    ])
    return workflow


def run_sweep(config, grid, out_file='sweep.csv', nprocs=1, work_dir=None):
    """
    Build and run the sweep

    ``nprocs > 1`` runs repetitions and grid points in parallel (MultiProc).
    """
    workflow = init_sweep_wf(config, grid, out_file=out_file)
    if work_dir:
        workflow.base_dir = os.path.abspath(work_dir)
    points = len(_grid_points(grid))
    LOGGER.info('sweeping %d grid point(s) with %d process(es)', points, nprocs)
    if nprocs > 1:
        workflow.run(plugin='MultiProc', plugin_args={'n_procs': nprocs})
    else:
        workflow.run()
    return os.path.abspath(out_file)


def _grid_points(grid):
    points = [{}]
    for key, values in sorted(grid.items()):
        points = [dict(point, **{key: value}) for point in points for value in values]
    return points


def _write_report(rows, out_file):
    import os
    from ldptrilemma.interfaces.experiment import EstimateReport

    if isinstance(rows, dict):
        rows = [rows]
    rows = sorted(rows, key=lambda row: row['rep'])
    return EstimateReport(rows).to_csv(os.path.abspath(out_file))


def _merge_csvs(in_files, out_file):
    import os
    import pandas as pd

    if isinstance(in_files, str):
        in_files = [in_files]
    merged = pd.concat([pd.read_csv(fname, dtype={'rep': str}) for fname in in_files],
                       ignore_index=True)
    merged.to_csv(out_file, index=False, float_format='%.10g')
    return os.path.abspath(out_file)
