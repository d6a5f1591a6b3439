# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
""" The ldp-trilemma command line """
import pandas as pd
import pytest

from ...data import get_default_config
from ..run import get_parser, main, read_config


def test_read_config(tmp_path):
    config = read_config(get_default_config())
    assert config['scheme'] == 'rhr'
    assert config['out_file'] == 'ldp_trilemma.csv'
    assert config['kashin_level'] == '4.0'

    bad = tmp_path / 'bad.cfg'
    bad.write_text('# comment\n\nn 100\n')
    with pytest.raises(ValueError):
        read_config(str(bad))


def test_run(tmp_path, capsys):
    out = tmp_path / 'run.csv'
    assert main(['run', '--task', 'frequency', '--scheme', 'heavy_hitter', '--d', '32',
                 '--n', '200', '--reps', '2', '--out', str(out)]) == 0
    frame = pd.read_csv(str(out), dtype={'rep': str})
    assert len(frame) == 3
    assert 'l1\t' in capsys.readouterr().out


def test_flags_override_file(tmp_path, monkeypatch):
    monkeypatch.chdir(str(tmp_path))
    assert main(['run', get_default_config(), '--n', '64', '--timings']) == 0
    frame = pd.read_csv(str(tmp_path / 'ldp_trilemma.csv'), dtype={'rep': str})
    assert (frame['n'] == 64).all()
    assert (frame['scheme'] == 'rhr').all()
    assert frame['encode_ms'].iloc[0] > 0


@pytest.mark.parametrize('argv', [
    ['run', '--task', 'mean', '--scheme', 'rhr'],
    ['run', '--n', '0'],
    ['run', '--source', 'file:/nonexistent/symbols.txt', '--task', 'frequency',
     '--scheme', 'rhr'],
    ['sweep', '--task', 'frequency', '--scheme', 'rhr'],
    ['sweep', '--grid', 'n=oops'],
])
def test_failures_exit_nonzero(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(str(tmp_path))
    assert main(argv) == 1


def test_sweep(tmp_path, capsys):
    out = tmp_path / 'sweep.csv'
    assert main(['sweep', '--task', 'distribution', '--scheme', 'rhr_dist', '--d', '8',
                 '--n', '64', '--grid', 'eps=1,2', '--grid', 'b=1,2', '--out', str(out),
                 '--work-dir', str(tmp_path / 'work')]) == 0
    frame = pd.read_csv(str(out), dtype={'rep': str})
    assert len(frame) == 4 * 2
    assert str(out) in capsys.readouterr().out


def test_parser_requires_command():
    with pytest.raises(SystemExit):
        get_parser().parse_args([])


def test_run_parallel(tmp_path, capsys):
    argv = ['run', '--task', 'frequency', '--scheme', 'rhr', '--d', '16', '--n', '200',
            '--reps', '3', '--seed', '7']
    serial, parallel = tmp_path / 'serial.csv', tmp_path / 'parallel.csv'
    assert main(argv + ['--out', str(serial)]) == 0
    capsys.readouterr()
    assert main(argv + ['--out', str(parallel), '--nprocs', '2',
                        '--work-dir', str(tmp_path / 'work')]) == 0
    assert 'l1\t' in capsys.readouterr().out
    assert parallel.read_text() == serial.read_text()
