import json
import os

import pytest

import fareystat.cli
from fareystat.accept import AcceptanceResult
from fareystat.cli import (
    EXIT_OK,
    EXIT_VALIDATION,
    EXIT_OVERFLOW,
    EXIT_CRITERION,
    main,
    run
)
from fareystat.config import OUTPUT_DIR_VARIABLE, RunConfig
from fareystat.report import read_census_csv, read_farey_csv, read_json
from .util import approx, totient


def _run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_farey_count(capsys):
    code, out, _ = _run(capsys, ['farey', 'count', '--n', '1', '--q', '20'])
    assert code == EXIT_OK
    record = json.loads(out)
    assert record['count'] == sum(totient(q) for q in range(1, 21))
    assert record['type'] == 'count'


def test_farey_growth(capsys):
    code, out, _ = _run(capsys, ['farey', 'growth', '--n', '2', '--q', '30',
                                 '--workers', '2'])
    assert code == EXIT_OK
    record = json.loads(out)
    assert record['type'] == 'growth'
    assert abs(record['ratio'] - 1) < 0.2


def test_farey_list(capsys, tmp_path):
    path = str(tmp_path / 'farey.csv')
    code, _, _ = _run(capsys, ['farey', 'list', '--q', '5', '--out', path])
    assert code == EXIT_OK
    q, p = read_farey_csv(path)
    assert q.tolist() == [1, 5, 4, 3, 5, 2, 5, 3, 4, 5]
    assert p[:, 0].tolist() == [0, 1, 1, 1, 2, 1, 3, 2, 3, 4]

    code, out, _ = _run(capsys, ['farey', 'list', '--q', '3'])
    record = json.loads(out)
    assert record['q'] == [1, 3, 2, 3]
    assert record['p'] == [[0], [1], [1], [2]]


def test_missing_class(capsys):
    code, out, err = _run(capsys, ['farey', 'count', '--q', '10',
                                   '--modulus', '2'])
    assert code == EXIT_VALIDATION
    assert out == ''
    record = json.loads(err)
    assert record['field'] == '--class'
    assert record['code'] == EXIT_VALIDATION


def test_dio_bad_ratio(capsys):
    code, _, err = _run(capsys, ['dio', 'est', '--q', '10', '--alpha', '0.5',
                                 '--c', '1'])
    assert code == EXIT_VALIDATION
    assert '--c' in json.loads(err)['field']


def test_dio(capsys):
    code, out, _ = _run(capsys, ['dio', 'kesten', '--q', '100', '--alpha',
                                 '0.5', '--samples', '1000'])
    assert code == EXIT_OK
    record = json.loads(out)
    assert record['type'] == 'dio'
    assert record['samples'] == 1000
    approx(sum(record['pmf'].values()), 1, decimal=12)


def test_stats_deterministic(capsys, tmp_path):
    argv = ['stats', 'p', '--q', '100', '--window', 'box:0,1',
            '--samples', '2000', '--seed', '5', '--batch-size', '500']
    first, second = str(tmp_path / 'a.json'), str(tmp_path / 'b.json')
    assert main(argv + ['--out', first]) == EXIT_OK
    assert main(argv + ['--out', second, '--workers', '2']) == EXIT_OK
    with open(first, 'rb') as f1, open(second, 'rb') as f2:
        assert f1.read() == f2.read()
    record = read_json(first)
    assert record['kind'] == 'P'
    assert record['seed'] == 5


def test_stats_p0_and_equi(capsys):
    code, out, _ = _run(capsys, ['stats', 'p0', '--q', '2',
                                 '--window', '-0.1,0.1'])
    assert code == EXIT_OK
    assert json.loads(out)['pmf'] == {'1': 1.0}

    code, out, _ = _run(capsys, ['stats', 'equi', '--q', '100',
                                 '--window', '0,1', '--domain', '0,0.5'])
    assert code == EXIT_OK
    record = json.loads(out)
    approx(record['expected'], 0.5)
    assert abs(record['observed'] - 0.5) < 0.02


def test_stats_window_too_large(capsys):
    code, _, err = _run(capsys, ['stats', 'p0', '--q', '2',
                                 '--window', '0,5'])
    assert code == 1
    assert json.loads(err)['error'] == 'WindowTooLargeError'


def test_frob(capsys):
    code, out, _ = _run(capsys, ['frob', 'number', '--a', '6,9,20'])
    assert code == EXIT_OK
    assert json.loads(out)['F'] == 43

    code, out, _ = _run(capsys, ['frob', 'identity', '--a', '3,7'])
    assert code == EXIT_OK
    record = json.loads(out)
    approx(record['residual'], 0, decimal=9)
    approx(abs(record['det']), 1)

    code, out, _ = _run(capsys, ['frob', 'lattice', '--a', '3,4,5',
                                 '--h', '0.01'])
    assert code == EXIT_OK
    record = json.loads(out)
    approx(record['covering_radius_upper'] - record['covering_radius'], 0.02)
    assert len(record['basis']) == 2


def test_frob_not_primitive(capsys):
    code, _, err = _run(capsys, ['frob', 'number', '--a', '4,6'])
    assert code == EXIT_VALIDATION
    assert json.loads(err)['field'] == '--a'


def test_frob_census(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_VARIABLE, str(tmp_path))
    code, _, _ = _run(capsys, ['frob', 'census', '--n', '2', '--t', '8',
                               '--modulus', '2', '--class', '1,1,1',
                               '--rgrid', '0:1:0.5', '--out', 'census.csv'])
    assert code == EXIT_OK
    rows = read_census_csv(os.path.join(str(tmp_path), 'census.csv'))
    assert [row['R'] for row in rows] == [0, 0.5, 1]

    code, _, err = _run(capsys, ['frob', 'census', '--n', '1', '--t', '8'])
    assert code == EXIT_VALIDATION
    assert '--n' in json.loads(err)['field']


def test_csv_unsupported(capsys, tmp_path):
    code, _, err = _run(capsys, ['frob', 'number', '--a', '3,7', '--out',
                                 str(tmp_path / 'f.csv')])
    assert code == EXIT_VALIDATION
    assert json.loads(err)['field'] == '--format'


def test_congr(capsys):
    code, out, _ = _run(capsys, ['congr', 'astar', '--n', '1',
                                 '--modulus', '2', '--class', '0,1'])
    assert code == EXIT_OK
    assert json.loads(out)['density'] == '1/3'
    code, out, _ = _run(capsys, ['congr', 'brute', '--n', '1',
                                 '--modulus', '2', '--class', '0,1'])
    assert json.loads(out)['astar'] == 2


def test_overflow(capsys):
    code, _, err = _run(capsys, ['farey', 'count', '--q', str(2 ** 62),
                                 '--modulus', '4', '--class', '0,1'])
    assert code == EXIT_OVERFLOW
    assert json.loads(err)['error'] == 'NumericOverflowError'


def test_argparse_errors():
    with pytest.raises(SystemExit):
        main(['farey', 'count'])
    with pytest.raises(SystemExit):
        main(['unknown'])


def test_accept_exit_codes(capsys, monkeypatch):
    def passing(suite, workers=1):
        return [AcceptanceResult('1a', 'check', 1.0, 1.0, 0.1)]

    def failing(suite, workers=1):
        return [AcceptanceResult('1a', 'check', 2.0, 1.0, 0.1)]

    monkeypatch.setattr(fareystat.cli, 'accept', passing)
    assert run(RunConfig('accept', 'fast')) == EXIT_OK
    record = json.loads(capsys.readouterr().out)
    assert record['suite'] == 'fast'
    assert record['results'][0]['passed']

    monkeypatch.setattr(fareystat.cli, 'accept', failing)
    assert run(RunConfig('accept', 'fast')) == EXIT_CRITERION
