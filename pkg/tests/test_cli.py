"""
Command-line driver
"""
import csv
import json

import pytest

from app import EXIT_CONFIG, _setups, _tolerances, build_parser, main
from services.base_service import SPECTRA_COLUMNS
from utils.parsing import ConfigError


def test_list_json(capsys):
    assert main(['list', '--json']) == 0
    entries = json.loads(capsys.readouterr().out)
    assert len(entries) == 12
    assert 'tauT' in [entry['id'] for entry in entries]


def test_run_list_flag(capsys):
    assert main(['run', '--list']) == 0
    assert 'cpm-duality' in capsys.readouterr().out


def test_run_single_suite(capsys):
    assert main(['run', '--suite', 'yb', '--N', '3', '--n', '3', '--L', '1', '--seed', '3']) == 0
    report = json.loads(capsys.readouterr().out)
    assert report['seed'] == 3
    assert report['suites'] == ['yb']
    assert report['summary']['failed'] == 0
    assert all(record['suite'] == 'yb' for record in report['records'])


def test_default_run_passes(capsys):
    # every suite over the default setups and chain
    assert main(['run', '--seed', '20240601']) == 0
    report = json.loads(capsys.readouterr().out)
    assert len(report['suites']) == 12
    assert report['summary']['failed'] == 0
    assert report['summary']['error'] == 0
    assert report['summary']['passed'] > 0


def test_empty_selection(tmp_path, capsys):
    config = tmp_path / 'run.json'
    config.write_text(json.dumps({'suites': []}))
    assert main(['run', '--config', str(config)]) == 0
    assert json.loads(capsys.readouterr().out)['records'] == []


@pytest.mark.parametrize('argv', [
    ['run', '--suite', 'nope'],
    ['run', '--N', '3', '--n', '4'],
    ['run', '--n', '4'],
    ['run', '--L', '0'],
    ['run', '--tol', 'identity=-1'],
    ['run', '--tol', 'loose'],
    ['run', '--family', 'ising'],
    ['run', '--t', 'x+yi'],
])
def test_configuration_errors(argv):
    assert main(argv) == EXIT_CONFIG


def test_malformed_config_file(tmp_path):
    config = tmp_path / 'run.json'
    config.write_text('{"chain": ')
    assert main(['run', '--config', str(config)]) == EXIT_CONFIG


def test_spectra_csv_and_json_files(tmp_path):
    out_json = tmp_path / 'report.json'
    out_csv = tmp_path / 'spectra.csv'
    code = main(['run', '--suite', 'spectra', '--N', '3', '--L', '1', '--family', 't2',
                 '--out-json', str(out_json), '--out-csv', str(out_csv)])
    assert code == 0
    assert json.loads(out_json.read_text())['suites'] == ['spectra']
    with open(out_csv) as f:
        rows = list(csv.reader(f))
    assert rows[0] == SPECTRA_COLUMNS
    # one eigenvalue per basis vector of C^3
    assert len(rows) == 1 + 3


def test_setup_flags():
    parser = build_parser()
    assert _setups(parser.parse_args(['run'])) is None
    assert _setups(parser.parse_args(['run', '--N', '3'])) == ((3, 3, 1),)
    assert _setups(parser.parse_args(['run', '--N', '2'])) == ((2, 4, 1), (2, 4, -1))
    assert _setups(parser.parse_args(['run', '--N', '2', '--q-sign', '-1'])) == ((2, 4, -1),)
    with pytest.raises(ConfigError):
        _setups(parser.parse_args(['run', '--q-sign', '1']))


def test_tolerance_overrides():
    base = {'identity': 1e-10, 'eigen': 1e-8}
    assert _tolerances(base, ['1e-9', 'eigen=1e-6']) == {'identity': 1e-9, 'eigen': 1e-6}
    assert base['identity'] == 1e-10
