"""
Suite bookkeeping, the catalogue and the concurrent runner
"""
import json

import numpy as np
import pytest

from algebra.errors import DimensionCapError, ParameterError
from services.base_service import SPECTRA_COLUMNS, Report, VerificationSuite
from services.registry import SUITES, catalogue, run_suites, selected_suites
from utils.parsing import ConfigError, build_run_config

SMALL = {'setups': [[3, 3]], 'chain': {'L': 1, 'r': 1,
                                       'p_prime': ['0.83+0.27i', '1.12-0.21i', '0.91+0.14i'],
                                       'p': ['1.17-0.12i', '0.74+0.39i', '1.06-0.31i']}}


def small_config(**changes):
    data = dict(SMALL)
    data.update(changes)
    return build_run_config(data)


class MixedSuite(VerificationSuite):
    suite_id = 'mixed'
    anchor = 'bookkeeping'

    def _run_checks(self):
        self.check('float', {}, lambda: 1e-12, 1e-10)
        self.check('dict', {}, lambda: {'a': 1e-12, 'b': 1e-3, 'note': 'text'}, 1e-10)
        self.check('bool', {}, lambda: True, 0.0)
        self.check('raises', {}, self._raise, 1e-10)
        self.check('capped', {}, lambda: self.require_dim(10, cap=5), 1e-10)

    @staticmethod
    def _raise():
        raise ParameterError("pole")


class CappedSuite(VerificationSuite):
    suite_id = 'capped'

    def _run_checks(self):
        self.require_dim(1 << 20, cap=64)


class BrokenSuite(VerificationSuite):
    suite_id = 'broken'

    def _run_checks(self):
        self.check('first', {}, lambda: 0.0, 1e-10)
        raise RuntimeError("lost")


def test_check_statuses():
    suite = MixedSuite(small_config(), np.random.default_rng(0))
    records = {record.check_id: record for record in suite.run()}
    assert records['mixed/float'].status == 'passed'
    assert records['mixed/dict'].status == 'failed'
    assert records['mixed/dict'].residual == 1e-3
    assert records['mixed/bool'].status == 'passed'
    assert records['mixed/raises'].status == 'error'
    assert 'ParameterError' in records['mixed/raises'].error
    assert records['mixed/capped'].status == 'skipped'


def test_dimension_cap_outside_checks_is_a_skip():
    records = CappedSuite(small_config(), np.random.default_rng(0)).run()
    assert [r.status for r in records] == ['skipped']
    assert records[0].parameters == {'cap': 64, 'dim': 1 << 20}


def test_abort_keeps_earlier_records():
    records = BrokenSuite(small_config(), np.random.default_rng(0)).run()
    assert [r.status for r in records] == ['passed', 'error']
    assert records[1].error == 'lost'


def test_report_exit_codes():
    suite = MixedSuite(small_config(), np.random.default_rng(0))
    report = Report(seed=1, suites=['mixed'], records=suite.run())
    assert report.exit_code == 1
    assert report.summary() == {'passed': 2, 'failed': 1, 'error': 1, 'skipped': 1, 'total': 5}

    capped = Report(seed=1, suites=['capped'],
                    records=CappedSuite(small_config(), np.random.default_rng(0)).run())
    assert capped.exit_code == 0
    assert Report(seed=1, suites=[]).exit_code == 0


def test_catalogue_order():
    ids = [entry['id'] for entry in catalogue()]
    assert len(ids) == 12
    assert ids[:3] == ['yb', 'qgroup-relations', 'gauge']
    assert ids[-1] == 'spectra'
    assert 'tauT' in ids
    anchors = {entry['id']: entry['anchor'] for entry in catalogue()}
    # every anchor opens with the formula tags it exercises
    assert all(anchor.startswith('(') for anchor in anchors.values())
    assert anchors['tauT'].startswith('(tauTU)')
    assert '(YBt2)' in anchors['yb']


def test_selected_suites():
    assert selected_suites(small_config()) == list(SUITES)
    assert selected_suites(small_config(suites=['gauge', 'yb'])) == ['yb', 'gauge']
    assert selected_suites(small_config(suites=[])) == []
    with pytest.raises(ConfigError):
        selected_suites(small_config(suites=['nope']))


def test_empty_selection_passes():
    report = run_suites(small_config(suites=[]))
    assert report.records == []
    assert report.exit_code == 0


def test_single_site_suites_pass():
    report = run_suites(small_config(suites=['yb', 'gauge']))
    assert report.records
    assert {r.suite for r in report.records} == {'yb', 'gauge'}
    assert report.exit_code == 0, [r.check_id for r in report.records if not r.passed]


def test_report_is_deterministic():
    config = small_config(suites=['yb', 'qgroup-relations'], seed=5)
    first = run_suites(config).to_json(with_time=False)
    second = run_suites(config).to_json(with_time=False)
    assert first == second
    assert json.loads(first)['seed'] == 5


def test_dimension_cap_skips_large_suites(monkeypatch):
    from config.settings import settings
    monkeypatch.setattr(settings, 'MAX_DIM', 2)
    report = run_suites(small_config(suites=['cpm-weights']))
    statuses = {r.status for r in report.records}
    assert statuses == {'skipped'}
    assert report.exit_code == 0


def test_spectra_artifact():
    report = run_suites(small_config(suites=['spectra']))
    assert report.spectra is not None
    assert list(report.spectra.columns) == SPECTRA_COLUMNS
    assert len(report.spectra) > 0


def test_report_frame():
    suite = MixedSuite(small_config(), np.random.default_rng(0))
    frame = Report(seed=1, suites=['mixed'], records=suite.run()).to_frame()
    assert len(frame) == 5
    assert set(frame['status']) == {'passed', 'failed', 'error', 'skipped'}


def test_dimension_cap_error_carries_sizes():
    error = DimensionCapError(100, 10)
    assert (error.dim, error.cap) == (100, 10)
