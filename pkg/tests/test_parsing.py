"""
Run-configuration loading
"""
import json

import pytest

from config.settings import settings
from utils.parsing import (
    ConfigError,
    build_run_config,
    format_complex,
    load_run_config,
    normalize_family,
    parse_complex,
)


@pytest.mark.parametrize('text, expected', [
    ('1+2i', 1 + 2j),
    ('-2i', -2j),
    ('0.5', 0.5),
    (' 1.5 - 0.25i ', 1.5 - 0.25j),
    ('3j', 3j),
    ([0.1, -0.2], 0.1 - 0.2j),
    (2, 2),
])
def test_parse_complex(text, expected):
    assert parse_complex(text) == expected


@pytest.mark.parametrize('value', ['abc', '1+2k', True, None, [1, 2, 3]])
def test_parse_complex_rejects(value):
    with pytest.raises(ConfigError):
        parse_complex(value)


def test_format_complex():
    assert format_complex(1 - 0.5j) == '1-0.5i'
    assert parse_complex(format_complex(0.3 + 0.1j)) == 0.3 + 0.1j


def test_normalize_family():
    assert normalize_family('tau') == 'tau-cpm'
    assert normalize_family('tdag') == 't2-dagger'
    assert normalize_family('xxz-cyclic') == 'xxz-cyclic'
    with pytest.raises(ConfigError):
        normalize_family('ising')


def test_defaults():
    config = build_run_config({})
    assert config.setups == ((3, 3, 1), (2, 4, 1), (2, 4, -1), (3, 6, 1))
    assert config.L == 2
    assert config.r == 0
    assert config.r_prime is None
    assert config.suites is None
    assert config.seed == settings.SEED
    assert config.tolerance('identity') == settings.TOLERANCE
    assert config.family == 't2-cyclic'
    assert len(config.root_setups()) == 4


def test_explicit_entries():
    config = build_run_config({
        'setups': [[3, 6], [2, 4, -1]],
        'chain': {'L': 3, 'r': 1, 'r_prime': 4,
                  'sites': [{'p_prime': ['1', '1+0.1i', '0.9'], 'p': ['1.1', '0.8i', '1']}]},
        'suites': [],
        'tolerances': {'identity': 1e-8},
        'seed': 7,
        'family': 'xxz',
        's': '0.5-0.5i',
    })
    assert config.setups == ((3, 6, 1), (2, 4, -1))
    assert config.suites == ()
    assert config.tolerance('identity') == 1e-8
    assert config.tolerance('eigen') == settings.EIGEN_TOLERANCE
    assert config.family == 'xxz-cyclic'
    assert config.s == 0.5 - 0.5j
    assert config.sites[0][1].b == 0.8j


def test_chain_repeats_sites():
    config = build_run_config({'chain': {'L': 3, 'r': 1, 'p_prime': [1, 1, 1], 'p': [1, 2, 1]}})
    setup = config.root_setups()[0]
    cfg = config.chain(setup)
    assert cfg.L == 3
    assert cfg.r_prime == 2
    assert config.chain(setup, r_prime=-1).r_prime == (-1) % setup.n


@pytest.mark.parametrize('data', [
    {'chain': {'L': 0, 'p_prime': [1, 1, 1], 'p': [1, 1, 1]}},
    {'chain': {'L': 2, 'p': [1, 1, 1]}},
    {'chain': {'L': 2, 'p_prime': [1, 1], 'p': [1, 1, 1]}},
    {'tolerances': {'identity': -1}},
    {'family': 'ising'},
    {'t': 'not-a-number'},
])
def test_malformed_configs(data):
    with pytest.raises(ConfigError):
        build_run_config(data)


def test_load_from_string_and_file(tmp_path):
    text = json.dumps({'seed': 11, 'suites': ['yb']})
    assert load_run_config(config_json=text).seed == 11

    path = tmp_path / 'run.json'
    path.write_text(text)
    config = load_run_config(path=str(path))
    assert config.suites == ('yb',)

    assert load_run_config().seed == settings.SEED


def test_load_rejects_bad_input(tmp_path):
    with pytest.raises(ConfigError):
        load_run_config(path=str(tmp_path / 'missing.json'))
    with pytest.raises(ConfigError):
        load_run_config(config_json='{"seed": ')
    with pytest.raises(ConfigError):
        load_run_config(config_json='[1, 2]')


def test_overrides_skip_none():
    config = build_run_config({})
    changed = config.with_overrides(seed=3, eigen=None)
    assert changed.seed == 3
    assert changed.eigen is False


def test_config_to_json_round_trips_suites():
    config = build_run_config({'suites': ['yb', 'gauge']})
    assert config.to_json()['suites'] == ['yb', 'gauge']
    assert build_run_config({}).to_json()['suites'] is None
