"""
Run-configuration loading and complex-number parsing
"""
import json
import logging
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from algebra.errors import WorkbenchError
from algebra.qgroups import ParamTriple
from algebra.transfer import FAMILIES, ChainConfig
from algebra.weyl_core import RootSetup
from config.settings import settings

logger = logging.getLogger(__name__)

FAMILY_ALIASES = {
    'tau': 'tau-cpm', 'xxz': 'xxz-cyclic', 't2': 't2-cyclic', 'tdag': 't2-dagger', 't2dag': 't2-dagger',
}


class ConfigError(WorkbenchError):
    """Malformed run configuration"""


def parse_complex(value: Any) -> complex:
    """
    Parse 're+imi' strings (also 're+imj', 'imi', plain reals) or numbers.

    Raises:
        ConfigError: unparseable text
    """
    if isinstance(value, (int, float, complex)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if not isinstance(value, str):
        raise ConfigError(f"cannot read {value!r} as a complex number")
    text = value.replace(' ', '').replace('i', 'j')
    try:
        return complex(text)
    except ValueError:
        raise ConfigError(f"cannot read '{value}' as a complex number") from None


def format_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.12g}{z.imag:+.12g}i"


def parse_triple(values: Sequence[Any]) -> ParamTriple:
    if len(values) != 3:
        raise ConfigError(f"a parameter triple needs 3 entries, got {len(values)}")
    return ParamTriple(*(parse_complex(v) for v in values))


def normalize_family(name: str) -> str:
    family = FAMILY_ALIASES.get(name, name)
    if family not in FAMILIES:
        raise ConfigError(f"unknown family '{name}', expected one of {sorted(FAMILY_ALIASES)}")
    return family


@dataclass(frozen=True)
class RunConfig:
    """Everything one ``run`` needs; complex values already parsed"""
    setups: Tuple[Tuple[int, int, int], ...]
    L: int
    r: int
    r_prime: Optional[int]
    sites: Tuple[Tuple[ParamTriple, ParamTriple], ...]
    suites: Optional[Tuple[str, ...]]
    tolerances: Dict[str, float]
    seed: int
    eigen: bool = False
    family: str = 't2-cyclic'
    t: complex = 0.3 + 0.1j
    s: complex = 0.8 + 0.35j
    out_json: Optional[str] = None
    out_csv: Optional[str] = None
    cpm_moduli: Tuple[complex, ...] = (0.7, 0.6 + 0.3j)
    samples: int = field(default_factory=lambda: settings.SPECTRAL_SAMPLES)

    def root_setups(self) -> List[RootSetup]:
        return [RootSetup.create(N, n, sign) for N, n, sign in self.setups]

    def chain(self, setup: RootSetup, L: Optional[int] = None, **changes) -> ChainConfig:
        """Chain on ``setup``; site parameters repeat cyclically up to L sites"""
        L = self.L if L is None else L
        sites = tuple(self.sites[l % len(self.sites)] for l in range(L))
        cfg = ChainConfig(setup, sites, self.r, self.r_prime)
        return cfg.with_sites(cfg.sites, **changes) if changes else cfg

    def tolerance(self, name: str) -> float:
        return self.tolerances.get(name, settings.TOLERANCE)

    def with_overrides(self, **changes) -> 'RunConfig':
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def to_json(self) -> Dict[str, Any]:
        return {
            'setups': [list(s) for s in self.setups],
            'L': self.L, 'r': self.r, 'r_prime': self.r_prime,
            'sites': [{'p_prime': pp.to_json(), 'p': p.to_json()} for pp, p in self.sites],
            'suites': None if self.suites is None else list(self.suites),
            'tolerances': dict(sorted(self.tolerances.items())),
            'seed': self.seed, 'eigen': self.eigen, 'family': self.family,
            't': format_complex(self.t), 's': format_complex(self.s),
        }


def _setup_triples(pairs: Sequence[Sequence[int]]) -> Tuple[Tuple[int, int, int], ...]:
    setups = []
    for pair in pairs:
        N, n = int(pair[0]), int(pair[1])
        if len(pair) > 2:
            setups.append((N, n, int(pair[2])))
        elif n == 2 * N and N % 2 == 0:
            setups.extend([(N, n, 1), (N, n, -1)])
        else:
            setups.append((N, n, 1))
    return tuple(setups)


def _sites(chain: Dict[str, Any]) -> Tuple[Tuple[ParamTriple, ParamTriple], ...]:
    if 'sites' in chain:
        return tuple((parse_triple(site['p_prime']), parse_triple(site['p'])) for site in chain['sites'])
    return ((parse_triple(chain['p_prime']), parse_triple(chain['p'])),)


def build_run_config(data: Dict[str, Any]) -> RunConfig:
    """
    RunConfig from a nested mapping, falling back to Settings defaults.

    Raises:
        ConfigError: missing or malformed entries
    """
    try:
        chain = data.get('chain') or settings.get_default_chain()
        setups = data.get('setups') or settings.get_setups()
        tolerances = settings.get_tolerances()
        tolerances.update({k: float(v) for k, v in (data.get('tolerances') or {}).items()})
        config = RunConfig(
            setups=_setup_triples(setups),
            L=int(chain.get('L', 2)),
            r=int(chain.get('r', 0)),
            r_prime=None if chain.get('r_prime') is None else int(chain['r_prime']),
            sites=_sites(chain),
            suites=None if data.get('suites') is None else tuple(data['suites']),
            tolerances=tolerances,
            seed=int(data.get('seed', settings.SEED)),
            eigen=bool(data.get('eigen', False)),
            family=normalize_family(data.get('family', 't2-cyclic')),
            t=parse_complex(data.get('t', '0.3+0.1i')),
            s=parse_complex(data.get('s', '0.8+0.35i')),
            out_json=data.get('out_json'),
            out_csv=data.get('out_csv'),
            cpm_moduli=tuple(parse_complex(k) for k in data.get('cpm_moduli', ('0.7', '0.6+0.3i'))),
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"malformed run configuration: {e}") from e

    if config.L < 1:
        raise ConfigError(f"L must be positive, got {config.L}")
    for name, value in config.tolerances.items():
        if not value > 0:
            raise ConfigError(f"tolerance '{name}' must be positive")
    return config


def load_run_config(path: Optional[str] = None, config_json: Optional[str] = None) -> RunConfig:
    """
    Load a run configuration from a JSON file or a JSON string; neither means defaults.

    Raises:
        ConfigError: unreadable file or invalid JSON
    """
    if config_json:
        text = config_json
    elif path:
        if not os.path.exists(path):
            raise ConfigError(f"configuration file '{path}' not found")
        text = Path(path).read_text()
    else:
        return build_run_config({})

    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"configuration is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    logger.debug("loaded run configuration with keys %s", sorted(data))
    return build_run_config(data)
