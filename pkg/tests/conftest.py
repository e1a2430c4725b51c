"""
Shared fixtures for the workbench tests
"""
import sys
from pathlib import Path

import numpy as np
import pytest

# Add parent directory to path to import from algebra, config, services, utils
sys.path.insert(0, str(Path(__file__).parent.parent))

from algebra.qgroups import ParamTriple
from algebra.transfer import ChainConfig
from algebra.weyl_core import RootSetup

SETUP_TRIPLES = [(3, 3, 1), (2, 4, 1), (2, 4, -1), (3, 6, 1)]

PP = ParamTriple(0.83 + 0.27j, 1.12 - 0.21j, 0.91 + 0.14j)
P = ParamTriple(1.17 - 0.12j, 0.74 + 0.39j, 1.06 - 0.31j)


def setup_id(triple):
    N, n, sign = triple
    return f"N{N}-n{n}{'+' if sign > 0 else '-'}"


@pytest.fixture(params=SETUP_TRIPLES, ids=setup_id)
def setup(request) -> RootSetup:
    return RootSetup.create(*request.param)


@pytest.fixture
def odd_setup() -> RootSetup:
    return RootSetup.create(3, 3)


@pytest.fixture(params=[(2, 4, 1), (2, 4, -1), (3, 6, 1)], ids=setup_id)
def even_setup(request) -> RootSetup:
    return RootSetup.create(*request.param)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def triples():
    return PP, P


@pytest.fixture
def chain(setup) -> ChainConfig:
    """Two-site homogeneous chain with r = 1 and r′ = 2r"""
    return ChainConfig.homogeneous(setup, 2, PP, P, r=1)
