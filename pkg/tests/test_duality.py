"""
Face-basis dualities and the odd/even comparison
"""
import numpy as np
import pytest

from algebra.decomp import multi_indices
from algebra.duality import (
    DUALITIES,
    check_factorization,
    dual_chain,
    dual_sector,
    dual_triple,
    product_form_transfer,
    psi_matrix,
    spectrum_distance,
    verify_comparison,
    verify_comparison_odd,
    verify_containment_even,
    verify_duality,
)
from algebra.errors import BoundaryError, ParameterError
from algebra.qgroups import ParamTriple
from algebra.transfer import FAMILIES, ChainConfig, sector_basis, transfer_matrix
from algebra.weyl_core import relative_residual

TOL = 1e-9


def test_dual_triple_is_an_involution(triples):
    for p in triples:
        back = dual_triple(dual_triple(p))
        assert abs(back.a - p.a) + abs(back.b - p.b) + abs(back.d - p.d) < 1e-12


def test_dual_chain_shifts_sites(setup, triples):
    pp, p = triples
    other = ParamTriple(pp.a * 1.1, pp.b, pp.d)
    cfg = ChainConfig(setup, ((pp, p), (other, p)))
    dual = dual_chain(cfg, r=2)
    assert dual.r == 2 % setup.N
    assert dual.sites[0][1] == dual_triple(other)
    assert dual.sites[1][1] == dual_triple(pp)


@pytest.mark.parametrize('family', FAMILIES)
def test_product_form_matches_transfer(chain, family):
    x = 0.7 + 0.25j
    assert relative_residual(product_form_transfer(chain, family, x),
                             transfer_matrix(chain, family)(x)) < TOL


@pytest.mark.parametrize('family', FAMILIES)
def test_lax_factorization(setup, triples, family):
    assert check_factorization(*triples, setup, family, 0.7 + 0.25j) < TOL


def test_unknown_family_in_factorization(setup, triples):
    with pytest.raises(ValueError):
        check_factorization(*triples, setup, 'ising', 0.5)


def test_t2_self_duality(chain):
    for Q in range(chain.setup.N):
        result = verify_duality('t2d', chain, Q, eigen=True)
        assert result['residual'] < TOL
        assert 'spectrum' in result


@pytest.mark.parametrize('direction', ['forward', 'reverse'])
def test_t2_dagger_duality(chain, direction):
    for Q in range(chain.setup.n):
        assert verify_duality('tdagd', chain, Q, direction=direction)['residual'] < TOL


def test_xxz_duality(chain):
    for Q in range(chain.setup.n):
        result = verify_duality('xxzdu', chain, Q)
        assert result['residual'] < TOL
        assert result['scalar_residual'] < TOL


def test_xxz_duality_needs_common_bb(setup, triples):
    pp, p = triples
    cfg = ChainConfig(setup, ((pp, p), (ParamTriple(pp.a, 2 * pp.b, pp.d), p)))
    with pytest.raises(ParameterError):
        verify_duality('xxzdu', cfg, 0)


def test_unknown_duality(chain):
    with pytest.raises(ValueError):
        verify_duality('mirror', chain, 0)
    with pytest.raises(ValueError):
        verify_duality(DUALITIES[0], chain, 0, direction='sideways')


@pytest.mark.parametrize('primed', [False, True])
def test_psi_is_unitary(setup, primed):
    d = setup.n if primed else setup.N
    for Q in range(d):
        face = sector_basis(setup, 2, 1, Q, primed)
        psi = psi_matrix(setup, 2, (1, Q), primed)
        assert psi.codomain == dual_sector(setup, 1, Q, primed)
        assert psi.unitarity_residual(face.face_basis) < 1e-12


def test_psi_rejects_foreign_labels(setup):
    psi = psi_matrix(setup, 2, (0, 0))
    with pytest.raises(BoundaryError):
        psi.image_label((1, 0))
    assert psi.image_label([0, 0]) == (0, 0)


def test_dual_sector_conventions(setup):
    assert dual_sector(setup, 1, 2) == (2 % setup.N, 1)
    assert dual_sector(setup, 1, 2, primed=True) == ((-2) % setup.n, (-1) % setup.n)


def test_spectrum_distance_ignores_order():
    a = np.diag([1.0, 2.0, 3.0 + 1j])
    b = np.diag([3.0 + 1j, 1.0, 2.0])
    assert spectrum_distance(a, b) < 1e-12
    assert spectrum_distance(a, 2 * b) > 0.1


def test_odd_comparison(odd_setup, triples):
    cfg = ChainConfig.homogeneous(odd_setup, 2, *triples, r=1)
    for Q in range(odd_setup.N):
        result = verify_comparison_odd(cfg, Q, 0.6 - 0.2j)
        assert max(result.values()) < TOL


def test_odd_comparison_rejects_even(even_setup, triples):
    cfg = ChainConfig.homogeneous(even_setup, 2, *triples)
    with pytest.raises(ParameterError):
        verify_comparison_odd(cfg, 0, 0.6)


def test_even_containment(even_setup):
    for Q in range(even_setup.N):
        facts = verify_containment_even(even_setup, 2, 1, Q)
        assert facts['plain_split']
        assert facts['dagger_single']
        assert set(facts['plain']) == set(multi_indices(2))


def test_containment_rejects_odd(odd_setup):
    with pytest.raises(ParameterError):
        verify_containment_even(odd_setup, 2, 1, 0)


def test_comparison_dispatch(setup, triples):
    cfg = ChainConfig.homogeneous(setup, 2, *triples, r=1)
    result = verify_comparison(cfg)
    assert ('face_vs_hat' in result) == setup.is_odd
