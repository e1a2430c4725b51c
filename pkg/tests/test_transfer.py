"""
Monodromies, transfer matrices and charge sectors
"""
import numpy as np
import pytest

from algebra.errors import BoundaryError, ParameterError
from algebra.lax import lax_cpm
from algebra.qgroups import ParamTriple, spin_rep
from algebra.transfer import (
    FAMILIES,
    ChainConfig,
    charge_operator,
    check_boundary,
    inhomogeneous_reduce,
    monodromy,
    polynomial_coefficients,
    sector_basis,
    sector_projector_residual,
    transfer_matrix,
    verify_inhomogeneous_tau,
    verify_inhomogeneous_xxz,
    verify_lrelcy,
    verify_tau_t_spin,
)
from algebra.weyl_core import commutator_residual, relative_residual, unitarity_residual

TOL = 1e-10
POINTS = (0.3 + 0.1j, -0.7 + 0.45j)


def test_chain_defaults(setup, triples):
    cfg = ChainConfig.homogeneous(setup, 3, *triples, r=setup.N + 1)
    assert cfg.L == 3
    assert cfg.r == 1
    assert cfg.r_prime == 2 % setup.n
    assert cfg.common_bb()


def test_chain_rejects_empty(setup):
    with pytest.raises(ParameterError):
        ChainConfig(setup, ())


@pytest.mark.parametrize('family', FAMILIES)
def test_transfer_matrices_commute(chain, family):
    T = transfer_matrix(chain, family)
    assert commutator_residual(T(POINTS[0]), T(POINTS[1])) < TOL


@pytest.mark.parametrize('family', FAMILIES)
def test_transfer_commutes_with_charge(chain, family):
    primed = family != 'tau-cpm'
    T = transfer_matrix(chain, family)(POINTS[0])
    assert commutator_residual(T, charge_operator(chain.setup, chain.L, primed)) < TOL


def test_transfer_dimensions(chain):
    setup = chain.setup
    assert transfer_matrix(chain, 'tau-cpm')(0.5).shape == (setup.N ** 2, setup.N ** 2)
    assert transfer_matrix(chain, 't2-cyclic')(0.5).shape == (setup.n ** 2, setup.n ** 2)
    assert transfer_matrix(chain, 'xxz-cyclic').variable == 's'


def test_unknown_family(chain):
    with pytest.raises(ValueError):
        transfer_matrix(chain, 'ising')


def test_monodromy_single_site_is_lax(setup, triples):
    cfg = ChainConfig.homogeneous(setup, 1, *triples)
    blocks = monodromy(cfg, 'tau-cpm').evaluate(0.4 + 0.2j)
    assert relative_residual(blocks, lax_cpm(*triples, setup).evaluate(0.4 + 0.2j)) < 1e-14


def test_polynomial_coefficients():
    coefficients = polynomial_coefficients(lambda x: np.array([[2 / x + 3 * x ** 2]]), -1, 2)
    assert abs(coefficients[-1][0, 0] - 2) < 1e-12
    assert abs(coefficients[0][0, 0]) < 1e-12
    assert abs(coefficients[2][0, 0] - 3) < 1e-12


@pytest.mark.parametrize('primed', [False, True])
def test_sector_bases(setup, primed):
    d = setup.n if primed else setup.N
    L = 2
    total = 0
    for Q in range(d):
        basis = sector_basis(setup, L, 1, Q, primed)
        assert basis.dim == d ** (L - 1)
        assert unitarity_residual(basis.spin_basis) < 1e-12
        assert unitarity_residual(basis.face_basis) < 1e-12
        # face and spin bases span the same charge sector
        assert unitarity_residual(basis.change_of_basis()) < 1e-12
        total += basis.dim
    assert total == d ** L


def test_sector_invariance(chain):
    T = transfer_matrix(chain, 't2-cyclic')(0.3 + 0.1j)
    for Q in range(chain.setup.n):
        H = sector_basis(chain.setup, chain.L, 0, Q, primed=True).spin_basis
        assert sector_projector_residual(T, H) < TOL


def test_xxz_t2_relation(chain):
    assert verify_lrelcy(chain, 0.8 + 0.35j)['residual'] < TOL


def test_xxz_t2_relation_needs_common_bb(setup, triples):
    pp, p = triples
    other = ParamTriple(pp.a, 2 * pp.b, pp.d)
    cfg = ChainConfig(setup, ((pp, p), (other, p)))
    with pytest.raises(ParameterError):
        verify_lrelcy(cfg, 0.8 + 0.35j)


@pytest.mark.parametrize('d', [2, 3])
def test_spin_chain_tau_xxz(setup, d):
    gen = spin_rep(d, setup.q).uq
    residuals = verify_tau_t_spin(gen, (0.9 + 0.1j, 1.1 - 0.2j), 1.2 - 0.4j, 0.8 + 0.35j, r=1)
    assert max(residuals.values()) < TOL


def test_inhomogeneous_reduction(setup):
    spin = spin_rep(2, setup.q)
    rhos = (0.9 + 0.1j, 1.1 - 0.2j)
    nus = (1.3 + 0.2j, 0.7 - 0.1j)
    nu = 1.05 + 0.3j
    assert verify_inhomogeneous_tau([spin.uw] * 2, rhos, nus, nu, 0.3 + 0.1j, setup.omega) < TOL
    assert verify_inhomogeneous_xxz(spin.uq, rhos, nus, nu, 0.8 + 0.35j, setup.q ** -2) < TOL


def test_inhomogeneous_rejects_zero():
    with pytest.raises(ParameterError):
        inhomogeneous_reduce((1.0, 0.0), 1.0)


def test_boundary_congruences(setup, triples):
    plain = ChainConfig.homogeneous(setup, 2, *triples, r=1)
    check_boundary(plain, 'plain')
    dagger = plain.with_sites(plain.sites, r_prime=-1)
    check_boundary(dagger, 'dagger')
    with pytest.raises(BoundaryError):
        check_boundary(plain.with_sites(plain.sites, r_prime=1), 'plain')
