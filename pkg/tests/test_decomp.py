"""
Cyclic subspaces of C^n and the decomposition of the n-dimensional chains
"""
import numpy as np
import pytest

from algebra.decomp import (
    EMBEDDING_KINDS,
    chain_subspace,
    direct_sum_rank,
    embedding,
    multi_indices,
    sector_occupancy,
    shifted,
    verify_pairing,
    verify_t2cyl,
    verify_t2dag,
    verify_xxzt_odd,
    x_prime_transfer,
    z_prime_transfer,
)
from algebra.errors import BoundaryError, RootOfUnityError
from algebra.transfer import ChainConfig
from algebra.weyl_core import hat_pair, kron_chain, relative_residual

TOL = 1e-10
TRANSFER_KEYS = ('blocks', 'invariance', 'trace', 'projection', 'charge')


def test_multi_indices():
    assert len(multi_indices(3)) == 8
    assert shifted((0, 1, 1)) == (1, 0, 0)


@pytest.mark.parametrize('kind', EMBEDDING_KINDS)
def test_embeddings(setup, kind):
    emb = embedding(setup, kind)
    assert emb.basis.shape == (setup.n, setup.N)
    assert max(emb.weyl_relations().values()) < TOL
    assert emb.isomorphism_residual() < TOL


def test_unknown_embedding(setup):
    with pytest.raises(ValueError):
        embedding(setup, 'sideways')
    with pytest.raises(ValueError):
        chain_subspace(setup, (0, 1), 'twisted')


def test_odd_plus_minus_coincide(odd_setup):
    # n = N: both subspaces are all of C^n
    plus = embedding(odd_setup, 'plus')
    assert np.linalg.matrix_rank(plus.basis) == odd_setup.N


@pytest.mark.parametrize('kind', ['plain', 'dagger'])
def test_direct_sum_fills_space(even_setup, kind):
    rank, total = direct_sum_rank(even_setup, 2, kind)
    assert rank == total == even_setup.n ** 2


def test_t2_decomposition(setup, triples):
    cfg = ChainConfig.homogeneous(setup, 2, *triples, r=1)
    for i_vec in multi_indices(2):
        result = verify_t2cyl(cfg, i_vec)
        assert max(result[key] for key in TRANSFER_KEYS) < TOL


def test_t2_decomposition_checks_boundary(setup, triples):
    cfg = ChainConfig.homogeneous(setup, 2, *triples, r=1, r_prime=1)
    with pytest.raises(BoundaryError):
        verify_t2cyl(cfg, (0, 0))


def test_dagger_decomposition(setup, triples):
    cfg = ChainConfig.homogeneous(setup, 2, *triples, r=1, r_prime=-1)
    for i_vec in multi_indices(2):
        result = verify_t2dag(cfg, i_vec)
        assert max(result.values()) < TOL


def test_z_prime_transfer(setup):
    Z_hat, _ = hat_pair(setup.N, setup.omega)
    for i_vec in multi_indices(2):
        expected = kron_chain([np.linalg.matrix_power(Z_hat, -i) for i in i_vec])
        assert relative_residual(z_prime_transfer(setup, i_vec), expected) < TOL


def test_x_prime_transfer(setup):
    for i_vec in multi_indices(2):
        D = x_prime_transfer(setup, i_vec)
        assert D.shape == (setup.N ** 2, setup.N ** 2)
        # diagonal in the spin basis
        assert relative_residual(D, np.diag(np.diag(D))) < TOL


def test_pairing_operator_level(setup, triples):
    cfg = ChainConfig.homogeneous(setup, 2, *triples, r=1)
    for i_vec in multi_indices(2):
        result = verify_pairing(cfg, i_vec, 0.8 + 0.35j)
        assert result['operator'] < TOL
        assert result['z_prime_transfer'] < TOL


@pytest.mark.parametrize('orientation', ['forward', 'reverse'])
def test_pairing_eigenvectors(even_setup, triples, orientation):
    cfg = ChainConfig.homogeneous(even_setup, 2, *triples, r=1)
    result = verify_pairing(cfg, (0, 1), 0.8 + 0.35j, eigen=True, orientation=orientation)
    assert result['pairs'] == 2 * even_setup.N ** 2
    assert result['eigenvector'] < 1e-8
    assert result['charge'] < 1e-8


def test_pairing_rejects_orientation(setup, triples):
    cfg = ChainConfig.homogeneous(setup, 2, *triples)
    with pytest.raises(ValueError):
        verify_pairing(cfg, (0, 0), 0.8, orientation='sideways')


def test_xxz_odd_relation(odd_setup, triples):
    cfg = ChainConfig.homogeneous(odd_setup, 2, *triples, r=1)
    assert verify_xxzt_odd(cfg, 0.8 + 0.35j) < TOL


def test_xxz_odd_relation_rejects_even(even_setup, triples):
    cfg = ChainConfig.homogeneous(even_setup, 2, *triples)
    with pytest.raises(RootOfUnityError):
        verify_xxzt_odd(cfg, 0.8 + 0.35j)


def test_lifted_sectors_split_in_charge(even_setup):
    N, n = even_setup.N, even_setup.n
    for Q in range(N):
        occupancy = sector_occupancy(even_setup, 2, 1, Q, (0, 1))
        assert set(occupancy) == {Q % n, (Q + N) % n}
        assert abs(sum(occupancy.values()) - 1) < 1e-10
        dagger = sector_occupancy(even_setup, 2, 1, Q, (0, 1), kind='dagger')
        assert set(dagger) == {(-2 * Q + 1) % n}
