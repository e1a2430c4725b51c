"""
L-operators, R-matrices and their relations
"""
import numpy as np
import pytest

from algebra.errors import ParameterError
from algebra.lax import (
    LaxOperator,
    RMatrix,
    check_gauge_relations,
    check_llrel,
    check_twist_conjugation,
    check_yb,
    lax_cpm,
    lax_cyclic_big,
    lax_tau,
    lax_xxz,
    xxz_gauge_residual,
)
from algebra.qgroups import CyclicParams, dagger_rep, descended_rep, induced_uw, random_triple, spin_rep

TOL = 1e-10
SAMPLES = 5


def test_lax_operator_evaluation():
    block = np.eye(2, dtype=complex)
    lax = LaxOperator.from_blocks({-1: [[block, None], [None, None]],
                                   1: [[None, None], [None, 2 * block]]}, variable='t')
    values = lax.evaluate(2.0)
    assert np.allclose(values[0, 0], 0.5 * block)
    assert np.allclose(values[1, 1], 4 * block)
    assert np.allclose(values[0, 1], 0)
    assert lax.degree_range == (-1, 1)
    assert lax.as_block_matrix(2.0).shape == (4, 4)


def test_lax_operator_rejects_mixed_shapes():
    with pytest.raises(ValueError):
        LaxOperator({0: np.zeros((2, 2, 2, 2)), 1: np.zeros((2, 2, 3, 3))})


@pytest.mark.parametrize('d', [2, 3, 4])
def test_yb_spin_xxz(setup, rng, d):
    lax = lax_xxz(spin_rep(d, setup.q).uq, 0.9 + 0.2j, 1.1 - 0.3j)
    assert check_yb(RMatrix.xxz(setup.q), lax, lax, SAMPLES, rng) < TOL


@pytest.mark.parametrize('d', [2, 3])
def test_yb_spin_tau(setup, rng, d):
    lax = lax_tau(spin_rep(d, setup.q).uw, 0.9 + 0.2j, 1.1 - 0.3j)
    assert check_yb(RMatrix.tau(setup.omega), lax, lax, SAMPLES, rng) < TOL


def test_yb_cyclic_tau(setup, rng):
    cp = CyclicParams.random(rng)
    R = RMatrix.tau(setup.omega)
    for gen in (induced_uw(setup, cp), descended_rep(setup, cp), dagger_rep(setup, cp)):
        lax = lax_tau(gen, 1.05 + 0.1j, 0.85 - 0.2j)
        assert check_yb(R, lax, lax, SAMPLES, rng) < TOL


def test_yb_five_parameter(setup, rng, triples):
    R = RMatrix.tau(setup.omega)
    assert check_yb(R, lax_cpm(*triples, setup), lax_cpm(*triples, setup), SAMPLES, rng) < TOL
    drawn = lax_cpm(random_triple(rng), random_triple(rng), setup)
    assert check_yb(R, drawn, drawn, SAMPLES, rng) < TOL


@pytest.mark.parametrize('variant', ['xxz', 'tau', 'dagger'])
def test_yb_n_dimensional(setup, rng, triples, variant):
    R = RMatrix.xxz(setup.q) if variant == 'xxz' else RMatrix.tau(setup.omega)
    lax = lax_cyclic_big(*triples, setup, variant)
    assert lax.dim == setup.n
    assert check_yb(R, lax, lax, SAMPLES, rng) < TOL


def test_yb_detects_perturbation(setup, rng, triples):
    lax = lax_cpm(*triples, setup).perturbed(0, 1, eps=1e-3)
    assert check_yb(RMatrix.tau(setup.omega), lax, lax, SAMPLES, rng) > 1e-5


def test_yb_rejects_dimension_mismatch(even_setup, rng, triples):
    with pytest.raises(ParameterError):
        check_yb(RMatrix.tau(even_setup.omega), lax_cpm(*triples, even_setup),
                 lax_cyclic_big(*triples, even_setup, 'tau'), SAMPLES, rng)


def test_unknown_variant(setup, triples):
    with pytest.raises(ValueError):
        lax_cyclic_big(*triples, setup, 'chiral')


def test_gauge_relations(setup, triples):
    residuals = check_gauge_relations(setup, *triples)
    assert max(residuals.values()) < TOL


def test_xxz_tau_relation(setup, triples):
    assert check_llrel(*triples, setup, 0.8 + 0.35j)['residual'] < TOL


def test_xxz_spin_gauge(setup):
    assert xxz_gauge_residual(spin_rep(2, setup.q).uq, 0.9 + 0.1j, 1.2 - 0.4j, 0.8 + 0.35j) < TOL


@pytest.mark.parametrize('variant', ['xxz', 'tau'])
def test_round_twist(setup, triples, variant):
    assert check_twist_conjugation(setup, *triples, 1, 'round', variant) < TOL


def test_round_twist_five_parameter(setup, triples):
    assert check_twist_conjugation(setup, *triples, 2, 'round', 'cpm') < TOL
    with pytest.raises(ParameterError):
        check_twist_conjugation(setup, *triples, 1, 'round', 'cpm')


@pytest.mark.parametrize('variant', ['dagger', 'cpm'])
def test_square_twist(setup, triples, variant):
    assert check_twist_conjugation(setup, *triples, 1, 'square', variant, l_prime=1) < TOL
