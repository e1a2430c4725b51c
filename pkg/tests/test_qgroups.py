"""
Quantum-group representations
"""
import numpy as np
import pytest

from algebra.errors import ParameterError
from algebra.qgroups import (
    CyclicParams,
    ParamTriple,
    cyclic_rep_uq,
    dagger_rep,
    descended_rep,
    induced_uw,
    minus_pair,
    params_from_triples,
    power_scalar,
    q_number,
    spin_rep,
    triple_distance,
    triples_from_params,
    twist,
    twist_equivalence,
    uw_from_uq,
)
from algebra.weyl_core import RootSetup, relative_residual

TOL = 1e-10


@pytest.fixture
def cp(rng) -> CyclicParams:
    return CyclicParams.random(rng)


def test_q_number_vanishes_at_root():
    q = np.exp(1j * np.pi / 3)
    assert abs(q_number(3, q)) < 1e-12
    assert abs(q_number(2, q) - (q + 1 / q)) < 1e-12


@pytest.mark.parametrize('d', [2, 3, 4])
def test_spin_reps(setup, d):
    spin = spin_rep(d, setup.q)
    assert spin.uq.max_residual() < TOL
    assert spin.uw.max_residual() < TOL


def test_spin_rep_generic_q():
    spin = spin_rep(3, 0.9 * np.exp(0.4j))
    assert not spin.degenerate
    assert spin.uq.max_residual() < TOL


def test_spin_rep_flags_degenerate():
    # d = 4 at q = e^{iπ/3} hits [3]_q = 0
    assert spin_rep(4, np.exp(1j * np.pi / 3)).degenerate


@pytest.mark.parametrize('sign', [1, -1])
def test_degenerate_spin_rep_relations_hold(sign):
    # q = ±i: [2]_q = 0, so [e⁺, e⁻] and (K − K⁻¹)/(q − q⁻¹) both vanish
    spin = spin_rep(3, RootSetup.create(2, 4, sign).q)
    assert spin.degenerate
    residuals = spin.uq.relation_residuals()
    assert residuals['commutator'] < TOL
    assert spin.uw.max_residual() < TOL


def test_cyclic_representations(setup, cp):
    assert cyclic_rep_uq(setup, cp).max_residual() < TOL
    assert induced_uw(setup, cp).max_residual() < TOL
    assert descended_rep(setup, cp, 1).max_residual() < TOL
    assert descended_rep(setup, cp, -1).max_residual() < TOL
    assert dagger_rep(setup, cp).max_residual() < TOL


def test_closed_form_matches_derived(setup, cp):
    derived = uw_from_uq(cyclic_rep_uq(setup, cp))
    assert induced_uw(setup, cp).distance(derived) < 1e-11


def test_power_scalar(setup, cp):
    Eplus = induced_uw(setup, cp).Eplus
    expected = power_scalar(setup, cp) * np.eye(setup.n)
    assert relative_residual(np.linalg.matrix_power(Eplus, setup.n), expected) < TOL


@pytest.mark.parametrize('space', ['descended', 'induced'])
def test_twist_equivalence(setup, cp, space):
    assert twist_equivalence(setup, cp, 1, space) < TOL


def test_descended_rejects_bad_sign(setup, cp):
    with pytest.raises(ParameterError):
        descended_rep(setup, cp, 0)


def test_zero_parameter_rejected():
    with pytest.raises(ParameterError):
        ParamTriple(1.0, 0.0, 1.0)
    with pytest.raises(ParameterError):
        CyclicParams.create(1.0, 1.0, 1.0, rho=0.0)


def test_triples_round_trip_through_params(setup, triples):
    pp, p = triples
    cp = params_from_triples(pp, p, setup)
    pp_back, p_back = triples_from_params(cp, setup)
    # d′ = 1, d = c fixes the split of c
    assert abs(pp_back.d * p_back.d - pp.d * p.d) < 1e-10
    assert triple_distance((pp_back, p_back), (ParamTriple(pp.a, pp.b, 1.0),
                                               ParamTriple(p.a, p.b, pp.d * p.d))) < 1e-10


def test_twists(setup, triples):
    _, p = triples
    q = setup.q
    round_twist = twist(p, 2, 'round', setup)
    assert abs(round_twist.a - p.a * q ** 2) < 1e-12
    assert abs(round_twist.b - p.b * q ** -2) < 1e-12
    assert abs(twist(p, 1, 'square', setup).d - p.d * q) < 1e-12
    with pytest.raises(ValueError):
        twist(p, 1, 'diagonal', setup)


def test_minus_pair(triples):
    setup = RootSetup.create(3, 3)
    pp, p = triples
    pp_minus, p_minus = minus_pair(pp, p, setup)
    assert abs(pp_minus.a - pp.a / setup.q) < 1e-12
    assert abs(p_minus.b - p.b / setup.q) < 1e-12
