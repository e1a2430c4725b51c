"""
Weyl pairs, roots of unity and chain helpers
"""
import numpy as np
import pytest

from algebra.errors import DimensionCapError, RootOfUnityError
from algebra.weyl_core import (
    RootSetup,
    embed_site,
    fourier_map,
    hat_pair,
    is_primitive_root,
    kron_chain,
    labels_with_sum,
    flat_index,
    relative_residual,
    scalar_fit,
    unitarity_residual,
    weyl_pair,
)


def test_root_setup_roots(setup):
    assert abs(setup.q ** -2 - setup.omega) < 1e-12
    assert is_primitive_root(setup.q, setup.n)
    assert is_primitive_root(setup.omega, setup.N)
    assert abs(setup.w - setup.omega) < 1e-12


def test_odd_setup_uses_minus_root():
    setup = RootSetup.create(3, 3)
    assert abs(setup.q - (-np.exp(-1j * np.pi / 3))) < 1e-12
    assert setup.is_odd
    assert setup.c_n == 1.0


def test_even_setup_normalization():
    setup = RootSetup.create(2, 4)
    assert not setup.is_odd
    assert abs(setup.c_n - 2 ** -0.5) < 1e-15


@pytest.mark.parametrize('N, n, sign', [(3, 4, 1), (4, 4, 1), (3, 6, -1), (1, 2, 1), (3, 6, 2)])
def test_root_setup_rejects(N, n, sign):
    with pytest.raises(RootOfUnityError):
        RootSetup.create(N, n, sign)


@pytest.mark.parametrize('d', [2, 3, 4, 6])
def test_weyl_relation(d):
    omega = np.exp(2j * np.pi / d)
    X, Z = weyl_pair(d, omega)
    assert relative_residual(Z @ X, omega * X @ Z) < 1e-12
    assert relative_residual(np.linalg.matrix_power(X, d), np.eye(d)) < 1e-12
    assert relative_residual(np.linalg.matrix_power(Z, d), np.eye(d)) < 1e-12


def test_shift_acts_on_basis():
    X, _ = weyl_pair(3, np.exp(2j * np.pi / 3))
    assert np.allclose(X @ np.eye(3)[:, 2], np.eye(3)[:, 0])


def test_weyl_pair_rejects_non_primitive():
    with pytest.raises(RootOfUnityError):
        weyl_pair(4, -1)


@pytest.mark.parametrize('d', [3, 4, 6])
def test_hat_pair_is_fourier_conjugate(d):
    root = np.exp(2j * np.pi / d)
    F = fourier_map(d, root)
    X, Z = weyl_pair(d, root)
    Z_hat, X_hat = hat_pair(d, root)
    assert unitarity_residual(F) < 1e-12
    # Ẑ diagonal in the Fourier basis, X̂ raising k by one
    diagonal = F.conj().T @ Z_hat @ F
    assert relative_residual(diagonal, np.diag(np.diag(diagonal))) < 1e-12
    assert relative_residual(F.conj().T @ X_hat @ F, X) < 1e-12
    assert relative_residual(Z_hat @ X_hat, root * X_hat @ Z_hat) < 1e-12


def test_kron_chain_cap():
    with pytest.raises(DimensionCapError):
        kron_chain([np.eye(4)] * 3, max_dim=32)
    assert kron_chain([np.eye(2)] * 3, max_dim=8).shape == (8, 8)


def test_embed_site_places_operator():
    op = np.array([[0, 1], [1, 0]], dtype=complex)
    full = embed_site(op, 1, 3)
    assert relative_residual(full, np.kron(np.kron(np.eye(2), op), np.eye(2))) < 1e-15


def test_labels_with_sum():
    labels = labels_with_sum(3, 3, 1)
    assert len(labels) == 9
    assert all(sum(l) % 3 == 1 for l in labels)
    assert flat_index((1, 2), 3) == 5


def test_scalar_fit_recovers_scalar():
    rng = np.random.default_rng(1)
    rhs = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    _, residual = scalar_fit(rhs + 0.3, rhs)
    assert residual > 1e-3
    scalar, residual = scalar_fit((1.5 - 0.5j) * rhs, rhs)
    assert abs(scalar - (1.5 - 0.5j)) < 1e-12
    assert residual < 1e-14


def test_relative_residual_zero_operands():
    assert relative_residual(np.zeros((2, 2)), np.zeros((2, 2))) == 0.0


def test_relative_residual_rounding_level_operands():
    # both sides vanish up to rounding: compared absolutely
    lhs = np.array([[1.22e-16, 0], [0, 0]], dtype=complex)
    rhs = np.array([[4.44e-16, 0], [0, 0]], dtype=complex)
    assert relative_residual(lhs, rhs) < 1e-15
    assert relative_residual(1e6 * np.eye(2), 1e6 * np.eye(2) + 1.0) < 1e-5
