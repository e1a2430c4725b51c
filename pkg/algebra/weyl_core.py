"""
Cyclic vector spaces, Fourier bases, Weyl pairs and tensor-product assembly.

Conventions used by every other module:

* ``X|σ⟩ = |σ+1⟩`` and ``Z|σ⟩ = root^σ|σ⟩`` so that ``XZ = root⁻¹ZX``.
* The Fourier basis is ``|k̂⟩ = d^{-1/2} Σ_σ root^{-kσ}|σ⟩``; in it ``X`` is
  diagonal and ``Z`` lowers ``k`` by one.
* The hat pair is ``(Ẑ, X̂) = (X, Z⁻¹)``.
* Tensor products put site 1 in the leftmost (slowest-varying) factor.
"""
import logging
from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from algebra.errors import DimensionCapError, RootOfUnityError
from config.settings import settings

logger = logging.getLogger(__name__)

ROOT_ATOL = 1e-12


def is_primitive_root(root: complex, d: int, atol: float = ROOT_ATOL) -> bool:
    """Check that ``root`` is a primitive d-th root of unity"""
    if abs(root ** d - 1) > atol:
        return False
    return all(abs(root ** j - 1) > atol for j in range(1, d))


@dataclass(frozen=True)
class RootSetup:
    """Root-of-unity data (N, n, ω, q) with q⁻² = ω and qⁿ = 1"""
    N: int
    n: int
    q_sign: int
    omega: complex
    q: complex

    @classmethod
    def create(cls, N: int, n: int, q_sign: int = 1) -> 'RootSetup':
        """
        Build ω = e^{2πi/N} and q.

        n = N (N odd) uses q = −ω^{−1/2}; n = 2N uses q = ±ω^{−1/2}, where
        ω^{1/2} = e^{iπ/N}.

        Raises:
            RootOfUnityError: unsupported (N, n) or a sign making q non-primitive
        """
        if N < 2:
            raise RootOfUnityError(f"N must be at least 2, got {N}")
        if q_sign not in (1, -1):
            raise RootOfUnityError(f"q_sign must be +1 or -1, got {q_sign}")

        omega = complex(np.exp(2j * np.pi / N))
        omega_half_inv = complex(np.exp(-1j * np.pi / N))

        if n == N:
            if N % 2 == 0:
                raise RootOfUnityError(f"n = N requires N odd, got N={N}")
            q = -omega_half_inv
            q_sign = -1
        elif n == 2 * N:
            q = q_sign * omega_half_inv
        else:
            raise RootOfUnityError(f"n must be N (odd) or 2N, got N={N}, n={n}")

        if not is_primitive_root(q, n):
            raise RootOfUnityError(
                f"q = {q_sign:+d}·ω^(-1/2) is not a primitive {n}-th root of unity for N={N}"
            )

        logger.debug("RootSetup N=%s n=%s q=%s", N, n, q)
        return cls(N=N, n=n, q_sign=q_sign, omega=omega, q=q)

    @property
    def w(self) -> complex:
        """w = q⁻², which equals ω"""
        return self.q ** -2

    @property
    def omega_half(self) -> complex:
        return complex(np.exp(1j * np.pi / self.N))

    @property
    def is_odd(self) -> bool:
        return self.n == self.N

    @property
    def c_n(self) -> float:
        """Normalization of the lifted spin vectors: 1 for n odd, 2^{-1/2} for n = 2N"""
        return 1.0 if self.is_odd else 2 ** -0.5

    def label(self) -> str:
        return f"N={self.N},n={self.n},q_sign={self.q_sign:+d}"


def _check_root(d: int, root: complex):
    if d < 1:
        raise RootOfUnityError(f"dimension must be positive, got {d}")
    if not is_primitive_root(root, d):
        raise RootOfUnityError(f"{root} is not a primitive {d}-th root of unity")


def weyl_pair(d: int, root: complex) -> Tuple[np.ndarray, np.ndarray]:
    """
    Clock and shift matrices on C^d.

    Returns:
        (X, Z) with X the cyclic shift σ → σ+1 and Z = diag(root^σ)
    """
    _check_root(d, root)
    X = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    Z = np.diag(root ** np.arange(d)).astype(complex)
    return X, Z


def fourier_map(d: int, root: complex) -> np.ndarray:
    """Unitary whose column k is |k̂⟩ expressed in the spin basis"""
    _check_root(d, root)
    sigma = np.arange(d)
    return root ** (-np.outer(sigma, sigma)) / np.sqrt(d)


def hat_pair(d: int, root: complex) -> Tuple[np.ndarray, np.ndarray]:
    """(Ẑ, X̂) = (X, Z⁻¹): Ẑ is diagonal in the Fourier basis, X̂ raises k by one"""
    X, Z = weyl_pair(d, root)
    return X, Z.conj().T


def kron_chain(ops: Sequence[np.ndarray], max_dim: Optional[int] = None) -> np.ndarray:
    """
    Kronecker product in site order, site 1 leftmost.

    Raises:
        DimensionCapError: product dimension above ``max_dim`` (default Settings.MAX_DIM)
    """
    if len(ops) == 0:
        raise ValueError("kron_chain needs at least one operator")
    cap = settings.MAX_DIM if max_dim is None else max_dim
    dim = int(np.prod([op.shape[0] for op in ops]))
    if dim > cap:
        raise DimensionCapError(dim, cap)
    return reduce(np.kron, ops)


def embed_site(op: np.ndarray, site: int, L: int, max_dim: Optional[int] = None) -> np.ndarray:
    """Operator acting as ``op`` on site ``site`` (0-based) of an L-site chain"""
    d = op.shape[0]
    factors = [np.eye(d, dtype=complex)] * L
    factors[site] = op
    return kron_chain(factors, max_dim=max_dim)


def chain_product(op: np.ndarray, L: int, max_dim: Optional[int] = None) -> np.ndarray:
    """The same single-site operator on every site, e.g. the total charge Ẑ = ⊗Ẑ_ℓ"""
    return kron_chain([op] * L, max_dim=max_dim)


@dataclass(frozen=True)
class BasisLabel:
    """A spin label σ or a Fourier label k̂, reduced mod d"""
    kind: str
    value: int
    d: int

    def __post_init__(self):
        if self.kind not in ('spin', 'fourier'):
            raise ValueError(f"unknown basis kind '{self.kind}'")
        object.__setattr__(self, 'value', self.value % self.d)

    def vector(self, root: complex) -> np.ndarray:
        if self.kind == 'spin':
            vec = np.zeros(self.d, dtype=complex)
            vec[self.value] = 1
            return vec
        return fourier_map(self.d, root)[:, self.value]


def max_norm(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def relative_residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    """
    Max-norm of lhs − rhs scaled by the larger max-norm of the two operands.

    The scale is floored at 1, so operands at rounding level (a relation whose
    both sides vanish) are compared absolutely.
    """
    scale = max(1.0, max_norm(lhs), max_norm(rhs))
    return max_norm(np.asarray(lhs) - np.asarray(rhs)) / scale


def scalar_fit(lhs: np.ndarray, rhs: np.ndarray) -> Tuple[complex, float]:
    """
    Fit lhs ≈ λ·rhs with λ read off the largest-magnitude entry of rhs.

    Returns:
        (λ, relative residual of lhs − λ·rhs)
    """
    flat = np.asarray(rhs).ravel()
    idx = int(np.argmax(np.abs(flat)))
    if flat[idx] == 0:
        return 0j, max_norm(lhs)
    scalar = complex(np.asarray(lhs).ravel()[idx] / flat[idx])
    return scalar, relative_residual(lhs, scalar * np.asarray(rhs))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def commutator_residual(a: np.ndarray, b: np.ndarray) -> float:
    """‖[a, b]‖ / (‖a‖‖b‖) in max-norm"""
    scale = max_norm(a) * max_norm(b)
    return max_norm(commutator(a, b)) / scale if scale else 0.0


def unitarity_residual(u: np.ndarray) -> float:
    return max_norm(u.conj().T @ u - np.eye(u.shape[1]))


def labels_with_sum(d: int, L: int, total: int) -> List[Tuple[int, ...]]:
    """All tuples in Z_d^L with Σ ≡ total, the first L−1 entries in lexicographic order"""
    labels = []
    for head in product(range(d), repeat=L - 1):
        labels.append(tuple(head) + ((total - sum(head)) % d,))
    return labels


def flat_index(labels: Iterable[int], d: int) -> int:
    """Position of |σ₁…σ_L⟩ in the kron_chain ordering"""
    idx = 0
    for value in labels:
        idx = idx * d + (value % d)
    return idx
