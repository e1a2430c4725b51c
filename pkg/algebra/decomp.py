"""
Cyclic N-subspaces of C^n and the decomposition of the n-dimensional chains.

Every matrix here is written in spin coordinates. An embedding B maps C^N into
C^n and its projection ℘ maps C^n onto C^N with ℘B = 1:

    plus / minus           B|σ⟩ = |σ⟩⟩±,   ℘±|k̂⟩⟩ = |k̂⟩ or q^{−k}|k̂⟩
    dagger-plus / -minus   B|σ⟩ = |σ⟩⟩†±,  ℘†±|σ⟩⟩ = |σ⟩ or q^{σ}|σ⟩

A multi-index i⃗ ∈ {0, 1}^L picks the plus (0) or minus (1) subspace per site.
"""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from algebra.errors import EigenSolverError, RootOfUnityError
from algebra.lax import SPECTRAL_SAMPLES, lax_cpm, xxz_prefactor
from algebra.qgroups import site_pair, twist
from algebra.transfer import (
    ChainConfig,
    Monodromy,
    charge_operator,
    check_boundary,
    monodromy,
    sector_basis,
    t2_transfer,
    t2dag_transfer,
    tau2_transfer,
    trace_factors,
    xxz_transfer,
)
from algebra.weyl_core import (
    RootSetup,
    fourier_map,
    hat_pair,
    kron_chain,
    max_norm,
    relative_residual,
    weyl_pair,
)
from config.settings import settings

logger = logging.getLogger(__name__)

EMBEDDING_KINDS = ('plus', 'minus', 'dagger-plus', 'dagger-minus')

MultiIndex = Tuple[int, ...]


def multi_indices(L: int) -> List[MultiIndex]:
    return list(product((0, 1), repeat=L))


def shifted(i_vec: Sequence[int]) -> MultiIndex:
    """i⃗ + 1⃗ componentwise mod 2"""
    return tuple((i + 1) % 2 for i in i_vec)


@dataclass(frozen=True)
class SubspaceEmbedding:
    kind: str
    setup: RootSetup
    basis: np.ndarray
    projection: np.ndarray

    @property
    def dagger(self) -> bool:
        return self.kind.startswith('dagger')

    @property
    def minus(self) -> bool:
        return self.kind.endswith('minus')

    @property
    def c_n(self) -> float:
        return self.setup.c_n

    def weyl_relations(self) -> Dict[str, float]:
        """
        Intertwining of the Weyl operators of C^n and C^N:

            plain:   ℘X′⁻² = X℘,   ℘Z′ = q^i Z℘
            dagger:  ℘X′ = q^i X℘,  ℘Z′⁻² = Z℘
        """
        setup = self.setup
        Xn, Zn = weyl_pair(setup.n, setup.q)
        XN, ZN = weyl_pair(setup.N, setup.omega)
        factor = setup.q if self.minus else 1.0
        P = self.projection
        if self.dagger:
            Zn_inv = Zn.conj().T
            return {
                'x_prime': relative_residual(P @ Xn, factor * XN @ P),
                'z_prime_squared': relative_residual(P @ Zn_inv @ Zn_inv, ZN @ P),
            }
        Xn_inv = Xn.conj().T
        return {
            'x_prime_squared': relative_residual(P @ Xn_inv @ Xn_inv, XN @ P),
            'z_prime': relative_residual(P @ Zn, factor * ZN @ P),
        }

    def isomorphism_residual(self) -> float:
        """‖℘B − 1‖"""
        return max_norm(self.projection @ self.basis - np.eye(self.setup.N))


def embedding(setup: RootSetup, kind: str) -> SubspaceEmbedding:
    """Basis vectors and projection of C±, or of C†± for the dagger kinds"""
    if kind not in EMBEDDING_KINDS:
        raise ValueError(f"unknown embedding kind '{kind}', expected one of {EMBEDDING_KINDS}")
    N, n, q = setup.N, setup.n, setup.q
    minus = kind.endswith('minus')

    if kind.startswith('dagger'):
        S = np.zeros((n, N), dtype=complex)
        P = np.zeros((N, n), dtype=complex)
        for sigma in range(N):
            S[sigma, sigma] += 0.5 * (q ** -sigma if minus else 1)
            S[(sigma + N) % n, sigma] += 0.5 * (q ** (-sigma - N) if minus else 1)
        for sigma in range(n):
            P[sigma % N, sigma] = q ** sigma if minus else 1
        return SubspaceEmbedding(kind, setup, S, P)

    hat_basis = np.zeros((n, N), dtype=complex)
    hat_projection = np.zeros((N, n), dtype=complex)
    for k in range(N):
        hat_basis[k % n, k] += 0.5 * (q ** k if minus else 1)
        hat_basis[(k + N) % n, k] += 0.5 * (q ** (k + N) if minus else 1)
    for k in range(n):
        hat_projection[k % N, k] = q ** -k if minus else 1
    Fn = fourier_map(n, q)
    FN = fourier_map(N, setup.omega)
    return SubspaceEmbedding(kind, setup,
                             Fn @ hat_basis @ FN.conj().T,
                             FN @ hat_projection @ Fn.conj().T)


@dataclass(frozen=True)
class ChainSubspace:
    """⊗_ℓ C^{(−1)^{i_ℓ}} (or its dagger analogue) with basis B_{i⃗} and projection ℘_{i⃗}"""
    i_vec: MultiIndex
    kind: str
    basis: np.ndarray
    projection: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def chain_subspace(setup: RootSetup, i_vec: Sequence[int], kind: str = 'plain') -> ChainSubspace:
    if kind not in ('plain', 'dagger'):
        raise ValueError(f"unknown chain subspace kind '{kind}'")
    prefix = 'dagger-' if kind == 'dagger' else ''
    sites = [embedding(setup, prefix + ('minus' if i % 2 else 'plus')) for i in i_vec]
    return ChainSubspace(
        tuple(i % 2 for i in i_vec), kind,
        kron_chain([e.basis for e in sites]),
        kron_chain([e.projection for e in sites]),
    )


def direct_sum_rank(setup: RootSetup, L: int, kind: str = 'plain') -> Tuple[int, int]:
    """(rank of all B_{i⃗} side by side, sum of their dimensions)"""
    bases = [chain_subspace(setup, i_vec, kind).basis for i_vec in multi_indices(L)]
    stacked = np.hstack(bases)
    return scipy.linalg.orth(stacked).shape[1], stacked.shape[1]


def z_prime_transfer(setup: RootSetup, i_vec: Sequence[int]) -> np.ndarray:
    """℘_{i⃗+1}·Ẑ′·B_{i⃗}, equal to Π_ℓ Ẑ_ℓ^{−i_ℓ}"""
    source = chain_subspace(setup, i_vec)
    target = chain_subspace(setup, shifted(i_vec))
    return target.projection @ charge_operator(setup, len(i_vec), primed=True) @ source.basis


def x_prime_transfer(setup: RootSetup, i_vec: Sequence[int]) -> np.ndarray:
    """℘†_{i⃗+1}·X̂′·B†_{i⃗}, equal to Π_ℓ Z_ℓ^{i_ℓ}"""
    source = chain_subspace(setup, i_vec, 'dagger')
    target = chain_subspace(setup, shifted(i_vec), 'dagger')
    _, Xp = hat_pair(setup.n, setup.q)
    return target.projection @ kron_chain([Xp] * len(i_vec)) @ source.basis


def _site_monomial(i_vec: Sequence[int], op: np.ndarray, sign: int) -> np.ndarray:
    return kron_chain([np.linalg.matrix_power(op, sign * i) for i in i_vec])


def _reduced_monodromy(cfg: ChainConfig, i_vec: Sequence[int], dagger: bool) -> Monodromy:
    sites = [site_pair(pp, p, i, cfg.setup, dagger) for (pp, p), i in zip(cfg.sites, i_vec)]
    return Monodromy(tuple(lax_cpm(pp, p, cfg.setup) for pp, p in sites), cfg.xi)


def _intertwining(cfg: ChainConfig, i_vec: Sequence[int], dagger: bool,
                  points: Sequence[complex]) -> Dict[str, float]:
    family = 't2-dagger' if dagger else 't2-cyclic'
    sub = chain_subspace(cfg.setup, i_vec, 'dagger' if dagger else 'plain')
    big = monodromy(cfg, family)
    small = _reduced_monodromy(cfg, i_vec, dagger)
    shift, twist_factor = trace_factors(cfg, family)
    B, P = sub.basis, sub.projection

    blocks = invariance = trace = 0.0
    for x in points:
        M_big = big.evaluate(x)
        M_small = small.evaluate(x)
        for i in range(2):
            for j in range(2):
                image = M_big[i, j] @ B
                blocks = max(blocks, relative_residual(P @ image, M_small[i, j]))
                scale = max(1.0, max_norm(M_big[i, j]))
                invariance = max(invariance, max_norm(image - B @ (P @ image)) / scale)
        M_big = big.evaluate(shift * x)
        M_small = small.evaluate(shift * x)
        reduced = P @ (M_big[0, 0] + twist_factor * M_big[1, 1]) @ B
        expected = M_small[0, 0] + cfg.setup.omega ** cfg.r * M_small[1, 1]
        trace = max(trace, relative_residual(reduced, expected))

    return {
        'blocks': blocks,
        'invariance': invariance,
        'trace': trace,
        'projection': max_norm(P @ B - np.eye(B.shape[1])),
    }


def verify_t2cyl(cfg: ChainConfig, i_vec: Sequence[int],
                 points: Sequence[complex] = SPECTRAL_SAMPLES) -> Dict[str, float]:
    """
    ℘_{i⃗}·t⁽²⁾(t)|_{C^{i⃗}} = τ⁽²⁾(t; {p′_{i_ℓ}}, {p_{i_ℓ}}) blockwise and on the trace,
    plus ℘_{i⃗}Ẑ′⁻² = Ẑ℘_{i⃗}.

    Raises:
        BoundaryError: r′ ≢ 2r (mod n)
    """
    check_boundary(cfg, 'plain')
    setup, L = cfg.setup, cfg.L
    result = _intertwining(cfg, i_vec, dagger=False, points=points)
    sub = chain_subspace(setup, i_vec)
    Zp_inv = charge_operator(setup, L, primed=True).conj().T
    result['charge'] = relative_residual(sub.projection @ Zp_inv @ Zp_inv,
                                         charge_operator(setup, L, primed=False) @ sub.projection)
    logger.debug("t2cyl %s i=%s: %s", setup.label(), i_vec, result)
    return result


def _eigenpairs(M: np.ndarray, tol: float) -> List[Tuple[complex, np.ndarray]]:
    values, vectors = scipy.linalg.eig(M)
    pairs = []
    scale = max(max_norm(M), 1.0)
    for k, value in enumerate(values):
        vec = vectors[:, k]
        if np.linalg.norm(M @ vec - value * vec) > tol * scale * np.linalg.norm(vec):
            raise EigenSolverError(f"eigenpair {k} of a {M.shape[0]}-dimensional block fails its residual")
        pairs.append((complex(value), vec))
    return pairs


def verify_pairing(cfg: ChainConfig, i_vec: Sequence[int], s: complex, eigen: bool = False,
                   orientation: str = 'forward', points: Sequence[complex] = SPECTRAL_SAMPLES,
                   eigen_tol: Optional[float] = None) -> Dict[str, float]:
    """
    Pairing of C^{i⃗} and C^{i⃗+1} through Ẑ′.

    Operator level: ℘_{i⃗}t⁽²⁾B_{i⃗} = D⁻¹·℘_{i⃗+1}t⁽²⁾B_{i⃗+1}·D with
    D = ℘_{i⃗+1}Ẑ′B_{i⃗} = ΠẐ_ℓ^{−i_ℓ}.

    Eigen level (n = 2N): an eigenvector v_{i⃗} of t⁽²⁾(ω⁻¹s²) in charge sector Q
    gives the 𝒯(s)-eigenvectors v_{i⃗} ± q^{−Q}Ẑ′v_{i⃗} with eigenvalues
    ±q^Q(−s)^{−L}(Πc₀)⁻¹λ and Ẑ′-charges Q, Q+N. ``orientation='reverse'``
    starts from v_{i⃗+1} and uses v_{i⃗+1} ± q^Q Ẑ′⁻¹v_{i⃗+1}.

    Raises:
        BoundaryError: r′ ≢ 2r (mod n)
        EigenSolverError: an eigenpair misses its residual bound
    """
    check_boundary(cfg, 'plain')
    if orientation not in ('forward', 'reverse'):
        raise ValueError(f"unknown orientation '{orientation}'")
    setup, L = cfg.setup, cfg.L
    source = chain_subspace(setup, i_vec)
    target = chain_subspace(setup, shifted(i_vec))
    t2 = t2_transfer(cfg)
    Zp = charge_operator(setup, L, primed=True)

    D = target.projection @ Zp @ source.basis
    Z_hat, _ = hat_pair(setup.N, setup.omega)
    expected_D = _site_monomial(i_vec, Z_hat, -1)
    D_inv = np.linalg.inv(D)
    operator = 0.0
    for t in points:
        T = t2(t)
        M_source = source.projection @ T @ source.basis
        M_target = target.projection @ T @ target.basis
        operator = max(operator, relative_residual(M_source, D_inv @ M_target @ D))
    result = {'operator': operator, 'z_prime_transfer': relative_residual(D, expected_D)}

    if not eigen:
        return result
    if setup.is_odd:
        logger.warning("eigenvector pairing only applies for n = 2N, skipped for %s", setup.label())
        return result

    tol = settings.EIGEN_TOLERANCE if eigen_tol is None else eigen_tol
    q = setup.q
    c0_product = np.prod([xxz_prefactor(pp, p, setup)[0] for pp, p in cfg.sites])
    T = t2(s ** 2 / setup.omega)
    script_T = xxz_transfer(cfg)(s)
    start = source if orientation == 'forward' else target
    Zp_inv = Zp.conj().T

    eigen_res = charge_res = 0.0
    pairs = 0
    for Q in range(setup.N):
        H = sector_basis(setup, L, cfg.r, Q).spin_basis
        M = H.conj().T @ start.projection @ T @ start.basis @ H
        for lam, w in _eigenpairs(M, tol):
            v = start.basis @ H @ w
            partner = Zp @ v if orientation == 'forward' else Zp_inv @ v
            for sign in (1, -1):
                coeff = sign * q ** (-Q if orientation == 'forward' else Q)
                x = v + coeff * partner
                mu = sign * q ** Q * (-s) ** -L / c0_product * lam
                norm = np.linalg.norm(x)
                eigen_res = max(eigen_res,
                                np.linalg.norm(script_T @ x - mu * x) / (norm * max(1.0, abs(mu))))
                charge_res = max(charge_res, np.linalg.norm(Zp @ x - sign * q ** Q * x) / norm)
                pairs += 1
    result.update({'eigenvector': float(eigen_res), 'charge': float(charge_res), 'pairs': float(pairs)})
    logger.debug("pairing %s i=%s (%s): %d vectors", setup.label(), i_vec, orientation, pairs)
    return result


def verify_xxzt_odd(cfg: ChainConfig, s: complex) -> float:
    """
    n = N odd: ℘·𝒯(s)·℘⁻¹ = (−s)^{−L}(Πc₀)⁻¹·Ẑ^{(N−1)/2}·τ⁽²⁾(ω⁻¹s²).

    Raises:
        RootOfUnityError: n ≠ N
        BoundaryError: r′ ≢ 2r (mod n)
    """
    setup = cfg.setup
    if not setup.is_odd:
        raise RootOfUnityError(f"the odd-n XXZ relation needs n = N, got {setup.label()}")
    check_boundary(cfg, 'plain')
    L = cfg.L
    sub = chain_subspace(setup, (0,) * L)
    c0_product = np.prod([xxz_prefactor(pp, p, setup)[0] for pp, p in cfg.sites])
    lhs = sub.projection @ xxz_transfer(cfg)(s) @ sub.basis
    Z_power = np.linalg.matrix_power(charge_operator(setup, L, primed=False), (setup.N - 1) // 2)
    rhs = (-s) ** -L / c0_product * Z_power @ tau2_transfer(cfg)(s ** 2 / setup.omega)
    return relative_residual(lhs, rhs)


def verify_t2dag(cfg: ChainConfig, i_vec: Sequence[int],
                 points: Sequence[complex] = SPECTRAL_SAMPLES) -> Dict[str, float]:
    """
    Dagger decomposition and the X̂′ pairing:

        ℘†_{i⃗}·t†(t)|_{C†^{i⃗}} = τ⁽²⁾(t; (p′, p) or (p′, p[1]) per site)
        X̂′⁻¹·t†(p′, p)·X̂′ = t†(p′, p[1])
        ℘†_{i⃗+1}X̂′B†_{i⃗} = ΠZ_ℓ^{i_ℓ} =: D
        ℘†_{i⃗+1}t†B†_{i⃗+1}·D = D·℘†_{i⃗}t†(p′, p[1])B†_{i⃗}

    Raises:
        BoundaryError: r′ ≢ −r (mod N)
    """
    check_boundary(cfg, 'dagger')
    setup, L = cfg.setup, cfg.L
    result = _intertwining(cfg, i_vec, dagger=True, points=points)

    sub = chain_subspace(setup, i_vec, 'dagger')
    Zp_total = charge_operator(setup, L, primed=True)
    minus_count = sum(i % 2 for i in i_vec)
    result['charge'] = relative_residual(
        sub.projection @ Zp_total,
        setup.q ** minus_count * charge_operator(setup, L, primed=False) @ sub.projection)

    shifted_cfg = cfg.with_sites([(pp, twist(p, 1, 'square', setup)) for pp, p in cfg.sites])
    _, Xp = hat_pair(setup.n, setup.q)
    Xp_total = kron_chain([Xp] * L)
    t_dag = t2dag_transfer(cfg)
    t_dag_shifted = t2dag_transfer(shifted_cfg)

    _, Z = weyl_pair(setup.N, setup.omega)
    D = _site_monomial(i_vec, Z, 1)
    result['x_prime_transfer'] = relative_residual(x_prime_transfer(setup, i_vec), D)

    target = chain_subspace(setup, shifted(i_vec), 'dagger')
    conjugation = pairing = 0.0
    for t in points:
        T = t_dag(t)
        T_shifted = t_dag_shifted(t)
        conjugation = max(conjugation, relative_residual(Xp_total.conj().T @ T @ Xp_total, T_shifted))
        M_next = target.projection @ T @ target.basis
        M_tilde = sub.projection @ T_shifted @ sub.basis
        pairing = max(pairing, relative_residual(M_next @ D, D @ M_tilde))
    result.update({'conjugation': conjugation, 'pairing': pairing})
    logger.debug("t2dag %s i=%s: %s", setup.label(), i_vec, result)
    return result


def lifted_sector(setup: RootSetup, L: int, r: int, Q: int, i_vec: Sequence[int],
                  kind: str = 'plain') -> np.ndarray:
    """Columns spanning C^{i⃗}_{r,Q}: the chain embedding applied to the face basis of V_{r,Q}"""
    return chain_subspace(setup, i_vec, kind).basis @ sector_basis(setup, L, r, Q).face_basis


def sector_occupancy(setup: RootSetup, L: int, r: int, Q: int, i_vec: Sequence[int],
                     kind: str = 'plain', tol: float = 1e-12) -> Dict[int, float]:
    """Share of C^{i⃗}_{r,Q} in each Ẑ′-charge sector Q′ of (C^n)^{⊗L}, zeros dropped"""
    vectors = lifted_sector(setup, L, r, Q, i_vec, kind)
    total = np.linalg.norm(vectors) ** 2
    occupancy = {}
    for Q_prime in range(setup.n):
        H = sector_basis(setup, L, 0, Q_prime, primed=True).spin_basis
        share = float(np.linalg.norm(H.conj().T @ vectors) ** 2 / total)
        if share > tol:
            occupancy[Q_prime] = share
    return occupancy
