"""
Monodromy matrices, twisted-trace transfer matrices and sector bases.

Families and their traces:

    tau-cpm      τ⁽²⁾(t) = A(ωt) + ω^r D(ωt)          on (C^N)^{⊗L}
    xxz-cyclic   𝒯(s)    = 𝒜(s) + q^{−r′} 𝒟(s)        on (C^n)^{⊗L}
    t2-cyclic    t⁽²⁾(t) = A(ωt) + q^{−r′} D(ωt)      on (C^n)^{⊗L}
    t2-dagger    t†(t)   = A†(ωt) + ω^{−r′} D†(ωt)    on (C^n)^{⊗L}

The boundary twist enters only through the trace factor.
"""
import logging
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra.errors import BoundaryError, ParameterError
from algebra.lax import LaxOperator, lax_cpm, lax_cyclic_big, lax_tau, lax_xxz, xxz_prefactor
from algebra.qgroups import ParamTriple, UqGenerators, UwGenerators, uw_from_uq
from algebra.weyl_core import (
    RootSetup,
    chain_product,
    fourier_map,
    hat_pair,
    kron_chain,
    labels_with_sum,
    max_norm,
    relative_residual,
    scalar_fit,
)

logger = logging.getLogger(__name__)

FAMILIES = ('tau-cpm', 'xxz-cyclic', 't2-cyclic', 't2-dagger')
BLOCK_NAMES = ('A', 'B', 'C', 'D')

SitePair = Tuple[ParamTriple, ParamTriple]


@dataclass(frozen=True)
class ChainConfig:
    """
    An L-site chain: per-site (p′_ℓ, p_ℓ), boundary r ∈ Z_N and r′ ∈ Z_n.

    The periodic condition (p′_{L+1}, p_{L+1}) = (p′₁, p₁) is implicit in the
    site tuple. ``xi`` holds optional per-site spectral scalings.
    """
    setup: RootSetup
    sites: Tuple[SitePair, ...]
    r: int = 0
    r_prime: Optional[int] = None
    xi: Optional[Tuple[complex, ...]] = None

    def __post_init__(self):
        if len(self.sites) < 1:
            raise ParameterError("a chain needs at least one site")
        object.__setattr__(self, 'r', self.r % self.setup.N)
        r_prime = 2 * self.r if self.r_prime is None else self.r_prime
        object.__setattr__(self, 'r_prime', r_prime % self.setup.n)
        if self.xi is not None and len(self.xi) != len(self.sites):
            raise ParameterError(f"{len(self.xi)} spectral scalings for {len(self.sites)} sites")

    @classmethod
    def homogeneous(cls, setup: RootSetup, L: int, pp: ParamTriple, p: ParamTriple,
                    r: int = 0, r_prime: Optional[int] = None) -> 'ChainConfig':
        return cls(setup, tuple((pp, p) for _ in range(L)), r, r_prime)

    @property
    def L(self) -> int:
        return len(self.sites)

    def common_bb(self, tol: float = 1e-12) -> bool:
        """True when every site carries the same b′_ℓ b_ℓ"""
        values = [pp.b * p.b for pp, p in self.sites]
        return all(abs(v - values[0]) <= tol * abs(values[0]) for v in values)

    def with_sites(self, sites: Sequence[SitePair], **changes) -> 'ChainConfig':
        return replace(self, sites=tuple(sites), **changes)

    def to_json(self) -> Dict:
        return {
            'N': self.setup.N, 'n': self.setup.n, 'q_sign': self.setup.q_sign,
            'L': self.L, 'r': self.r, 'r_prime': self.r_prime,
            'sites': [{'p_prime': pp.to_json(), 'p': p.to_json()} for pp, p in self.sites],
        }


def site_laxes(cfg: ChainConfig, family: str) -> List[LaxOperator]:
    """Per-site L-operators of a family"""
    if family == 'tau-cpm':
        return [lax_cpm(pp, p, cfg.setup) for pp, p in cfg.sites]
    variants = {'xxz-cyclic': 'xxz', 't2-cyclic': 'tau', 't2-dagger': 'dagger'}
    if family not in variants:
        raise ValueError(f"unknown family '{family}', expected one of {FAMILIES}")
    return [lax_cyclic_big(pp, p, cfg.setup, variants[family]) for pp, p in cfg.sites]


def trace_factors(cfg: ChainConfig, family: str) -> Tuple[complex, complex]:
    """(spectral shift, twist factor) of the family's trace"""
    setup = cfg.setup
    if family == 'tau-cpm':
        return setup.omega, setup.omega ** cfg.r
    if family == 'xxz-cyclic':
        return 1.0, setup.q ** -cfg.r_prime
    if family == 't2-cyclic':
        return setup.omega, setup.q ** -cfg.r_prime
    if family == 't2-dagger':
        return setup.omega, setup.omega ** -cfg.r_prime
    raise ValueError(f"unknown family '{family}', expected one of {FAMILIES}")


@dataclass(frozen=True)
class Monodromy:
    """Ordered auxiliary-space product of per-site L-operators, site 1 leftmost"""
    laxes: Tuple[LaxOperator, ...]
    xi: Optional[Tuple[complex, ...]] = None
    max_dim: Optional[int] = None

    @property
    def L(self) -> int:
        return len(self.laxes)

    def evaluate(self, x: complex) -> np.ndarray:
        """Blocks [[A, B], [C, D]] at x, shape (2, 2, D, D)"""
        scalings = self.xi or (1.0,) * self.L
        blocks = self.laxes[0].evaluate(x * scalings[0])
        for lax, scale in zip(self.laxes[1:], scalings[1:]):
            site = lax.evaluate(x * scale)
            blocks = np.array([
                [sum(kron_chain([blocks[i, k], site[k, j]], self.max_dim) for k in range(2))
                 for j in range(2)]
                for i in range(2)
            ])
        return blocks

    def block(self, name: str, x: complex) -> np.ndarray:
        i, j = divmod(BLOCK_NAMES.index(name), 2)
        return self.evaluate(x)[i, j]


def monodromy(cfg: ChainConfig, family: str) -> Monodromy:
    return Monodromy(tuple(site_laxes(cfg, family)), cfg.xi)


def twisted_trace(laxes: Sequence[LaxOperator], x: complex, twist: complex,
                  shift: complex = 1.0, xi: Optional[Sequence[complex]] = None) -> np.ndarray:
    """A(shift·x) + twist·D(shift·x)"""
    blocks = Monodromy(tuple(laxes), None if xi is None else tuple(xi)).evaluate(shift * x)
    return blocks[0, 0] + twist * blocks[1, 1]


@dataclass(frozen=True)
class TransferMatrix:
    """A spectral-parameter family of dense transfer matrices"""
    family: str
    cfg: ChainConfig
    monodromy: Monodromy
    shift: complex
    twist: complex

    def __call__(self, x: complex) -> np.ndarray:
        blocks = self.monodromy.evaluate(self.shift * x)
        return blocks[0, 0] + self.twist * blocks[1, 1]

    @property
    def variable(self) -> str:
        return self.monodromy.laxes[0].variable


def transfer_matrix(cfg: ChainConfig, family: str) -> TransferMatrix:
    shift, twist = trace_factors(cfg, family)
    return TransferMatrix(family, cfg, monodromy(cfg, family), shift, twist)


def tau2_transfer(cfg: ChainConfig) -> TransferMatrix:
    return transfer_matrix(cfg, 'tau-cpm')


def xxz_transfer(cfg: ChainConfig) -> TransferMatrix:
    return transfer_matrix(cfg, 'xxz-cyclic')


def t2_transfer(cfg: ChainConfig) -> TransferMatrix:
    return transfer_matrix(cfg, 't2-cyclic')


def t2dag_transfer(cfg: ChainConfig) -> TransferMatrix:
    return transfer_matrix(cfg, 't2-dagger')


def charge_operator(setup: RootSetup, L: int, primed: bool) -> np.ndarray:
    """Ẑ = ⊗Ẑ_ℓ on (C^N)^{⊗L}, or Ẑ′ = ⊗Ẑ′_ℓ on (C^n)^{⊗L}"""
    if primed:
        Zp, _ = hat_pair(setup.n, setup.q)
        return chain_product(Zp, L)
    Z, _ = hat_pair(setup.N, setup.omega)
    return chain_product(Z, L)


def polynomial_coefficients(fn: Callable[[complex], np.ndarray], low: int, high: int,
                            radius: float = 1.0) -> Dict[int, np.ndarray]:
    """
    Laurent coefficients of fn for powers low..high, by sampling on a circle.

    fn must be a Laurent polynomial supported inside [low, high].
    """
    count = high - low + 1
    points = radius * np.exp(2j * np.pi * np.arange(count) / count)
    values = [fn(x) * x ** -low for x in points]
    coefficients = {}
    for m in range(count):
        total = sum(v * x ** -m for v, x in zip(values, points))
        coefficients[m + low] = total / count
    return coefficients


@dataclass(frozen=True)
class SectorBasis:
    """
    Orthonormal spin (hat product) and face bases of one sector.

    Unprimed: V_{r,Q} on (C^N)^{⊗L}, face labels Σn ≡ r.
    Primed: V′_{r′,Q′} on (C^n)^{⊗L}, face labels Σn ≡ −r′.
    Columns of ``spin_basis``/``face_basis`` are vectors in the kron_chain basis.
    """
    r: int
    Q: int
    primed: bool
    d: int
    hat_labels: Tuple[Tuple[int, ...], ...]
    face_labels: Tuple[Tuple[int, ...], ...]
    spin_basis: np.ndarray
    face_basis: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.hat_labels)

    def change_of_basis(self) -> np.ndarray:
        """Matrix of the face vectors in the spin basis"""
        return self.spin_basis.conj().T @ self.face_basis


def sector_basis(setup: RootSetup, L: int, r: int, Q: int, primed: bool = False) -> SectorBasis:
    """
    Sector bases; face vectors are

        |Q; n⟩  = N^{−1/2} Σ_{σ₁} ω^{−Qσ₁} |σ₁ … σ_L⟩,  σ_ℓ − σ_{ℓ+1} = n_ℓ
        |Q′; n⟩⟩ = n^{−1/2} Σ_{σ₁} q^{−Q′σ₁} |σ₁ … σ_L⟩⟩
    """
    d, root = (setup.n, setup.q) if primed else (setup.N, setup.omega)
    r, Q = r % d, Q % d
    F = fourier_map(d, root)

    hat_labels = labels_with_sum(d, L, Q)
    spin_basis = np.column_stack([kron_chain([F[:, k] for k in labels]) for labels in hat_labels])

    face_total = -r if primed else r
    face_labels = labels_with_sum(d, L, face_total)
    dim = d ** L
    face_basis = np.zeros((dim, len(face_labels)), dtype=complex)
    for col, labels in enumerate(face_labels):
        for sigma1 in range(d):
            sigma = [sigma1]
            for step in labels[:-1]:
                sigma.append((sigma[-1] - step) % d)
            idx = 0
            for value in sigma:
                idx = idx * d + value
            face_basis[idx, col] += root ** (-Q * sigma1) / np.sqrt(d)

    return SectorBasis(r, Q, primed, d, tuple(hat_labels), tuple(face_labels), spin_basis, face_basis)


def sector_restrict(T: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """B†·T·B for an orthonormal column basis B"""
    return basis.conj().T @ T @ basis


def sector_projector_residual(T: np.ndarray, basis: np.ndarray) -> float:
    """Norm of the part of T·B leaving span(B), relative to max(1, ‖T‖)"""
    image = T @ basis
    leak = image - basis @ (basis.conj().T @ image)
    return max_norm(leak) / max(1.0, max_norm(T))


def verify_lrelcy(cfg: ChainConfig, s: complex) -> Dict[str, complex]:
    """
    t⁽²⁾(s²) = (−sq⁻¹)^L (Π_ℓ c₀,ℓ) Ẑ′⁻¹ 𝒯(q⁻¹s).

    Raises:
        ParameterError: sites do not share b′_ℓ b_ℓ
    """
    if not cfg.common_bb():
        raise ParameterError("the XXZ/t⁽²⁾ relation needs a common b′b on every site")
    setup = cfg.setup
    q = setup.q
    lhs = t2_transfer(cfg)(s ** 2)
    c0_product = np.prod([xxz_prefactor(pp, p, setup)[0] for pp, p in cfg.sites])
    Zp_total = charge_operator(setup, cfg.L, primed=True)
    rhs = (-s / q) ** cfg.L * c0_product * Zp_total.conj().T @ xxz_transfer(cfg)(s / q)
    scalar, fitted = scalar_fit(lhs, rhs)
    return {'residual': relative_residual(lhs, rhs), 'scalar': scalar, 'scalar_residual': fitted}


def spin_chain_laxes(gen: UqGenerators, rhos: Sequence[complex], nu: complex,
                     nu_half: Optional[complex] = None) -> Tuple[List[LaxOperator], List[LaxOperator]]:
    """XXZ and τ-type L-operators of a spin chain with per-site ρ_ℓ and common ν"""
    nu_half = np.sqrt(complex(nu)) if nu_half is None else complex(nu_half)
    uw = uw_from_uq(gen)
    return ([lax_xxz(gen, rho, nu, nu_half) for rho in rhos],
            [lax_tau(uw, rho, nu) for rho in rhos])


def verify_tau_t_spin(gen: UqGenerators, rhos: Sequence[complex], nu: complex, s: complex,
                      r: int = 0, nu_half: Optional[complex] = None) -> Dict[str, float]:
    """
    τ⁽²⁾(s²) = (−q⁻¹s)^L ν^{L/2} K^{−1/2} 𝐓(q⁻¹s) for a spin chain, with

        𝐓(s) = 𝐀(s) + q^{−2r}𝐃(s),   τ⁽²⁾(t) = A(wt) + w^r D(wt).

    Also reports the K-commutation residuals of both transfer matrices.
    """
    q = gen.q
    w = q ** -2
    nu_half = np.sqrt(complex(nu)) if nu_half is None else complex(nu_half)
    xxz_laxes, tau_laxes = spin_chain_laxes(gen, rhos, nu, nu_half)
    L = len(rhos)

    tau = twisted_trace(tau_laxes, s ** 2, w ** r, shift=w)
    T_shifted = twisted_trace(xxz_laxes, s / q, q ** (-2 * r))
    Khalf_inv = chain_product(gen.KhalfInv, L)
    rhs = (-s / q) ** L * nu_half ** L * Khalf_inv @ T_shifted

    T_s = twisted_trace(xxz_laxes, s, q ** (-2 * r))
    Khalf = chain_product(gen.Khalf, L)
    K = Khalf @ Khalf
    return {
        'relation': relative_residual(tau, rhs),
        'xxz_k_commutation': max_norm(T_s @ Khalf - Khalf @ T_s) / max(max_norm(T_s), 1.0),
        'tau_k_commutation': max_norm(tau @ K - K @ tau) / max(max_norm(tau), 1.0),
    }


def inhomogeneous_reduce(nus: Sequence[complex], nu: complex) -> Tuple[complex, ...]:
    """Scalings ξ_ℓ = ν_ℓ/ν with L(t; ρ, ν_ℓ) = L(ξ_ℓ t; ρ, ν)"""
    if nu == 0 or any(v == 0 for v in nus):
        raise ParameterError("ν and every ν_ℓ must be nonzero")
    return tuple(complex(v / nu) for v in nus)


def verify_inhomogeneous_tau(gens: Sequence[UwGenerators], rhos: Sequence[complex],
                             nus: Sequence[complex], nu: complex, t: complex, twist: complex) -> float:
    """τ⁽²⁾(t; {ρ_ℓ, ν_ℓ}) against τ⁽²⁾(ξ₁t, …, ξ_L t) built with a common ν"""
    xi = inhomogeneous_reduce(nus, nu)
    w = gens[0].w
    direct = [lax_tau(g, rho, nu_l) for g, rho, nu_l in zip(gens, rhos, nus)]
    reduced = [lax_tau(g, rho, nu) for g, rho in zip(gens, rhos)]
    lhs = twisted_trace(direct, t, twist, shift=w)
    rhs = twisted_trace(reduced, t, twist, shift=w, xi=xi)
    return relative_residual(lhs, rhs)


def verify_inhomogeneous_xxz(gen: UqGenerators, rhos: Sequence[complex], nus: Sequence[complex],
                             nu: complex, s: complex, twist: complex) -> float:
    """
    𝐓(s; {ρ_ℓ, ν_ℓ}) against 𝐓(ξ₁^{1/2}s, …) with a common ν.

    ν_ℓ^{1/2} is taken as ξ_ℓ^{1/2}ν^{1/2} with the principal ξ_ℓ^{1/2}.
    """
    xi = inhomogeneous_reduce(nus, nu)
    xi_half = tuple(complex(np.sqrt(x)) for x in xi)
    nu_half = complex(np.sqrt(complex(nu)))
    direct = [lax_xxz(gen, rho, nu_l, h * nu_half) for rho, nu_l, h in zip(rhos, nus, xi_half)]
    reduced = [lax_xxz(gen, rho, nu, nu_half) for rho in rhos]
    return relative_residual(twisted_trace(direct, s, twist), twisted_trace(reduced, s, twist, xi=xi_half))


def check_boundary(cfg: ChainConfig, relation: str):
    """
    Raises:
        BoundaryError: r′ ≢ 2r (mod n) for 'plain', or r′ ≢ −r (mod N) for 'dagger'
    """
    setup = cfg.setup
    if relation == 'plain' and (cfg.r_prime - 2 * cfg.r) % setup.n:
        raise BoundaryError(f"r′={cfg.r_prime} is not 2r={2 * cfg.r} mod {setup.n}")
    if relation == 'dagger' and (cfg.r_prime + cfg.r) % setup.N:
        raise BoundaryError(f"r′={cfg.r_prime} is not −r={-cfg.r} mod {setup.N}")
