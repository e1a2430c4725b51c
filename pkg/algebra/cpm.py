"""
Chiral Potts rapidities, Boltzmann weights and transfer matrices.

A rapidity p = (x, y, μ) on the curve W_{k′} satisfies

    k x^N = 1 − k′μ^{−N},   k y^N = 1 − k′μ^N,   k² + k′² = 1.

Its τ⁽²⁾ parameters are the triple (a, b, d) = (x, y, μ), so a vertical pair
(p′, p) gives (a′, b′, a, b, c) = (x_{p′}, y_{p′}, x_p, y_p, μ_{p′}μ_p).
"""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra.decomp import chain_subspace
from algebra.errors import ParameterError
from algebra.lax import lax_cpm
from algebra.qgroups import ParamTriple
from algebra.transfer import (
    ChainConfig,
    charge_operator,
    sector_basis,
    t2_transfer,
    tau2_transfer,
    twisted_trace,
)
from algebra.weyl_core import RootSetup, chain_product, relative_residual, weyl_pair
from config.settings import settings

logger = logging.getLogger(__name__)

POLE_GUARD = 1e-6
CURVE_CHECK = 1e-10

Vertical = Tuple['Rapidity', 'Rapidity']


@dataclass(frozen=True)
class Rapidity:
    x: complex
    y: complex
    mu: complex
    k_prime: complex
    k: complex
    N: int

    @property
    def t(self) -> complex:
        return self.x * self.y

    @property
    def omega(self) -> complex:
        return complex(np.exp(2j * np.pi / self.N))

    def curve_residual(self) -> float:
        k, kp, N = self.k, self.k_prime, self.N
        return float(max(
            abs(k * self.x ** N - 1 + kp * self.mu ** -N),
            abs(k * self.y ** N - 1 + kp * self.mu ** N),
            abs(k ** 2 + kp ** 2 - 1),
        ))

    def on_curve(self, tol: float = CURVE_CHECK) -> bool:
        return self.curve_residual() <= tol

    def shift_x(self, power: int = 1) -> 'Rapidity':
        """U^power: (x, y, μ) → (ω^power x, y, μ)"""
        return self._replace(x=self.x * self.omega ** power)

    def shift_y(self, power: int = 1) -> 'Rapidity':
        """U′^power: (x, y, μ) → (x, ω^power y, μ)"""
        return self._replace(y=self.y * self.omega ** power)

    def triple(self) -> ParamTriple:
        return ParamTriple(self.x, self.y, self.mu)

    def _replace(self, **changes) -> 'Rapidity':
        fields = dict(x=self.x, y=self.y, mu=self.mu, k_prime=self.k_prime, k=self.k, N=self.N)
        fields.update(changes)
        return Rapidity(**fields)

    def to_json(self) -> Dict[str, list]:
        return {name: [float(np.real(v)), float(np.imag(v))]
                for name, v in (('x', self.x), ('y', self.y), ('mu', self.mu),
                                ('k_prime', self.k_prime), ('k', self.k))}


def modulus_k(k_prime: complex, k_sign: int = 1) -> complex:
    """
    k with k² = 1 − k′², principal branch times ``k_sign``.

    Raises:
        ParameterError: k′² ∈ {0, 1}
    """
    kp2 = complex(k_prime) ** 2
    if abs(kp2) < settings.CURVE_TOLERANCE or abs(kp2 - 1) < settings.CURVE_TOLERANCE:
        raise ParameterError(f"degenerate curve modulus k′ = {k_prime}")
    return k_sign * complex(np.sqrt(1 - kp2))


def rapidity_from(k_prime: complex, mu: complex, N: int, branch: int = 0, y_branch: int = 0,
                  k_sign: int = 1) -> Rapidity:
    """x = ((1 − k′μ^{−N})/k)^{1/N}·ω^branch, y likewise with ω^y_branch"""
    k = modulus_k(k_prime, k_sign)
    omega = complex(np.exp(2j * np.pi / N))
    mu = complex(mu)
    x = complex(np.power((1 - k_prime * mu ** -N) / k, 1 / N)) * omega ** branch
    y = complex(np.power((1 - k_prime * mu ** N) / k, 1 / N)) * omega ** y_branch
    return Rapidity(x, y, mu, complex(k_prime), k, N)


def dual_moduli(k_prime: complex, k: complex) -> Tuple[complex, complex]:
    """Curve of dual rapidities: (1/k′, ik/k′)"""
    return 1 / k_prime, 1j * k / k_prime


def dual_rapidity(p: Rapidity) -> Rapidity:
    """p* = (αx μ, αy/μ, 1/μ) with α = e^{iπ/2N}, on W_{1/k′}"""
    alpha = complex(np.exp(1j * np.pi / (2 * p.N)))
    k_prime, k = dual_moduli(p.k_prime, p.k)
    return Rapidity(alpha * p.x * p.mu, alpha * p.y / p.mu, 1 / p.mu, k_prime, k, p.N)


def draw_rapidity(rng: np.random.Generator, k_prime: complex, N: int,
                  avoid: Sequence[Rapidity] = ()) -> Rapidity:
    """Random on-curve rapidity kept away from the poles of the weights against ``avoid``"""
    for _ in range(100):
        mu = rng.uniform(0.7, 1.3) * np.exp(2j * np.pi * rng.uniform())
        p = rapidity_from(k_prime, mu, N, branch=int(rng.integers(N)), y_branch=int(rng.integers(N)))
        if all(_separated(p, other) for other in avoid):
            return p
    raise ParameterError("could not draw a rapidity away from the weight poles")


def _separated(p: Rapidity, q: Rapidity) -> bool:
    omega = p.omega
    gaps = [p.y - omega ** j * q.x for j in range(p.N)] + [q.y - omega ** j * p.x for j in range(p.N)]
    gaps += [p.y - omega ** j * q.y for j in range(p.N)] + [p.x - omega ** j * q.x for j in range(p.N)]
    gaps.append(p.t - q.t)
    return min(abs(g) for g in gaps) > POLE_GUARD * 1e3


def _weight_table(p: Rapidity, q: Rapidity, bar: bool, upto: int) -> np.ndarray:
    omega = p.omega
    j = np.arange(1, upto + 1)
    if bar:
        num = omega * p.x - omega ** j * q.x
        den = q.y - omega ** j * p.y
        scale = p.mu * q.mu
    else:
        num = q.y - omega ** j * p.x
        den = p.y - omega ** j * q.x
        scale = p.mu / q.mu
    if np.min(np.abs(den)) < POLE_GUARD:
        raise ParameterError("rapidities sit on a pole of the Boltzmann weights")
    return np.concatenate([[1.0 + 0j], np.cumprod(scale * num / den)])


@dataclass(frozen=True)
class WeightPair:
    """W_pq(σ) and W̄_pq(σ) for σ ∈ Z_N, normalized to 1 at σ = 0"""
    W: np.ndarray
    W_bar: np.ndarray
    periodicity: float

    @property
    def N(self) -> int:
        return len(self.W)

    @property
    def W_fourier(self) -> np.ndarray:
        """W^{(f)}(k) = Σ_σ ω^{kσ} W(σ)"""
        return np.fft.ifft(self.W) * self.N

    @property
    def W_bar_fourier(self) -> np.ndarray:
        return np.fft.ifft(self.W_bar) * self.N

    def to_json(self) -> Dict[str, list]:
        return {
            'W': [[float(v.real), float(v.imag)] for v in self.W],
            'W_bar': [[float(v.real), float(v.imag)] for v in self.W_bar],
        }


def boltzmann(p: Rapidity, q: Rapidity) -> WeightPair:
    """
    W_pq(σ) = (μ_p/μ_q)^σ Π_{j≤σ} (y_q − ω^j x_p)/(y_p − ω^j x_q)
    W̄_pq(σ) = (μ_pμ_q)^σ Π_{j≤σ} (ωx_p − ω^j x_q)/(y_q − ω^j y_p)

    ``periodicity`` is max |W(N) − 1|, |W̄(N) − 1|, zero for on-curve pairs.
    """
    N = p.N
    W = _weight_table(p, q, bar=False, upto=N)
    W_bar = _weight_table(p, q, bar=True, upto=N)
    periodicity = float(max(abs(W[N] - 1), abs(W_bar[N] - 1)))
    return WeightPair(W[:N], W_bar[:N], periodicity)


def _check_on_curve(rapidities: Sequence[Rapidity]):
    for p in rapidities:
        if not p.on_curve():
            raise ParameterError(f"rapidity off its curve (residual {p.curve_residual():.2e})")


def cpm_transfer(kind: str, q: Rapidity, verticals: Sequence[Vertical], r: int = 0) -> np.ndarray:
    """
    Chiral Potts transfer matrices on (C^N)^{⊗L}, boundary σ_{L+1} = σ₁ − r:

        T_{σσ′}  = Π_ℓ W_{p_ℓ q}(σ_ℓ − σ′_ℓ) W̄_{p′_{ℓ+1} q}(σ_{ℓ+1} − σ′_ℓ)
        T̂_{σσ′} = Π_ℓ W̄_{p_ℓ q}(σ_ℓ − σ′_ℓ) W_{p′_{ℓ+1} q}(σ_ℓ − σ′_{ℓ+1})

    ``verticals`` lists (p′_ℓ, p_ℓ).

    Raises:
        ParameterError: an off-curve rapidity
    """
    if kind not in ('T', 'That'):
        raise ValueError(f"unknown transfer kind '{kind}'")
    _check_on_curve([q] + [v for pair in verticals for v in pair])
    N, L = q.N, len(verticals)
    own = [boltzmann(p, q) for _, p in verticals]
    nxt = [boltzmann(verticals[(l + 1) % L][0], q) for l in range(L)]

    states = list(product(range(N), repeat=L))
    result = np.ones((len(states), len(states)), dtype=complex)
    for row, sigma in enumerate(states):
        sigma_next = list(sigma[1:]) + [sigma[0] - r]
        for col, sigma_p in enumerate(states):
            sigma_p_next = list(sigma_p[1:]) + [sigma_p[0] - r]
            value = 1.0 + 0j
            for l in range(L):
                if kind == 'T':
                    value *= own[l].W[(sigma[l] - sigma_p[l]) % N]
                    value *= nxt[l].W_bar[(sigma_next[l] - sigma_p[l]) % N]
                else:
                    value *= own[l].W_bar[(sigma[l] - sigma_p[l]) % N]
                    value *= nxt[l].W[(sigma[l] - sigma_p_next[l]) % N]
            result[row, col] = value
    return result


def _guarded(value: complex, what: str) -> complex:
    if abs(value) < POLE_GUARD:
        raise ParameterError(f"pole of {what} at the sampled rapidity")
    return value


def phi_functions(q: Rapidity, verticals: Sequence[Vertical]) -> Dict[str, complex]:
    """φ_q, φ̄_q, φ′_q and φ̄′_q as products over the verticals"""
    omega = q.omega
    phi = phi_bar = phi_prime = phi_bar_prime = 1.0 + 0j
    for pp, p in verticals:
        yy = p.y * pp.y
        phi *= (pp.t - q.t) * (p.y - omega * q.x) / (yy * _guarded(pp.x - q.x, 'φ'))
        phi_bar *= omega * pp.mu * p.mu * (p.t - q.t) * (pp.x - q.x) / (yy * _guarded(p.y - omega * q.x, 'φ̄'))
        phi_prime *= omega * p.mu * pp.mu * (pp.t - q.t) * (p.x - q.y) / (yy * _guarded(pp.y - q.y, 'φ′'))
        phi_bar_prime *= (p.t - q.t) * (pp.y - q.y) / (yy * _guarded(p.x - q.y, 'φ̄′'))
    return {'phi': phi, 'phi_bar': phi_bar, 'phi_prime': phi_prime, 'phi_bar_prime': phi_bar_prime}


def cp_chain(setup: RootSetup, verticals: Sequence[Vertical], r: int = 0,
             r_prime: Optional[int] = None) -> ChainConfig:
    """τ⁽²⁾ chain with the CP parameterization of each vertical"""
    return ChainConfig(setup, tuple((pp.triple(), p.triple()) for pp, p in verticals), r, r_prime)


def tauT_relation(q: Rapidity, verticals: Sequence[Vertical], r: int, setup: RootSetup) -> Dict[str, float]:
    """
    τ⁽²⁾(t_q)T(Uq)  = φ_q T(q) + ω^r φ̄_{Uq} X T(U²q)
    τ⁽²⁾(t_q)T(U′q) = ω^r φ′_q X T(q) + φ̄′_{U′q} T(U′²q)

    with X the total shift. Residuals are relative to the larger side.
    """
    L = len(verticals)
    omega = setup.omega
    tau = tau2_transfer(cp_chain(setup, verticals, r))(q.t)
    X = charge_operator(setup, L, primed=False)
    T_q = cpm_transfer('T', q, verticals, r)

    Uq = q.shift_x()
    lhs = tau @ cpm_transfer('T', Uq, verticals, r)
    rhs = (phi_functions(q, verticals)['phi'] * T_q
           + omega ** r * phi_functions(Uq, verticals)['phi_bar'] * X @ cpm_transfer('T', q.shift_x(2), verticals, r))
    first = relative_residual(lhs, rhs)

    Vq = q.shift_y()
    lhs = tau @ cpm_transfer('T', Vq, verticals, r)
    rhs = (omega ** r * phi_functions(q, verticals)['phi_prime'] * X @ T_q
           + phi_functions(Vq, verticals)['phi_bar_prime'] * cpm_transfer('T', q.shift_y(2), verticals, r))
    second = relative_residual(lhs, rhs)
    return {'first': first, 'second': second}


def commutation_residuals(rapidities: Sequence[Rapidity], verticals: Sequence[Vertical], r: int = 0) -> Dict[str, float]:
    """
    Star-triangle consequences for four rapidities (q, s, q′, s′):

        [T̂(q)T(s), T̂(q′)T(s′)] = 0,  [T(q)T̂(s), T(q′)T̂(s′)] = 0,  [T(q), X] = 0
    """
    q, s, q2, s2 = rapidities
    L = len(verticals)
    X = chain_product(weyl_pair(q.N, q.omega)[0], L)

    def T(kind, rap):
        return cpm_transfer(kind, rap, verticals, r)

    def rel(a, b):
        comm = a @ b - b @ a
        return float(np.max(np.abs(comm)) / (np.max(np.abs(a)) * np.max(np.abs(b))))

    Tq = T('T', q)
    return {
        'hat_t': rel(T('That', q) @ T('T', s), T('That', q2) @ T('T', s2)),
        't_hat': rel(Tq @ T('That', s), T('T', q2) @ T('That', s2)),
        'charge': rel(Tq, X),
    }


def verify_fourier_weights(p: Rapidity, q: Rapidity) -> Dict[str, float]:
    """
    W̄^{(f)}_{pq}(k)/W̄^{(f)}_{pq}(0) = W_{p*q*}(k)
    W^{(f)}_{pq}(k)/W^{(f)}_{pq}(0) = W̄_{p*q*}(N − k)
    """
    N = p.N
    direct = boltzmann(p, q)
    dual = boltzmann(dual_rapidity(p), dual_rapidity(q))
    reverse = np.array([dual.W_bar[(-k) % N] for k in range(N)])
    return {
        'w_bar': relative_residual(direct.W_bar_fourier / direct.W_bar_fourier[0], dual.W),
        'w': relative_residual(direct.W_fourier / direct.W_fourier[0], reverse),
    }


def dual_verticals(verticals: Sequence[Vertical]) -> List[Vertical]:
    """Site ℓ of the dual chain: (p*_ℓ, p′*_{ℓ+1})"""
    L = len(verticals)
    return [(dual_rapidity(verticals[l][1]), dual_rapidity(verticals[(l + 1) % L][0])) for l in range(L)]


def verify_cpm_duality(q: Rapidity, verticals: Sequence[Vertical], r: int, Q: int,
                       setup: RootSetup) -> Dict[str, float]:
    """
    Face sector (r, Q) against the hat sector of the dual chain with r* = Q:

        T(q*; dual)  = Π_ℓ W^{(f)}_{p′*_ℓ q*}(0)/W^{(f)}_{p_ℓ q}(0) · T(q)
        T̂(q*; dual) = Π_ℓ W^{(f)}_{p*_ℓ q*}(0)/W^{(f)}_{p′_ℓ q}(0) · T̂(q)
    """
    L = len(verticals)
    q_star = dual_rapidity(q)
    duals = dual_verticals(verticals)
    face = sector_basis(setup, L, r, Q).face_basis
    hat = sector_basis(setup, L, Q, r).spin_basis

    prefactor_T = np.prod([boltzmann(dual_rapidity(pp), q_star).W_fourier[0] / boltzmann(p, q).W_fourier[0]
                           for pp, p in verticals])
    prefactor_hat = np.prod([boltzmann(dual_rapidity(p), q_star).W_fourier[0] / boltzmann(pp, q).W_fourier[0]
                             for pp, p in verticals])
    result = {}
    for kind, prefactor in (('T', prefactor_T), ('That', prefactor_hat)):
        lhs = hat.conj().T @ cpm_transfer(kind, q_star, duals, Q) @ hat
        rhs = prefactor * face.conj().T @ cpm_transfer(kind, q, verticals, r) @ face
        result[kind] = relative_residual(lhs, rhs)
    result['dual_curve'] = max(v.curve_residual() for pair in duals for v in pair)
    return result


def verify_rapidity_pairing(q: Rapidity, verticals: Sequence[Vertical], r: int) -> float:
    """T(U′q; {p′}, {p}) = ω^r T(q; {p′₋}, {p₋}) with p₋ = U⁻¹p, p′₋ = U′⁻¹p′"""
    shifted = [(pp.shift_y(-1), p.shift_x(-1)) for pp, p in verticals]
    lhs = cpm_transfer('T', q.shift_y(), verticals, r)
    rhs = q.omega ** r * cpm_transfer('T', q, shifted, r)
    return relative_residual(lhs, rhs)


@dataclass(frozen=True)
class MinusRapidities:
    """(p′₋, p₋, p′†₋, p†₋) with the curve moduli (k′, k) each one lies on"""
    pp_minus: Rapidity
    p_minus: Rapidity
    pp_dagger_minus: Rapidity
    p_dagger_minus: Rapidity
    pp_minus_triple: ParamTriple
    p_minus_triple: ParamTriple

    def curve_residuals(self) -> Dict[str, float]:
        return {name: getattr(self, name).curve_residual()
                for name in ('pp_minus', 'p_minus', 'pp_dagger_minus', 'p_dagger_minus')}


def p_minus_rapidities(pp: Rapidity, p: Rapidity, setup: RootSetup) -> MinusRapidities:
    """
    n = N odd: p′₋ = (q⁻¹x′, qy′, μ′), p₋ = (qx, q⁻¹y, μ), p†₋ = (x, y, qμ), all on W_{k′}.

    n = 2N: the minus triples (q⁻¹x′, qy′, μ′), (qx, q⁻¹y, μ) lie on W_{k′,−k} and are
    identified with p′₋ = (x′, ω⁻¹y′, μ′), p₋ = (ω⁻¹x, y, μ) on W_{k′};
    p†₋ = (x, y, qμ) lies on W_{−k′}.
    """
    q = setup.q
    pp_triple = ParamTriple(pp.x / q, pp.y * q, pp.mu)
    p_triple = ParamTriple(p.x * q, p.y / q, p.mu)
    pp_dagger = pp
    if setup.is_odd:
        pp_minus = pp._replace(x=pp_triple.a, y=pp_triple.b)
        p_minus = p._replace(x=p_triple.a, y=p_triple.b)
        p_dagger = p._replace(mu=p.mu * q)
    else:
        pp_minus = pp.shift_y(-1)
        p_minus = p.shift_x(-1)
        p_dagger = p._replace(mu=p.mu * q, k_prime=-p.k_prime)
    return MinusRapidities(pp_minus, p_minus, pp_dagger, p_dagger, pp_triple, p_triple)


def verify_t2_cp_correspondence(verticals: Sequence[Vertical], i_vec: Sequence[int], r: int,
                                t: complex, setup: RootSetup) -> float:
    """
    ℘_{i⃗}·t⁽²⁾(t)|_{C^{i⃗}} against the CPM τ⁽²⁾ of the rapidities (p′_{i_ℓ}, p_{i_ℓ}).

    For n odd these are the minus rapidities themselves. For n = 2N the CP minus
    rapidities enter at the rescaled arguments ξ_ℓ t with ξ_ℓ = ω^{−i_ℓ}, which
    closes for uniform i⃗ only.

    Raises:
        ParameterError: mixed i⃗ at n = 2N
    """
    L = len(verticals)
    i_vec = tuple(i % 2 for i in i_vec)
    if not setup.is_odd and len(set(i_vec)) > 1:
        raise ParameterError("the CP identification at n = 2N holds for uniform i⃗ only")
    cfg = cp_chain(setup, verticals, r, 2 * r)
    sub = chain_subspace(setup, i_vec)
    reduced = sub.projection @ t2_transfer(cfg)(t) @ sub.basis

    laxes, xi = [], []
    for (pp, p), i in zip(verticals, i_vec):
        if i:
            minus = p_minus_rapidities(pp, p, setup)
            pp, p = minus.pp_minus, minus.p_minus
        laxes.append(lax_cpm(pp.triple(), p.triple(), setup))
        xi.append(1.0 if setup.is_odd else setup.omega ** -i)
    expected = twisted_trace(laxes, t, setup.omega ** r, shift=setup.omega, xi=xi)
    return relative_residual(reduced, expected)
