"""
Generator representations of U_q(sl₂) and of its subalgebra U_w(sl₂).

The cyclic representations are written with Weyl pairs. Every U_w
representation used here has the same shape once a pair (Z₀, X₀) with
Z₀X₀ = ωX₀Z₀ is chosen:

    K  = q^{φ′−φ} Z₀⁻¹
    E⁺ = q^{ε−(φ+φ′)/2} (1 − ω^{−φ−1} Z₀) X₀ / (1 − ω)
    E⁻ = q^{(φ+φ′)/2−ε} (1 − ω^{φ′+1} Z₀) X₀⁻¹ / (1 − ω)

with (Z₀, X₀) = (Ẑ′⁻², X̂′) on C^n, (Ẑ, X̂) on C^N and (Ẑ′, X̂′⁻²) for the
dagger family.
"""
import logging
from dataclasses import dataclass, replace
from typing import Dict, Tuple

import numpy as np

from algebra.errors import ParameterError
from algebra.weyl_core import RootSetup, hat_pair, max_norm, relative_residual

logger = logging.getLogger(__name__)

GENERATOR_NAMES = ('K', 'Kinv', 'Eplus', 'Eminus')


def q_number(k: int, q: complex) -> complex:
    """[k]_q = (q^k − q^{−k}) / (q − q^{−1})"""
    return (q ** k - q ** -k) / (q - 1 / q)


@dataclass(frozen=True)
class UqGenerators:
    """K^{±1/2}, e^± of U_q(sl₂) on a finite-dimensional space"""
    Khalf: np.ndarray
    KhalfInv: np.ndarray
    eplus: np.ndarray
    eminus: np.ndarray
    q: complex

    @property
    def K(self) -> np.ndarray:
        return self.Khalf @ self.Khalf

    @property
    def Kinv(self) -> np.ndarray:
        return self.KhalfInv @ self.KhalfInv

    @property
    def dim(self) -> int:
        return self.Khalf.shape[0]

    def relation_residuals(self) -> Dict[str, float]:
        q = self.q
        identity = np.eye(self.dim)
        commutator = self.eplus @ self.eminus - self.eminus @ self.eplus
        return {
            'khalf_inverse': relative_residual(self.Khalf @ self.KhalfInv, identity),
            'k_eplus': relative_residual(self.Khalf @ self.eplus @ self.KhalfInv, q * self.eplus),
            'k_eminus': relative_residual(self.Khalf @ self.eminus @ self.KhalfInv, self.eminus / q),
            'commutator': relative_residual(commutator, (self.K - self.Kinv) / (q - 1 / q)),
        }

    def max_residual(self) -> float:
        return max(self.relation_residuals().values())


@dataclass(frozen=True)
class UwGenerators:
    """K^{±1}, E^± of U_w(sl₂)"""
    K: np.ndarray
    Kinv: np.ndarray
    Eplus: np.ndarray
    Eminus: np.ndarray
    w: complex

    @property
    def dim(self) -> int:
        return self.K.shape[0]

    def relation_residuals(self) -> Dict[str, float]:
        w = self.w
        identity = np.eye(self.dim)
        lhs = w * self.Eplus @ self.Eminus - self.Eminus @ self.Eplus
        rhs = (self.Kinv @ self.Kinv - identity) / (1 - w)
        return {
            'k_inverse': relative_residual(self.K @ self.Kinv, identity),
            'k_eplus': relative_residual(self.K @ self.Eplus @ self.Kinv, self.Eplus / w),
            'k_eminus': relative_residual(self.K @ self.Eminus @ self.Kinv, w * self.Eminus),
            'serre': relative_residual(lhs, rhs),
        }

    def max_residual(self) -> float:
        return max(self.relation_residuals().values())

    def conjugated(self, G: np.ndarray) -> 'UwGenerators':
        """G·(generator)·G⁻¹ for every generator"""
        G_inv = np.linalg.inv(G)
        return UwGenerators(*(G @ getattr(self, name) @ G_inv for name in GENERATOR_NAMES), w=self.w)

    def distance(self, other: 'UwGenerators') -> float:
        """Largest relative residual between corresponding generators"""
        return max(relative_residual(getattr(self, name), getattr(other, name)) for name in GENERATOR_NAMES)


@dataclass(frozen=True)
class ParamTriple:
    """p = (a, b, d); a pair (p′, p) carries c = d′d"""
    a: complex
    b: complex
    d: complex

    def __post_init__(self):
        for name in ('a', 'b', 'd'):
            value = complex(getattr(self, name))
            if value == 0:
                raise ParameterError(f"parameter {name} must be nonzero")
            object.__setattr__(self, name, value)

    def as_tuple(self) -> Tuple[complex, complex, complex]:
        return self.a, self.b, self.d

    def to_json(self) -> Dict[str, list]:
        return {name: [getattr(self, name).real, getattr(self, name).imag] for name in ('a', 'b', 'd')}


@dataclass(frozen=True)
class CyclicParams:
    """
    Three-parameter cyclic data stored through the powers of q that enter formulas.

    Fields:
        q_eps: q^ε
        q_phi: q^φ
        q_mphip: q^{−φ′}
        q_half_diff: q^{(φ′−φ)/2}; must square to 1/(q^φ·q^{−φ′})
        rho, nu: the Lax-operator scalars
    """
    q_eps: complex
    q_phi: complex
    q_mphip: complex
    q_half_diff: complex
    rho: complex
    nu: complex

    @classmethod
    def create(cls, q_eps: complex, q_phi: complex, q_mphip: complex,
               rho: complex = 1.0, nu: complex = 1.0, q_half_diff: complex = None) -> 'CyclicParams':
        if q_half_diff is None:
            q_half_diff = np.sqrt(complex(1 / (q_phi * q_mphip)))
        return cls(complex(q_eps), complex(q_phi), complex(q_mphip), complex(q_half_diff),
                   complex(rho), complex(nu))

    def __post_init__(self):
        for name in ('q_eps', 'q_phi', 'q_mphip', 'q_half_diff', 'rho', 'nu'):
            if getattr(self, name) == 0:
                raise ParameterError(f"cyclic parameter {name} must be nonzero")
        square = self.q_half_diff ** 2 * self.q_phi * self.q_mphip
        if abs(square - 1) > 1e-10:
            raise ParameterError("q_half_diff must square to q^(φ′−φ)")

    @property
    def q_half_sum(self) -> complex:
        """q^{(φ+φ′)/2}"""
        return self.q_phi * self.q_half_diff

    @classmethod
    def random(cls, rng: np.random.Generator) -> 'CyclicParams':
        """Generic parameters of modulus in [0.7, 1.3] with random phases"""
        values = random_nonzero(rng, 5)
        return cls.create(*values)


def random_nonzero(rng: np.random.Generator, count: int, low: float = 0.7, high: float = 1.3) -> np.ndarray:
    """Complex numbers with modulus in [low, high] and uniform phase"""
    moduli = rng.uniform(low, high, size=count)
    phases = rng.uniform(0, 2 * np.pi, size=count)
    return moduli * np.exp(1j * phases)


def random_triple(rng: np.random.Generator) -> ParamTriple:
    return ParamTriple(*random_nonzero(rng, 3))


@dataclass(frozen=True)
class SpinRepresentation:
    uq: UqGenerators
    uw: UwGenerators
    degenerate: bool


def spin_rep(d: int, q: complex, qhalf: complex = None) -> SpinRepresentation:
    """
    Spin-(d−1)/2 representation on e⁰ … e^{d−1}.

    K^{1/2}e^k = q^{(d−1−2k)/2}e^k, e⁺e^k = [k]_q e^{k−1}, e⁻e^k = [d−1−k]_q e^{k+1}.
    A q with some [k]_q = 0 is accepted and flagged as degenerate.
    """
    if d < 2:
        raise ParameterError(f"spin representation needs d >= 2, got {d}")
    q = complex(q)
    qhalf = np.sqrt(q) if qhalf is None else complex(qhalf)

    weights = qhalf ** (d - 1 - 2 * np.arange(d))
    eplus = np.zeros((d, d), dtype=complex)
    eminus = np.zeros((d, d), dtype=complex)
    for k in range(1, d):
        eplus[k - 1, k] = q_number(k, q)
    for k in range(d - 1):
        eminus[k + 1, k] = q_number(d - 1 - k, q)

    degenerate = any(abs(q_number(k, q)) < 1e-12 for k in range(1, d))
    if degenerate:
        logger.warning("spin representation d=%s at q=%s has a vanishing q-number", d, q)

    uq = UqGenerators(np.diag(weights), np.diag(1 / weights), eplus, eminus, q)
    return SpinRepresentation(uq=uq, uw=uw_from_uq(uq), degenerate=degenerate)


def uw_from_uq(gen: UqGenerators) -> UwGenerators:
    """E⁺ = −q²K^{−1/2}e⁺, E⁻ = K^{−1/2}e⁻"""
    q = gen.q
    return UwGenerators(
        K=gen.K,
        Kinv=gen.Kinv,
        Eplus=-q ** 2 * gen.KhalfInv @ gen.eplus,
        Eminus=gen.KhalfInv @ gen.eminus,
        w=q ** -2,
    )


def cyclic_rep_uq(setup: RootSetup, cp: CyclicParams) -> UqGenerators:
    """Cyclic C^n representation of U_q(sl₂) in terms of (Ẑ′, X̂′)"""
    q = setup.q
    Zp, Xp = hat_pair(setup.n, q)
    Zp_inv, Xp_inv = Zp.conj().T, Xp.conj().T
    scale = q - 1 / q

    q_phi1 = cp.q_phi * q
    q_mphip1 = cp.q_mphip / q
    eplus = cp.q_eps * (q_phi1 * Zp_inv - Zp / q_phi1) @ Xp / scale
    eminus = (Zp / q_mphip1 - q_mphip1 * Zp_inv) @ Xp_inv / (cp.q_eps * scale)
    return UqGenerators(
        Khalf=cp.q_half_diff * Zp,
        KhalfInv=Zp_inv / cp.q_half_diff,
        eplus=eplus,
        eminus=eminus,
        q=q,
    )


def uw_from_pair(Z0: np.ndarray, X0: np.ndarray, cp: CyclicParams, setup: RootSetup) -> UwGenerators:
    """U_w generators from a Weyl pair with Z₀X₀ = ωX₀Z₀"""
    q, omega = setup.q, setup.omega
    identity = np.eye(Z0.shape[0])
    Z0_inv = np.linalg.inv(Z0)
    X0_inv = np.linalg.inv(X0)
    k_scale = cp.q_half_diff ** 2
    e_scale = cp.q_eps / cp.q_half_sum

    return UwGenerators(
        K=k_scale * Z0_inv,
        Kinv=Z0 / k_scale,
        Eplus=e_scale * (identity - (cp.q_phi * q) ** 2 * Z0) @ X0 / (1 - omega),
        Eminus=(identity - (cp.q_mphip / q) ** 2 * Z0) @ X0_inv / (e_scale * (1 - omega)),
        w=omega,
    )


def induced_uw(setup: RootSetup, cp: CyclicParams) -> UwGenerators:
    """Closed-form C^n representation of U_ω(sl₂): pair (Ẑ′⁻², X̂′)"""
    Zp, Xp = hat_pair(setup.n, setup.q)
    Zp_inv = Zp.conj().T
    return uw_from_pair(Zp_inv @ Zp_inv, Xp, cp, setup)


def descended_rep(setup: RootSetup, cp: CyclicParams, sign: int = 1) -> UwGenerators:
    """C^N representation with pair (Ẑ, X̂); sign −1 replaces ε by ε − 1"""
    if sign not in (1, -1):
        raise ParameterError(f"sign must be +1 or -1, got {sign}")
    if sign == -1:
        cp = replace(cp, q_eps=cp.q_eps / setup.q)
    Z, X = hat_pair(setup.N, setup.omega)
    return uw_from_pair(Z, X, cp, setup)


def dagger_rep(setup: RootSetup, cp: CyclicParams) -> UwGenerators:
    """Dagger C^n representation: pair (Ẑ′, X̂′⁻²)"""
    Zp, Xp = hat_pair(setup.n, setup.q)
    Xp_inv = Xp.conj().T
    return uw_from_pair(Zp, Xp_inv @ Xp_inv, cp, setup)


def power_scalar(setup: RootSetup, cp: CyclicParams) -> complex:
    """The scalar (E⁺)ⁿ of the C^n representation, as a product over k"""
    q, omega = setup.q, setup.omega
    const = cp.q_eps / cp.q_half_sum
    a = (cp.q_phi * q) ** 2
    factors = [const * (1 - a * q ** (-2 * k)) / (1 - omega) for k in range(setup.n)]
    return complex(np.prod(factors))


def twist_equivalence(setup: RootSetup, cp: CyclicParams, m: int, space: str = 'descended') -> float:
    """
    Residual of the equivalence q^ε → ω^{−m}q^ε as an explicit conjugation.

    On C^N the conjugating monomial is Ẑ^{−m}; on C^n it is Ẑ′^{2m}.
    """
    shifted = replace(cp, q_eps=cp.q_eps * setup.omega ** -m)
    if space == 'descended':
        Z, _ = hat_pair(setup.N, setup.omega)
        G = np.linalg.matrix_power(Z, -m % setup.N)
        return shifted_rep_distance(descended_rep(setup, shifted), descended_rep(setup, cp), G)
    if space == 'induced':
        Zp, _ = hat_pair(setup.n, setup.q)
        G = np.linalg.matrix_power(Zp, (2 * m) % setup.n)
        return shifted_rep_distance(induced_uw(setup, shifted), induced_uw(setup, cp), G)
    raise ValueError(f"unknown representation space '{space}'")


def shifted_rep_distance(target: UwGenerators, source: UwGenerators, G: np.ndarray) -> float:
    return target.distance(source.conjugated(G))


def params_from_triples(pp: ParamTriple, p: ParamTriple, setup: RootSetup) -> CyclicParams:
    """
    Cyclic parameters of a pair of triples.

    ρ = q⁻¹(a′a/b′b)^{1/2}, ν = 1/(b′b), q^{φ+1} = (a′c/b)^{1/2}; the remaining
    roots are fixed so that a = ρν⁻¹q^{−(φ+φ′)/2−ε} and b = q^{−(φ+φ′)/2+ε}
    hold exactly.
    """
    q = setup.q
    c = pp.d * p.d
    rho = np.sqrt(pp.a * p.a / (pp.b * p.b)) / q
    nu = 1 / (pp.b * p.b)
    q_phi = np.sqrt(pp.a * c / p.b) / q
    q_mphip = rho * c / q_phi
    q_half_diff = np.sqrt(1 / (rho * c))
    q_eps = p.b * q_phi * q_half_diff
    return CyclicParams(complex(q_eps), complex(q_phi), complex(q_mphip), complex(q_half_diff),
                        complex(rho), complex(nu))


def triples_from_params(cp: CyclicParams, setup: RootSetup) -> Tuple[ParamTriple, ParamTriple]:
    """
    Inverse of params_from_triples.

    Returns (p′, p) with d′ = 1 and d = c, which fixes the free split of c = d′d.
    """
    a = cp.rho / (cp.nu * cp.q_half_sum * cp.q_eps)
    b = cp.q_eps / cp.q_half_sum
    b_prime = 1 / (cp.nu * b)
    a_prime = cp.rho ** 2 / (cp.nu * setup.omega * a)
    c = 1 / (cp.rho * cp.q_half_diff ** 2)
    return ParamTriple(a_prime, b_prime, 1.0), ParamTriple(a, b, c)


def twist(p: ParamTriple, l: int, kind: str, setup: RootSetup) -> ParamTriple:
    """Round twist p(l) = (aq^l, bq^{−l}, d) or square twist p[l] = (a, b, dq^l)"""
    q = setup.q
    if kind == 'round':
        return ParamTriple(p.a * q ** l, p.b * q ** -l, p.d)
    if kind == 'square':
        return ParamTriple(p.a, p.b, p.d * q ** l)
    raise ValueError(f"unknown twist kind '{kind}'")


def minus_pair(pp: ParamTriple, p: ParamTriple, setup: RootSetup) -> Tuple[ParamTriple, ParamTriple]:
    """(p′₋, p₋) = ((q⁻¹a′, qb′, d′), (qa, q⁻¹b, d))"""
    return twist(pp, -1, 'round', setup), twist(p, 1, 'round', setup)


def dagger_minus_pair(pp: ParamTriple, p: ParamTriple, setup: RootSetup) -> Tuple[ParamTriple, ParamTriple]:
    """(p′†₋, p†₋) = (p′, (a, b, dq))"""
    return pp, twist(p, 1, 'square', setup)


def site_pair(pp: ParamTriple, p: ParamTriple, index: int, setup: RootSetup,
              dagger: bool = False) -> Tuple[ParamTriple, ParamTriple]:
    """Parameters attached to C^{(−1)^i} (plain) or C†^{(−1)^i} (dagger)"""
    if index % 2 == 0:
        return pp, p
    return dagger_minus_pair(pp, p, setup) if dagger else minus_pair(pp, p, setup)


def triple_distance(left: Tuple[ParamTriple, ...], right: Tuple[ParamTriple, ...]) -> float:
    lhs = np.array([v for triple in left for v in triple.as_tuple()])
    rhs = np.array([v for triple in right for v in triple.as_tuple()])
    return max_norm(np.abs(lhs - rhs) / np.abs(rhs))
