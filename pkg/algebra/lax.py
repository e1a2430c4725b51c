"""
L-operators and R-matrices with Yang–Baxter and gauge verification.

Auxiliary conventions: an L-operator is a 2×2 array of quantum operators; in
``as_block_matrix`` the auxiliary index is the slow one. R-matrices act on
aux1 ⊗ aux2 with basis order 00, 01, 10, 11.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from algebra.errors import ParameterError
from algebra.qgroups import (
    ParamTriple,
    UqGenerators,
    UwGenerators,
    minus_pair,
    dagger_minus_pair,
    twist,
    uw_from_uq,
)
from algebra.weyl_core import RootSetup, hat_pair, relative_residual, scalar_fit

logger = logging.getLogger(__name__)

SPECTRAL_SAMPLES = (0.71 + 0.43j, -1.13 + 0.29j, 0.52 - 0.88j)


@dataclass(frozen=True)
class LaxOperator:
    """
    Laurent polynomial in the spectral variable with 2×2-block coefficients.

    ``coefficients[k]`` has shape (2, 2, d, d) and multiplies x^k.
    """
    coefficients: Dict[int, np.ndarray]
    variable: str = 't'
    name: str = ''

    def __post_init__(self):
        if not self.coefficients:
            raise ValueError("LaxOperator needs at least one coefficient")
        shapes = {c.shape for c in self.coefficients.values()}
        if len(shapes) != 1:
            raise ValueError(f"inconsistent coefficient shapes {shapes}")

    @classmethod
    def from_blocks(cls, blocks: Dict[int, Sequence[Sequence[Optional[np.ndarray]]]],
                    variable: str, name: str = '') -> 'LaxOperator':
        """Build from {power: [[M11, M12], [M21, M22]]} with None for zero blocks"""
        dim = next(m.shape[0] for rows in blocks.values() for row in rows for m in row if m is not None)
        coefficients = {}
        for power, rows in blocks.items():
            coeff = np.zeros((2, 2, dim, dim), dtype=complex)
            for i in range(2):
                for j in range(2):
                    if rows[i][j] is not None:
                        coeff[i, j] = rows[i][j]
            coefficients[power] = coeff
        return cls(coefficients, variable, name)

    @property
    def dim(self) -> int:
        return next(iter(self.coefficients.values())).shape[-1]

    @property
    def degree_range(self) -> Tuple[int, int]:
        return min(self.coefficients), max(self.coefficients)

    def evaluate(self, x: complex) -> np.ndarray:
        """Horner evaluation; returns shape (2, 2, d, d)"""
        low, high = self.degree_range
        zero = np.zeros_like(next(iter(self.coefficients.values())))
        result = zero.copy()
        for power in range(high, low - 1, -1):
            result = result * x + self.coefficients.get(power, zero)
        return result * x ** low

    def as_block_matrix(self, x: complex) -> np.ndarray:
        blocks = self.evaluate(x)
        return np.block([[blocks[0, 0], blocks[0, 1]], [blocks[1, 0], blocks[1, 1]]])

    def conjugated(self, G: np.ndarray) -> 'LaxOperator':
        """Quantum-space conjugation G·L·G⁻¹"""
        G_inv = np.linalg.inv(G)
        coefficients = {k: np.einsum('ab,ijbc,cd->ijad', G, c, G_inv) for k, c in self.coefficients.items()}
        return LaxOperator(coefficients, self.variable, self.name)

    def aux_gauge(self, left: Sequence[complex], right: Sequence[complex]) -> 'LaxOperator':
        """diag(left)·L·diag(right) in the auxiliary space"""
        factors = np.outer(left, right)
        coefficients = {k: c * factors[:, :, None, None] for k, c in self.coefficients.items()}
        return LaxOperator(coefficients, self.variable, self.name)

    def perturbed(self, i: int, j: int, power: int = 0, eps: float = 1e-3) -> 'LaxOperator':
        """Copy with eps added to every entry of one block coefficient"""
        coefficients = {k: c.copy() for k, c in self.coefficients.items()}
        if power not in coefficients:
            coefficients[power] = np.zeros_like(next(iter(self.coefficients.values())))
        coefficients[power][i, j] += eps
        return LaxOperator(coefficients, self.variable, self.name + '~perturbed')


def evaluated_distance(left: LaxOperator, right: LaxOperator,
                       points: Iterable[complex] = SPECTRAL_SAMPLES) -> float:
    return max(relative_residual(left.evaluate(x), right.evaluate(x)) for x in points)


def r_xxz(s: complex, q: complex) -> np.ndarray:
    """Symmetric six-vertex R-matrix"""
    corner = q / s - s / q
    diag = 1 / s - s
    off = q - 1 / q
    return np.array([
        [corner, 0, 0, 0],
        [0, diag, off, 0],
        [0, off, diag, 0],
        [0, 0, 0, corner],
    ], dtype=complex)


def r_tau(t: complex, w: complex) -> np.ndarray:
    """Asymmetric R-matrix of the τ-type L-operators"""
    return np.array([
        [t * w - 1, 0, 0, 0],
        [0, t - 1, w - 1, 0],
        [0, t * (w - 1), (t - 1) * w, 0],
        [0, 0, 0, t * w - 1],
    ], dtype=complex)


@dataclass(frozen=True)
class RMatrix:
    """R-matrix family evaluated at the ratio of two spectral parameters"""
    family: str
    coupling: complex
    builder: Callable[[complex, complex], np.ndarray] = field(repr=False, default=None)

    @classmethod
    def xxz(cls, q: complex) -> 'RMatrix':
        return cls('xxz-symmetric', q, r_xxz)

    @classmethod
    def tau(cls, w: complex) -> 'RMatrix':
        return cls('tau-asymmetric', w, r_tau)

    def __call__(self, ratio: complex) -> np.ndarray:
        return self.builder(ratio, self.coupling)


def lax_xxz(gen: UqGenerators, rho: complex, nu: complex, nu_half: complex = None) -> LaxOperator:
    """Six-vertex L-operator L(s), Laurent in s with powers −1, 0, 1"""
    q = gen.q
    nu_half = np.sqrt(complex(nu)) if nu_half is None else complex(nu_half)
    return LaxOperator.from_blocks({
        1: [[gen.KhalfInv * nu_half / rho, None], [None, nu_half * gen.Khalf]],
        0: [[None, (q - 1 / q) * gen.eminus], [(q - 1 / q) * gen.eplus, None]],
        -1: [[-gen.Khalf / nu_half, None], [None, -rho * gen.KhalfInv / nu_half]],
    }, variable='s', name='xxz')


def lax_tau(gen: UwGenerators, rho: complex, nu: complex) -> LaxOperator:
    """τ-type L-operator, linear in t"""
    w = gen.w
    identity = np.eye(gen.dim)
    return LaxOperator.from_blocks({
        0: [[identity, (1 - w) * gen.Eminus], [None, rho * gen.Kinv]],
        1: [[-nu / rho * gen.Kinv, None], [-nu * (1 - w) * gen.Eplus, -nu * identity]],
    }, variable='t', name='tau')


def xxz_gauge_residual(gen: UqGenerators, rho: complex, nu: complex, s: complex,
                       nu_half: complex = None) -> float:
    """
    Residual of lax_tau(s²) = G·(−sν^{1/2}K^{−1/2}·L(s))·G⁻¹ with G = diag(1, −sν^{1/2}q).
    """
    nu_half = np.sqrt(complex(nu)) if nu_half is None else complex(nu_half)
    lhs = lax_tau(uw_from_uq(gen), rho, nu).evaluate(s ** 2)
    blocks = lax_xxz(gen, rho, nu, nu_half).evaluate(s)
    prefactor = -s * nu_half * gen.KhalfInv
    g = -s * nu_half * gen.q
    gauge = np.array([[1, 1 / g], [g, 1]])
    rhs = np.einsum('ab,ijbc->ijac', prefactor, blocks) * gauge[:, :, None, None]
    return relative_residual(lhs, rhs)


def _five_param(Z0: np.ndarray, X0: np.ndarray, pp: ParamTriple, p: ParamTriple,
                omega: complex, name: str) -> LaxOperator:
    """
    Five-parameter τ-type L-operator in a Weyl pair (Z₀, X₀):

        [[1 − t(c/b′b)Z₀,             (1/b − ω(ac/b′b)Z₀)X₀⁻¹ ],
         [−t(1/b′ − (a′c/b′b)Z₀)X₀,   −t/(b′b) + ω(a′ac/b′b)Z₀]]
    """
    identity = np.eye(Z0.shape[0])
    X0_inv = np.linalg.inv(X0)
    a_p, b_p = pp.a, pp.b
    a, b = p.a, p.b
    c = pp.d * p.d
    bb = b_p * b
    return LaxOperator.from_blocks({
        0: [[identity, (identity / b - omega * a * c / bb * Z0) @ X0_inv],
            [None, omega * a_p * a * c / bb * Z0]],
        1: [[-c / bb * Z0, None],
            [-(identity / b_p - a_p * c / bb * Z0) @ X0, -identity / bb]],
    }, variable='t', name=name)


def lax_cpm(pp: ParamTriple, p: ParamTriple, setup: RootSetup) -> LaxOperator:
    """Five-parameter L-operator on C^N with (Ẑ, X̂) = (X, Z⁻¹)"""
    Z, X = hat_pair(setup.N, setup.omega)
    return _five_param(Z, X, pp, p, setup.omega, 'tau-cpm')


def xxz_prefactor(pp: ParamTriple, p: ParamTriple, setup: RootSetup) -> Tuple[complex, complex]:
    """
    Returns:
        (c₀, (b′b)^{1/2}) with c₀ = (ωa′ac²/b′³b³)^{1/4}, both principal branch
    """
    c = pp.d * p.d
    bb = pp.b * p.b
    c0 = complex(np.power(complex(setup.omega * pp.a * p.a * c ** 2 / bb ** 3), 0.25))
    return c0, complex(np.sqrt(complex(bb)))


def _lax_xxz_n(pp: ParamTriple, p: ParamTriple, setup: RootSetup) -> LaxOperator:
    q, omega = setup.q, setup.omega
    Zp, Xp = hat_pair(setup.n, q)
    Zp_inv, Xp_inv = Zp.conj().T, Xp.conj().T
    a_p, b_p, a, b = pp.a, pp.b, p.a, p.b
    c = pp.d * p.d
    bb = b_p * b
    c0, sqrt_bb = xxz_prefactor(pp, p, setup)
    return LaxOperator.from_blocks({
        -1: [[-Zp / c0, None],
             [None, -omega * a_p * a * c / bb * Zp_inv / c0]],
        0: [[None, q / sqrt_bb * (Zp / b - omega * a * c / bb * Zp_inv) @ Xp_inv / c0],
            [-sqrt_bb / q * (Zp / b_p - a_p * c / bb * Zp_inv) @ Xp / c0, None]],
        1: [[c / bb * Zp_inv / c0, None],
            [None, Zp / bb / c0]],
    }, variable='s', name='xxz-cyclic')


def lax_cyclic_big(pp: ParamTriple, p: ParamTriple, setup: RootSetup, variant: str) -> LaxOperator:
    """
    n-dimensional cyclic L-operators.

    Variants:
        'xxz': the XXZ operator in s, carrying 1/c₀
        'tau': τ-type with pair (Ẑ′⁻², X̂′)
        'dagger': τ-type with pair (Ẑ′, X̂′⁻²)
    """
    Zp, Xp = hat_pair(setup.n, setup.q)
    Zp_inv, Xp_inv = Zp.conj().T, Xp.conj().T
    if variant == 'xxz':
        return _lax_xxz_n(pp, p, setup)
    if variant == 'tau':
        return _five_param(Zp_inv @ Zp_inv, Xp, pp, p, setup.omega, 't2-cyclic')
    if variant == 'dagger':
        return _five_param(Zp, Xp_inv @ Xp_inv, pp, p, setup.omega, 't2-dagger')
    raise ValueError(f"unknown L-operator variant '{variant}'")


def check_llrel(pp: ParamTriple, p: ParamTriple, setup: RootSetup, s: complex) -> Dict[str, complex]:
    """
    Relation between the XXZ and τ-type n-dimensional operators:

        Lτ(s²) = D₁·(−s c₀ Ẑ′⁻¹ 𝓛(s))·D₁⁻¹,  D₁ = diag(1, −s q (b′b)^{−1/2})

    Returns the exact residual, plus the residual after fitting one global
    scalar and that scalar.
    """
    Zp, _ = hat_pair(setup.n, setup.q)
    c0, sqrt_bb = xxz_prefactor(pp, p, setup)
    lhs = lax_cyclic_big(pp, p, setup, 'tau').evaluate(s ** 2)
    script = lax_cyclic_big(pp, p, setup, 'xxz').evaluate(s)
    g = -s * setup.q / sqrt_bb
    gauge = np.array([[1, 1 / g], [g, 1]])
    rhs = np.einsum('ab,ijbc->ijac', -s * c0 * Zp.conj().T, script) * gauge[:, :, None, None]
    scalar, fitted = scalar_fit(lhs, rhs)
    return {'residual': relative_residual(lhs, rhs), 'scalar': scalar, 'scalar_residual': fitted}


def _yb_sides(R: np.ndarray, L1: np.ndarray, L2: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    d = L1.shape[-1]
    eye2 = np.eye(2)
    first = sum(np.kron(np.kron(_unit(i, j), eye2), L1[i, j]) for i in range(2) for j in range(2))
    second = sum(np.kron(np.kron(eye2, _unit(i, j)), L2[i, j]) for i in range(2) for j in range(2))
    R_full = np.kron(R, np.eye(d))
    return R_full @ first @ second, second @ first @ R_full


def _unit(i: int, j: int) -> np.ndarray:
    unit = np.zeros((2, 2))
    unit[i, j] = 1
    return unit


def draw_spectral(rng: np.random.Generator, size: int, low: float = 0.5, high: float = 2.0) -> np.ndarray:
    """Points uniformly distributed in the annulus low ≤ |x| ≤ high"""
    radii = np.sqrt(rng.uniform(low ** 2, high ** 2, size=size))
    return radii * np.exp(1j * rng.uniform(0, 2 * np.pi, size=size))


def check_yb(R: RMatrix, L1: LaxOperator, L2: LaxOperator, samples: int,
             rng: np.random.Generator) -> float:
    """
    Max normalized residual of R(x/x′)(L₁(x)⊗1)(1⊗L₂(x′)) = (1⊗L₂(x′))(L₁(x)⊗1)R(x/x′).

    Raises:
        ParameterError: L1 and L2 act on different quantum spaces
    """
    if L1.dim != L2.dim:
        raise ParameterError(f"quantum dimensions differ: {L1.dim} vs {L2.dim}")
    worst = 0.0
    points = draw_spectral(rng, 2 * samples)
    for x, x_prime in zip(points[:samples], points[samples:]):
        lhs, rhs = _yb_sides(R(x / x_prime), L1.evaluate(x), L2.evaluate(x_prime))
        worst = max(worst, relative_residual(lhs, rhs))
    logger.debug("YB %s/%s residual %.3e", L1.name, L2.name, worst)
    return worst


def check_gauge_relations(setup: RootSetup, pp: ParamTriple, p: ParamTriple,
                          points: Iterable[complex] = SPECTRAL_SAMPLES) -> Dict[str, float]:
    """Residuals of the a⁻ gauge equivalences on C^N and their Ẑ′/X̂′ forms on C^n"""
    q = setup.q
    points = tuple(points)
    pp_minus, p_minus = minus_pair(pp, p, setup)
    pp_dag, p_dag = dagger_minus_pair(pp, p, setup)
    Z, _ = hat_pair(setup.N, setup.omega)
    Zp, Xp = hat_pair(setup.n, q)

    plain = lax_cpm(pp, p, setup)
    minus = lax_cpm(pp_minus, p_minus, setup)
    residuals = {
        'cn_minus_gauge': evaluated_distance(minus, plain.aux_gauge((1, 1 / q), (1, q)), points),
        'cn_z_conjugation': evaluated_distance(plain.conjugated(Z), minus.aux_gauge((1, 1 / q), (1, q)), points),
    }
    for variant in ('xxz', 'tau'):
        big = lax_cyclic_big(pp, p, setup, variant)
        big_minus = lax_cyclic_big(pp_minus, p_minus, setup, variant)
        residuals[f'{variant}_minus_conjugation'] = evaluated_distance(
            big_minus, big.conjugated(Zp.conj().T), points)
    dagger = lax_cyclic_big(pp, p, setup, 'dagger')
    dagger_minus = lax_cyclic_big(pp_dag, p_dag, setup, 'dagger')
    residuals['dagger_minus_conjugation'] = evaluated_distance(
        dagger_minus, dagger.conjugated(Xp.conj().T), points)
    return residuals


def check_twist_conjugation(setup: RootSetup, pp: ParamTriple, p: ParamTriple, l: int,
                            kind: str, variant: str, l_prime: int = 0,
                            points: Iterable[complex] = SPECTRAL_SAMPLES) -> float:
    """
    Conjugation form of the l-twist equivalences.

    Round twists (p′(−l), p(l)): Ẑ′^{−l}·L·Ẑ′^{l} for variant 'xxz' or 'tau',
    Ẑ^{l/2}·L·Ẑ^{−l/2} for variant 'cpm' (l even).
    Square twists (p′[l′], p[l]): X̂′^{−(l′+l)}·L·X̂′^{l′+l} for 'dagger',
    X̂^{m}·L·X̂^{−m} for 'cpm' with l′ + l = 2m.
    """
    if kind == 'round':
        twisted = (twist(pp, -l, 'round', setup), twist(p, l, 'round', setup))
        if variant == 'cpm':
            if l % 2:
                raise ParameterError("round twists on C^N need an even l")
            Z, _ = hat_pair(setup.N, setup.omega)
            G = np.linalg.matrix_power(Z, (l // 2) % setup.N)
            return evaluated_distance(lax_cpm(*twisted, setup), lax_cpm(pp, p, setup).conjugated(G), points)
        Zp, _ = hat_pair(setup.n, setup.q)
        G = np.linalg.matrix_power(Zp, -l % setup.n)
        return evaluated_distance(lax_cyclic_big(*twisted, setup, variant),
                                  lax_cyclic_big(pp, p, setup, variant).conjugated(G), points)

    if kind == 'square':
        twisted = (twist(pp, l_prime, 'square', setup), twist(p, l, 'square', setup))
        total = l + l_prime
        if variant == 'cpm':
            if total % 2:
                raise ParameterError("square twists on C^N need l′ + l even")
            _, X = hat_pair(setup.N, setup.omega)
            G = np.linalg.matrix_power(X, (total // 2) % setup.N)
            return evaluated_distance(lax_cpm(*twisted, setup), lax_cpm(pp, p, setup).conjugated(G), points)
        _, Xp = hat_pair(setup.n, setup.q)
        G = np.linalg.matrix_power(Xp, -total % setup.n)
        return evaluated_distance(lax_cyclic_big(*twisted, setup, 'dagger'),
                                  lax_cyclic_big(pp, p, setup, 'dagger').conjugated(G), points)

    raise ValueError(f"unknown twist kind '{kind}'")
