"""
Single-site suites: Yang–Baxter and quantum-group relations, and the gauge equivalences
"""
import logging

import numpy as np

from algebra.lax import (
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
from algebra.qgroups import (
    CyclicParams,
    cyclic_rep_uq,
    dagger_rep,
    descended_rep,
    induced_uw,
    power_scalar,
    random_nonzero,
    random_triple,
    spin_rep,
    twist_equivalence,
    uw_from_uq,
)
from algebra.transfer import (
    verify_inhomogeneous_tau,
    verify_inhomogeneous_xxz,
    verify_lrelcy,
    verify_tau_t_spin,
)
from algebra.weyl_core import relative_residual
from services.base_service import VerificationSuite

logger = logging.getLogger(__name__)

SPIN_DIMENSIONS = (2, 3, 4)
NEGATIVE_CONTROL_FLOOR = 1e-5


class YangBaxterSuite(VerificationSuite):
    """Every L-operator family against its R-matrix"""

    suite_id = 'yb'
    anchor = '(YBXXZ) (YBt2) Yang–Baxter relation RLL = LLR'
    description = 'six-vertex, τ-type, chiral Potts and the three n-dimensional L-operators'

    def _run_checks(self):
        tol = self.config.tolerance('identity')
        samples = self.config.samples
        for setup in self.config.root_setups():
            params = {'setup': setup.label(), 'samples': samples}
            xxz_R, tau_R = RMatrix.xxz(setup.q), RMatrix.tau(setup.omega)

            families = {
                'spin-xxz': lambda: self._spin(setup, lambda spin, rho, nu: lax_xxz(spin.uq, rho, nu), xxz_R),
                'spin-tau': lambda: self._spin(setup, lambda spin, rho, nu: lax_tau(spin.uw, rho, nu), tau_R),
                'cyclic-tau': lambda: self._cyclic_tau(setup, tau_R),
                'cpm': lambda: self._triples(lambda pp, p: lax_cpm(pp, p, setup), tau_R),
                'n-xxz': lambda: self._triples(lambda pp, p: lax_cyclic_big(pp, p, setup, 'xxz'), xxz_R),
                'n-tau': lambda: self._triples(lambda pp, p: lax_cyclic_big(pp, p, setup, 'tau'), tau_R),
                'n-dagger': lambda: self._triples(lambda pp, p: lax_cyclic_big(pp, p, setup, 'dagger'), tau_R),
            }
            for name, fn in families.items():
                self.check(f'{name}[{setup.label()}]', params, fn, tol)

            self.check(f'negative-control[{setup.label()}]', params,
                       lambda: self._perturbed(setup, tau_R) >= NEGATIVE_CONTROL_FLOOR, 0.0)

    def _spin(self, setup, build, R) -> float:
        worst = 0.0
        for d in SPIN_DIMENSIONS:
            spin = spin_rep(d, setup.q)
            for _ in range(self.config.samples):
                rho, nu = random_nonzero(self.rng, 2)
                lax = build(spin, rho, nu)
                worst = max(worst, check_yb(R, lax, lax, self.config.samples, self.rng))
        return worst

    def _cyclic_tau(self, setup, R) -> float:
        worst = 0.0
        for _ in range(self.config.samples):
            cp = CyclicParams.random(self.rng)
            rho, nu = random_nonzero(self.rng, 2)
            for gen in (induced_uw(setup, cp), descended_rep(setup, cp), dagger_rep(setup, cp)):
                lax = lax_tau(gen, rho, nu)
                worst = max(worst, check_yb(R, lax, lax, self.config.samples, self.rng))
        return worst

    def _triples(self, build, R) -> float:
        worst = 0.0
        for _ in range(self.config.samples):
            lax = build(random_triple(self.rng), random_triple(self.rng))
            worst = max(worst, check_yb(R, lax, lax, self.config.samples, self.rng))
        return worst

    def _perturbed(self, setup, R) -> float:
        lax = lax_cpm(random_triple(self.rng), random_triple(self.rng), setup)
        broken = lax.perturbed(0, 1, power=0, eps=1e-3)
        return check_yb(R, broken, broken, self.config.samples, self.rng)


class QuantumGroupSuite(VerificationSuite):
    """Defining relations of U_q(sl₂) and U_ω(sl₂) in spin and cyclic representations"""

    suite_id = 'qgroup-relations'
    anchor = ('(Uq) (qUw) (spinrp) (crep) (crepU) (crXZ) (cycUdag) '
              'U_q(sl₂) and U_ω(sl₂) relations, cyclic representations')
    description = 'spin reps d ≤ 4, cyclic C^n and C^N representations, closed form vs derived E±'

    def _run_checks(self):
        tol = self.config.tolerance('identity')
        for setup in self.config.root_setups():
            label = setup.label()
            for d in SPIN_DIMENSIONS:
                spin = spin_rep(d, setup.q)
                params = {'setup': label, 'd': d, 'degenerate': spin.degenerate}
                self.check(f'spin-uq[{label},d={d}]', params, spin.uq.max_residual, tol)
                self.check(f'spin-uw[{label},d={d}]', params, spin.uw.max_residual, tol)

            for draw in range(self.config.samples):
                cp = CyclicParams.random(self.rng)
                params = {'setup': label, 'draw': draw}
                tag = f'{label},draw={draw}'
                self.check(f'cyclic-uq[{tag}]', params, lambda: cyclic_rep_uq(setup, cp).max_residual(), tol)
                self.check(f'induced-uw[{tag}]', params, lambda: induced_uw(setup, cp).max_residual(), tol)
                self.check(f'descended-uw[{tag}]', params, lambda: max(
                    descended_rep(setup, cp, sign).max_residual() for sign in (1, -1)), tol)
                self.check(f'dagger-uw[{tag}]', params, lambda: dagger_rep(setup, cp).max_residual(), tol)
                self.check(f'closed-form[{tag}]', params, lambda: induced_uw(setup, cp).distance(
                    uw_from_uq(cyclic_rep_uq(setup, cp))), tol / 10)
                self.check(f'power-scalar[{tag}]', params, lambda: self._power(setup, cp), tol)
                self.check(f'twist-equivalence[{tag}]', params, lambda: max(
                    twist_equivalence(setup, cp, 1, space) for space in ('descended', 'induced')), tol)

    @staticmethod
    def _power(setup, cp) -> float:
        Eplus = induced_uw(setup, cp).Eplus
        return relative_residual(np.linalg.matrix_power(Eplus, setup.n),
                                 power_scalar(setup, cp) * np.eye(setup.n))


class GaugeSuite(VerificationSuite):
    """Gauge and twist equivalences of L-operators and their transfer-matrix consequences"""

    suite_id = 'gauge'
    anchor = "(Lgaequ) (LXXZg) (aminus) (ltwp) (Lrelcy) (tauT) gauge equivalences, twists, XXZ/τ⁽²⁾ relations"
    description = 'minus gauges, l-twists, XXZ vs τ-type L-operators and transfer matrices, inhomogeneous reduction'

    def _run_checks(self):
        tol = self.config.tolerance('identity')
        s = self.config.s
        for setup in self.config.root_setups():
            label = setup.label()
            pp, p = random_triple(self.rng), random_triple(self.rng)
            params = {'setup': label, 'p_prime': pp.to_json(), 'p': p.to_json(), 's': s}

            self.check(f'minus-gauge[{label}]', params, lambda: check_gauge_relations(setup, pp, p), tol)
            self.check(f'xxz-tau-lax[{label}]', params, lambda: check_llrel(pp, p, setup, s)['residual'], tol)
            for variant in ('xxz', 'tau'):
                self.check(f'round-twist-{variant}[{label}]', params,
                           lambda: check_twist_conjugation(setup, pp, p, 1, 'round', variant), tol)
            self.check(f'round-twist-cpm[{label}]', params,
                       lambda: check_twist_conjugation(setup, pp, p, 2, 'round', 'cpm'), tol)
            for variant in ('dagger', 'cpm'):
                self.check(f'square-twist-{variant}[{label}]', params,
                           lambda: check_twist_conjugation(setup, pp, p, 1, 'square', variant, l_prime=1), tol)

            cfg = self.config.chain(setup)
            self.check(f'xxz-t2-transfer[{label}]', {**params, 'L': cfg.L},
                       lambda: verify_lrelcy(cfg, s)['residual'], tol)
            self._spin_chain(setup, cfg.L, cfg.r, tol)

    def _spin_chain(self, setup, L, r, tol):
        label = setup.label()
        s, t = self.config.s, self.config.t
        for d in (2, 3):
            spin = spin_rep(d, setup.q)
            rhos = random_nonzero(self.rng, L)
            nus = random_nonzero(self.rng, L)
            nu = complex(random_nonzero(self.rng, 1)[0])
            params = {'setup': label, 'd': d, 'L': L, 'r': r}
            self.check(f'spin-gauge[{label},d={d}]', params,
                       lambda: xxz_gauge_residual(spin.uq, rhos[0], nu, s), tol)
            self.check(f'spin-tau-xxz[{label},d={d}]', params,
                       lambda: verify_tau_t_spin(spin.uq, rhos, nu, s, r), tol)
            self.check(f'inhomogeneous-tau[{label},d={d}]', params,
                       lambda: verify_inhomogeneous_tau([spin.uw] * L, rhos, nus, nu, t, setup.omega ** r), tol)
            self.check(f'inhomogeneous-xxz[{label},d={d}]', params,
                       lambda: verify_inhomogeneous_xxz(spin.uq, rhos, nus, nu, s, setup.q ** (-2 * r)), tol)
