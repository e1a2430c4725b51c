"""
Chiral Potts suites: Boltzmann weights, commuting transfer matrices, τ⁽²⁾T relations, duality
"""
import logging
from abc import abstractmethod
from typing import Dict, List, Tuple

import numpy as np

from algebra.cpm import (
    Rapidity,
    Vertical,
    boltzmann,
    commutation_residuals,
    cpm_transfer,
    draw_rapidity,
    dual_rapidity,
    p_minus_rapidities,
    tauT_relation,
    verify_cpm_duality,
    verify_fourier_weights,
    verify_rapidity_pairing,
    verify_t2_cp_correspondence,
)
from algebra.decomp import multi_indices
from algebra.weyl_core import RootSetup, relative_residual
from services.base_service import VerificationSuite

logger = logging.getLogger(__name__)

OFF_CURVE_SHIFT = 1e-3
NEGATIVE_CONTROL_FLOOR = 1e-5


class ChiralPottsSuite(VerificationSuite):
    """Shared draws: one chain of verticals per (N, k′) on the curve W_{k′}"""

    def blocks(self) -> List[Tuple[RootSetup, complex, List[Vertical]]]:
        """One representative setup per distinct N, crossed with every configured k′"""
        representatives: Dict[int, RootSetup] = {}
        for setup in self.config.root_setups():
            representatives.setdefault(setup.N, setup)
        blocks = []
        for N, setup in sorted(representatives.items()):
            for k_prime in self.config.cpm_moduli:
                blocks.append((setup, k_prime, self.draw_verticals(k_prime, N, self.config.L)))
        return blocks

    def draw_verticals(self, k_prime: complex, N: int, L: int) -> List[Vertical]:
        drawn: List[Rapidity] = []
        for _ in range(2 * L):
            drawn.append(draw_rapidity(self.rng, k_prime, N, avoid=drawn))
        return [(drawn[2 * l], drawn[2 * l + 1]) for l in range(L)]

    def draw_horizontal(self, k_prime: complex, N: int, verticals: List[Vertical]) -> Rapidity:
        return draw_rapidity(self.rng, k_prime, N, avoid=[v for pair in verticals for v in pair])

    @staticmethod
    def block_params(setup: RootSetup, k_prime: complex, verticals: List[Vertical]) -> Dict:
        return {'N': setup.N, 'k_prime': k_prime, 'L': len(verticals),
                'verticals': [{'p_prime': pp.to_json(), 'p': p.to_json()} for pp, p in verticals]}

    def _run_checks(self):
        for setup, k_prime, verticals in self.blocks():
            self.require_dim(setup.N ** len(verticals))
            self.run_block(setup, k_prime, verticals, f'N={setup.N},k={k_prime:.3g}')

    @abstractmethod
    def run_block(self, setup: RootSetup, k_prime: complex, verticals: List[Vertical], tag: str):
        """Checks for one block of draws"""
        pass


class WeightsSuite(ChiralPottsSuite):
    suite_id = 'cpm-weights'
    anchor = '(cpmC) (WW) (pp*ch) chiral Potts curve and Boltzmann weights'
    description = 'curve membership, N-periodicity, Fourier duality of W and W̄, single-site transfer entries'

    def run_block(self, setup, k_prime, verticals, tag):
        params = self.block_params(setup, k_prime, verticals)
        q = self.draw_horizontal(k_prime, setup.N, verticals)
        rapidities = [q] + [v for pair in verticals for v in pair]
        pp, p = verticals[0]

        self.check(f'curve[{tag}]', params,
                   lambda: max(v.curve_residual() for v in rapidities), self.config.tolerance('curve'))
        self.check(f'periodicity[{tag}]', params,
                   lambda: max(boltzmann(v, q).periodicity for v in rapidities[1:]),
                   self.config.tolerance('periodicity'))
        self.check(f'fourier[{tag}]', params,
                   lambda: verify_fourier_weights(p, q), self.config.tolerance('cpm_commute'))
        self.check(f'dual-curve[{tag}]', params,
                   lambda: max(dual_rapidity(v).curve_residual() for v in rapidities), self.config.tolerance('curve'))
        self.check(f'single-site[{tag}]', params,
                   lambda: self._single_site(pp, p, q), self.config.tolerance('identity'))
        self.check(f'off-curve[{tag}]', params,
                   lambda: boltzmann(p._replace(mu=p.mu * (1 + OFF_CURVE_SHIFT)), q).periodicity
                   >= NEGATIVE_CONTROL_FLOOR, 0.0)

    @staticmethod
    def _single_site(pp: Rapidity, p: Rapidity, q: Rapidity) -> float:
        """L = 1: T_{σσ′} = W_{pq}(σ − σ′)·W̄_{p′q}(σ − σ′)"""
        N = q.N
        own, nxt = boltzmann(p, q), boltzmann(pp, q)
        diff = (np.arange(N)[:, None] - np.arange(N)[None, :]) % N
        return relative_residual(cpm_transfer('T', q, [(pp, p)]), own.W[diff] * nxt.W_bar[diff])


class CommutingSuite(ChiralPottsSuite):
    suite_id = 'cpm-commute'
    anchor = '(ThatT) commuting chiral Potts transfer matrices'
    description = 'T̂T and TT̂ products commute across rapidities; T commutes with the total shift'

    def run_block(self, setup, k_prime, verticals, tag):
        tol = self.config.tolerance('cpm_commute')
        for r in range(setup.N):
            params = {**self.block_params(setup, k_prime, verticals), 'r': r}
            rapidities = [self.draw_horizontal(k_prime, setup.N, verticals) for _ in range(4)]
            self.check(f'commute[{tag},r={r}]', params,
                       lambda: commutation_residuals(rapidities, verticals, r), tol)


class TauTSuite(ChiralPottsSuite):
    suite_id = 'tauT'
    anchor = '(tauTU) τ⁽²⁾(t_q)T relations'
    description = 'both functional relations between τ⁽²⁾ and the chiral Potts T at random rapidities'

    def run_block(self, setup, k_prime, verticals, tag):
        tol = self.config.tolerance('tau_t')
        r = self.config.r
        for draw in range(self.config.samples):
            q = self.draw_horizontal(k_prime, setup.N, verticals)
            params = {**self.block_params(setup, k_prime, verticals), 'r': r, 'q': q.to_json()}
            self.check(f'tau-t[{tag},draw={draw}]', params,
                       lambda: tauT_relation(q, verticals, r, setup), tol)


class CpmDualitySuite(ChiralPottsSuite):
    suite_id = 'cpm-duality'
    anchor = "(TT*) (CPp-) (t2p'pCP) chiral Potts duality, minus rapidities, t⁽²⁾ and CP τ⁽²⁾"
    description = 'T and T̂ under p ↦ p* in every sector, U′ pairing, minus rapidities, t⁽²⁾ on C^{i⃗}'

    def _run_checks(self):
        super()._run_checks()
        self._correspondence()

    def run_block(self, setup, k_prime, verticals, tag):
        tol = self.config.tolerance('cpm_commute')
        r = self.config.r
        params = {**self.block_params(setup, k_prime, verticals), 'r': r}
        q = self.draw_horizontal(k_prime, setup.N, verticals)
        for Q in range(setup.N):
            self.check(f'duality[{tag},Q={Q}]', {**params, 'Q': Q},
                       lambda: self._duality(q, verticals, r, Q, setup), tol)
        self.check(f'rapidity-pairing[{tag}]', params,
                   lambda: verify_rapidity_pairing(q, verticals, r), tol)

    def _duality(self, q, verticals, r, Q, setup) -> float:
        result = verify_cpm_duality(q, verticals, r, Q, setup)
        curve_tol = self.config.tolerance('curve')
        if result['dual_curve'] > curve_tol:
            logger.warning("dual rapidities miss their curve by %.2e", result['dual_curve'])
        return max(result['T'], result['That'])

    def _correspondence(self):
        """Per setup: minus rapidities on their curves, t⁽²⁾ on C^{i⃗} against the CP τ⁽²⁾"""
        r, t = self.config.r, self.config.t
        for setup in self.config.root_setups():
            label = setup.label()
            k_prime = self.config.cpm_moduli[0]
            verticals = self.draw_verticals(k_prime, setup.N, self.config.L)
            self.require_dim(setup.n ** len(verticals))
            params = {**self.block_params(setup, k_prime, verticals), 'setup': label, 'r': r, 't': t}

            for l, (pp, p) in enumerate(verticals):
                self.check(f'minus-curves[{label},site={l}]', params,
                           lambda: p_minus_rapidities(pp, p, setup).curve_residuals(),
                           self.config.tolerance('curve') * 1e3)

            if setup.is_odd:
                i_vecs = multi_indices(len(verticals))
            else:
                i_vecs = [(i,) * len(verticals) for i in (0, 1)]
            for i_vec in i_vecs:
                self.check(f't2-cp[{label},i={i_vec}]', {**params, 'i': list(i_vec)},
                           lambda: verify_t2_cp_correspondence(verticals, i_vec, r, t, setup),
                           self.config.tolerance('cpm_commute'))
