"""
Chain suites: decomposition, pairing, duality, comparison and spectra
"""
import logging
from typing import Dict, List

import pandas as pd
import scipy.linalg

from algebra.decomp import (
    EMBEDDING_KINDS,
    direct_sum_rank,
    embedding,
    multi_indices,
    verify_pairing,
    verify_t2cyl,
    verify_t2dag,
    verify_xxzt_odd,
)
from algebra.duality import (
    check_factorization,
    product_form_transfer,
    psi_matrix,
    verify_comparison,
    verify_duality,
)
from algebra.transfer import (
    FAMILIES,
    ChainConfig,
    sector_basis,
    sector_projector_residual,
    transfer_matrix,
)
from algebra.weyl_core import relative_residual
from services.base_service import SPECTRA_COLUMNS, VerificationSuite

logger = logging.getLogger(__name__)

TRANSFER_KEYS = ('blocks', 'invariance', 'trace', 'projection', 'charge')
DAGGER_KEYS = TRANSFER_KEYS + ('x_prime_transfer', 'conjugation', 'pairing')
OPERATOR_KEYS = ('operator', 'z_prime_transfer')
DUALITY_KEYS = ('residual',)


def _pick(result: Dict[str, float], keys) -> float:
    return max(float(result[key]) for key in keys if key in result)


def _spectral_point(config, family: str) -> complex:
    return config.s if family == 'xxz-cyclic' else config.t


class DecompositionSuite(VerificationSuite):
    """C^n ⊗ … ⊗ C^n split into cyclic N-dimensional pieces"""

    suite_id = 'decomp'
    anchor = "(Cpm) (Cpmdag) (Wid) (Cis) (t2p'p) (pp'dag) decomposition of t⁽²⁾ and t† over cyclic N-subspaces"
    description = 'embeddings, blockwise intertwining for every i⃗, direct-sum rank, odd-n XXZ relation'

    def _run_checks(self):
        tol = self.config.tolerance('identity')
        for setup in self.config.root_setups():
            label = setup.label()
            cfg = self.config.chain(setup, r_prime=2 * self.config.r)
            self.require_dim(setup.n ** cfg.L)
            base = {'setup': label, 'L': cfg.L, 'r': cfg.r, 'r_prime': cfg.r_prime}

            for kind in EMBEDDING_KINDS:
                self.check(f'embedding-{kind}[{label}]', {'setup': label, 'kind': kind},
                           lambda: max(max(embedding(setup, kind).weyl_relations().values()),
                                       embedding(setup, kind).isomorphism_residual()), tol)

            dagger_cfg = cfg.with_sites(cfg.sites, r_prime=-cfg.r)
            for i_vec in multi_indices(cfg.L):
                params = {**base, 'i': list(i_vec)}
                self.check(f't2-subspace[{label},i={i_vec}]', params,
                           lambda: _pick(verify_t2cyl(cfg, i_vec), TRANSFER_KEYS), tol)
                self.check(f'dagger-subspace[{label},i={i_vec}]', {**params, 'r_prime': dagger_cfg.r_prime},
                           lambda: _pick(verify_t2dag(dagger_cfg, i_vec), DAGGER_KEYS), tol)

            if setup.is_odd:
                self.check(f'xxz-odd[{label}]', {**base, 's': self.config.s},
                           lambda: verify_xxzt_odd(cfg, self.config.s), tol)
            else:
                for kind in ('plain', 'dagger'):
                    self.check(f'direct-sum-{kind}[{label}]', {'setup': label, 'L': cfg.L, 'kind': kind},
                               lambda: self._full_rank(setup, cfg.L, kind), 0.0)

    @staticmethod
    def _full_rank(setup, L: int, kind: str) -> bool:
        rank, total = direct_sum_rank(setup, L, kind)
        return rank == total == setup.n ** L


class PairingSuite(VerificationSuite):
    """C^{i⃗} against C^{i⃗+1} through Ẑ′, at operator and eigenvector level"""

    suite_id = 'pairing'
    anchor = "(Cis) (V'bas) (XXZcyc) Ẑ′ pairing of subspaces and XXZ eigenvectors"
    description = 'operator pairing for every i⃗; eigenvectors, eigenvalues and charges for n = 2N, both orientations'

    def _run_checks(self):
        tol = self.config.tolerance('identity')
        eigen_tol = self.config.tolerance('eigen')
        s = self.config.s
        for setup in self.config.root_setups():
            label = setup.label()
            cfg = self.config.chain(setup, r_prime=2 * self.config.r)
            self.require_dim(setup.n ** cfg.L)
            for i_vec in multi_indices(cfg.L):
                params = {'setup': label, 'L': cfg.L, 'r': cfg.r, 'i': list(i_vec), 's': s}
                if setup.is_odd:
                    self.check(f'operator[{label},i={i_vec}]', params,
                               lambda: _pick(verify_pairing(cfg, i_vec, s), OPERATOR_KEYS), tol)
                    continue
                for orientation in ('forward', 'reverse'):
                    tag = f'{label},i={i_vec},{orientation}'
                    outcome: Dict[str, float] = {}
                    self.check(f'operator[{tag}]', {**params, 'orientation': orientation},
                               lambda: self._operator_part(outcome, verify_pairing(
                                   cfg, i_vec, s, eigen=True, orientation=orientation, eigen_tol=eigen_tol)), tol)
                    self.check(f'eigenvectors[{tag}]', {**params, 'orientation': orientation},
                               lambda: _pick(outcome, ('eigenvector', 'charge')), eigen_tol)

    @staticmethod
    def _operator_part(outcome: Dict[str, float], result: Dict[str, float]) -> float:
        outcome.update(result)
        return _pick(result, OPERATOR_KEYS)


class DualitySuite(VerificationSuite):
    """Face-basis dualities and the link-weight product form"""

    suite_id = 'duality'
    anchor = ("(Psi) (Psi') (Upp') (UUdag) (XXZU) (taupd) "
              'face/hat dualities of τ⁽²⁾, t⁽²⁾, t† and the XXZ transfer matrix')
    description = 'plain, dagger and XXZ dualities in every sector; product form of all four families'

    def _run_checks(self):
        tol = self.config.tolerance('identity')
        for setup in self.config.root_setups():
            label = setup.label()
            cfg = self.config.chain(setup)
            self.require_dim(setup.n ** cfg.L)
            base = {'setup': label, 'L': cfg.L, 'r': cfg.r, 'r_prime': cfg.r_prime}

            for Q in range(setup.N):
                self._duality('t2d', f'{label},Q={Q}', {**base, 'Q': Q}, cfg, Q)
                self.check(f'psi-unitary[{label},Q={Q}]', {**base, 'Q': Q},
                           lambda: self._psi(setup, cfg, Q), tol)
            for Q in range(setup.n):
                for direction in ('forward', 'reverse'):
                    self._duality('tdagd', f'{label},Q={Q},{direction}',
                                  {**base, 'Q': Q, 'direction': direction}, cfg, Q, direction)
                self._duality('xxzdu', f'{label},Q={Q}', {**base, 'Q': Q}, cfg, Q)

            for family in FAMILIES:
                x = _spectral_point(self.config, family)
                params = {**base, 'family': family, 'x': x}
                self.check(f'product-form-{family}[{label}]', params,
                           lambda: relative_residual(product_form_transfer(cfg, family, x),
                                                     transfer_matrix(cfg, family)(x)), tol)
                pp, p = cfg.sites[0]
                self.check(f'factorization-{family}[{label}]', params,
                           lambda: check_factorization(pp, p, setup, family, x), tol)

    def _duality(self, which: str, tag: str, params: Dict, cfg: ChainConfig, Q: int,
                 direction: str = 'forward'):
        """One duality check; with the eigen flag, the spectra as a second check"""
        eigen = self.config.eigen
        outcome: Dict[str, float] = {}

        def identity() -> float:
            outcome.update(verify_duality(which, cfg, Q, direction=direction, eigen=eigen))
            return _pick(outcome, DUALITY_KEYS)

        self.check(f'{which}[{tag}]', params, identity, self.config.tolerance('identity'))
        if eigen:
            self.check(f'{which}-spectrum[{tag}]', params,
                       lambda: outcome['spectrum'], self.config.tolerance('eigen'))

    @staticmethod
    def _psi(setup, cfg: ChainConfig, Q: int) -> float:
        face = sector_basis(setup, cfg.L, cfg.r, Q)
        return psi_matrix(setup, cfg.L, (cfg.r, Q)).unitarity_residual(face.face_basis)


class ComparisonSuite(VerificationSuite):
    """Plain against dagger duality: coincidence for n odd, charge containment for n = 2N"""

    suite_id = 'comparison'
    anchor = '(CrQV) (Nodbas) comparison of the plain and dagger dualities'
    description = 'n = N odd: four sector matrices coincide; n = 2N: charge content of lifted sectors'

    def _run_checks(self):
        tol = self.config.tolerance('identity')
        for setup in self.config.root_setups():
            label = setup.label()
            cfg = self.config.chain(setup)
            self.require_dim(setup.n ** cfg.L)
            for Q in range(setup.N):
                params = {'setup': label, 'L': cfg.L, 'r': cfg.r, 'Q': Q, 't': self.config.t}
                if setup.is_odd:
                    self.check(f'odd-coincidence[{label},Q={Q}]', params,
                               lambda: verify_comparison(cfg, Q, self.config.t), tol)
                else:
                    for fact in ('plain_split', 'dagger_single'):
                        self.check(f"{fact.replace('_', '-')}[{label},Q={Q}]", params,
                                   lambda: verify_comparison(cfg, Q)[fact], 0.0)


class SpectraSuite(VerificationSuite):
    """Sector-resolved eigenvalues of one transfer-matrix family"""

    suite_id = 'spectra'
    anchor = "(Tranf) (Vbasis) (V'bas) transfer-matrix spectra by charge sector"
    description = 'eigenvalues of the chosen family in every charge sector, exported as CSV'

    def _run_checks(self):
        tol = self.config.tolerance('identity')
        family = self.config.family
        x = _spectral_point(self.config, family)
        frames = {}
        for setup in self.config.root_setups():
            label = setup.label()
            cfg = self.config.chain(setup)
            primed = family != 'tau-cpm'
            d = setup.n if primed else setup.N
            self.require_dim(d ** cfg.L)
            rows: List[dict] = []
            params = {'setup': label, 'family': family, 'L': cfg.L, 'x': x}
            self.check(f'sector-count[{label}]', params,
                       lambda: self._sectors(cfg, family, x, d, primed, rows, tol), 0.0)
            frames[label] = pd.DataFrame(rows, columns=SPECTRA_COLUMNS)
        self.artifacts['spectra'] = self.combine_dataframes(frames, add_suite_column=False)

    @staticmethod
    def _sectors(cfg: ChainConfig, family: str, x: complex, d: int, primed: bool,
                 rows: List[dict], tol: float) -> bool:
        T = transfer_matrix(cfg, family)(x)
        r = cfg.r_prime if primed else cfg.r
        count = 0
        invariant = True
        for Q in range(d):
            H = sector_basis(cfg.setup, cfg.L, 0, Q, primed).spin_basis
            invariant &= sector_projector_residual(T, H) <= tol
            for value in scipy.linalg.eigvals(H.conj().T @ T @ H):
                rows.append({'family': family, 'r': r, 'Q': Q,
                             'spectral_re': x.real, 'spectral_im': x.imag,
                             'eig_re': float(value.real), 'eig_im': float(value.imag)})
                count += 1
        logger.debug("%s spectrum on %s: %d eigenvalues", family, cfg.setup.label(), count)
        return invariant and count == d ** cfg.L
