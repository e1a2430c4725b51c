"""
Suite catalogue and the concurrent runner
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Type

import numpy as np

from config.settings import settings
from services.algebra_suites import GaugeSuite, QuantumGroupSuite, YangBaxterSuite
from services.base_service import Report, VerificationSuite
from services.chain_suites import (
    ComparisonSuite,
    DecompositionSuite,
    DualitySuite,
    PairingSuite,
    SpectraSuite,
)
from services.cpm_suites import CommutingSuite, CpmDualitySuite, TauTSuite, WeightsSuite
from utils.parsing import ConfigError, RunConfig

logger = logging.getLogger(__name__)

SUITES: Dict[str, Type[VerificationSuite]] = {
    cls.suite_id: cls for cls in (
        YangBaxterSuite,
        QuantumGroupSuite,
        GaugeSuite,
        DecompositionSuite,
        PairingSuite,
        DualitySuite,
        ComparisonSuite,
        WeightsSuite,
        CommutingSuite,
        TauTSuite,
        CpmDualitySuite,
        SpectraSuite,
    )
}


def catalogue() -> List[Dict[str, str]]:
    """Suites in their fixed order with the formula family each one exercises"""
    return [{'id': suite_id, 'anchor': cls.anchor, 'description': cls.description}
            for suite_id, cls in SUITES.items()]


def selected_suites(config: RunConfig) -> List[str]:
    """
    Suite ids to run, in catalogue order; no selection means every suite.

    Raises:
        ConfigError: an unknown suite id
    """
    if config.suites is None:
        return list(SUITES)
    unknown = [s for s in config.suites if s not in SUITES]
    if unknown:
        raise ConfigError(f"unknown suite(s) {unknown}, expected ids from {list(SUITES)}")
    return [s for s in SUITES if s in config.suites]


def run_suites(config: RunConfig) -> Report:
    """
    Run the selected suites concurrently and assemble one report.

    Each suite draws from its own generator, spawned from the run seed by catalogue
    position, so the report does not depend on scheduling.
    """
    selected = selected_suites(config)
    streams = np.random.SeedSequence(config.seed).spawn(len(SUITES))
    positions = {suite_id: k for k, suite_id in enumerate(SUITES)}
    suites = [SUITES[s](config, np.random.default_rng(streams[positions[s]])) for s in selected]

    logger.info("running %d suite(s) with seed %d", len(suites), config.seed)
    if suites:
        with ThreadPoolExecutor(max_workers=settings.WORKERS) as pool:
            results = list(pool.map(lambda suite: suite.run(), suites))
    else:
        results = []

    report = Report(seed=config.seed, suites=selected)
    for records in results:
        report.records.extend(records)
    spectra = {suite.suite_id: suite.artifacts['spectra'] for suite in suites if 'spectra' in suite.artifacts}
    if spectra:
        report.spectra = VerificationSuite.combine_dataframes(spectra, add_suite_column=False)

    summary = report.summary()
    logger.info("%d checks: %d passed, %d failed, %d errors, %d skipped", summary['total'],
                summary['passed'], summary['failed'], summary['error'], summary['skipped'])
    return report
