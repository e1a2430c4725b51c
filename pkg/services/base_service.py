"""
Base verification suite with per-check bookkeeping
"""
import json
import logging
import math
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from algebra.errors import DimensionCapError
from config.settings import settings
from utils.parsing import RunConfig, format_complex

logger = logging.getLogger(__name__)

REPORT_SCHEMA = 1
STATUSES = ('passed', 'failed', 'error', 'skipped')
SPECTRA_COLUMNS = ['family', 'r', 'Q', 'spectral_re', 'spectral_im', 'eig_re', 'eig_im']


def json_safe(value: Any) -> Any:
    """Complex numbers as 're+imi' strings, numpy scalars as Python numbers, tuples as lists"""
    if isinstance(value, dict):
        return {str(k): json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    if isinstance(value, (complex, np.complexfloating)):
        return format_complex(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return None if math.isnan(value) else float(value)
    return value


@dataclass
class CheckRecord:
    """One executed check"""
    check_id: str
    suite: str
    anchor: str
    parameters: Dict[str, Any]
    residual: Optional[float]
    threshold: float
    status: str
    wall_time: float = 0.0
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status == 'passed'

    def to_dict(self, with_time: bool = True) -> Dict[str, Any]:
        record = {
            'check_id': self.check_id,
            'suite': self.suite,
            'anchor': self.anchor,
            'parameters': json_safe(self.parameters),
            'residual': json_safe(self.residual),
            'threshold': self.threshold,
            'passed': self.passed,
            'status': self.status,
            'error': self.error,
        }
        if with_time:
            record['wall_time'] = round(self.wall_time, 6)
        return record


@dataclass
class Report:
    """All records of one run, in catalogue order"""
    seed: int
    suites: List[str]
    records: List[CheckRecord] = field(default_factory=list)
    spectra: Optional[pd.DataFrame] = None

    def summary(self) -> Dict[str, int]:
        counts = {status: 0 for status in STATUSES}
        for record in self.records:
            counts[record.status] += 1
        counts['total'] = len(self.records)
        return counts

    @property
    def all_passed(self) -> bool:
        """Skipped records do not fail a run; failed and error records do"""
        return all(record.status in ('passed', 'skipped') for record in self.records)

    @property
    def exit_code(self) -> int:
        return 0 if self.all_passed else 1

    def to_dict(self, with_time: bool = True) -> Dict[str, Any]:
        return {
            'schema': REPORT_SCHEMA,
            'seed': self.seed,
            'suites': list(self.suites),
            'records': [record.to_dict(with_time) for record in self.records],
            'summary': self.summary(),
        }

    def to_json(self, with_time: bool = True) -> str:
        return json.dumps(self.to_dict(with_time), sort_keys=True, indent=2)

    def to_frame(self) -> pd.DataFrame:
        """One row per record, parameters flattened to a JSON column"""
        rows = []
        for record in self.records:
            row = record.to_dict()
            row['parameters'] = json.dumps(row['parameters'], sort_keys=True)
            rows.append(row)
        return pd.DataFrame(rows)

    def write_json(self, path: str):
        with open(path, 'w') as f:
            f.write(self.to_json())
        logger.info("report written to %s", path)

    def write_spectra(self, path: str):
        frame = self.spectra if self.spectra is not None else pd.DataFrame(columns=SPECTRA_COLUMNS)
        frame.to_csv(path, index=False)
        logger.info("%d eigenvalues written to %s", len(frame), path)


class VerificationSuite(ABC):
    """Base class for suites: runs checks one by one and keeps failures as records"""

    suite_id: str = ''
    anchor: str = ''
    description: str = ''

    def __init__(self, config: RunConfig, rng: np.random.Generator):
        """
        Args:
            config: parsed run configuration
            rng: generator owned by this suite
        """
        self.config = config
        self.rng = rng
        self.records: List[CheckRecord] = []
        self.artifacts: Dict[str, Any] = {}

    @abstractmethod
    def _run_checks(self):
        """
        Execute the suite's checks through ``self.check``.
        Must be implemented by subclasses
        """
        pass

    def run(self) -> List[CheckRecord]:
        """Run every check; an exception outside a check becomes one error record"""
        self.records = []
        start = time.perf_counter()
        try:
            self._run_checks()
        except DimensionCapError as e:
            logger.warning("suite %s stopped: %s", self.suite_id, e)
            self.records.append(CheckRecord(
                f'{self.suite_id}/dimension-cap', self.suite_id, self.anchor, {'cap': e.cap, 'dim': e.dim},
                None, 0.0, 'skipped', time.perf_counter() - start, str(e)))
        except Exception as e:
            logger.exception("suite %s aborted", self.suite_id)
            self.records.append(CheckRecord(
                f'{self.suite_id}/suite', self.suite_id, self.anchor, {}, None, 0.0,
                'error', time.perf_counter() - start, str(e)))
        return self.records

    def check(self, check_id: str, parameters: Dict[str, Any], fn: Callable[[], Any],
              threshold: float, anchor: Optional[str] = None) -> Any:
        """
        Evaluate ``fn`` and record its residual against ``threshold``.

        ``fn`` returns a float, a dict of floats (the max is taken) or a bool
        (True meaning the property holds). Returns what ``fn`` returned, or None
        when it raised.
        """
        start = time.perf_counter()
        value, residual, error = None, None, None
        try:
            value = fn()
            residual = self._residual(value)
            status = 'passed' if residual <= threshold else 'failed'
        except DimensionCapError as e:
            logger.warning("%s skipped: %s", check_id, e)
            status, error = 'skipped', str(e)
        except Exception as e:
            logger.debug("%s raised %s", check_id, e)
            status, error = 'error', f'{type(e).__name__}: {e}'

        record = CheckRecord(
            check_id=f'{self.suite_id}/{check_id}',
            suite=self.suite_id,
            anchor=anchor or self.anchor,
            parameters=parameters,
            residual=residual,
            threshold=threshold,
            status=status,
            wall_time=time.perf_counter() - start,
            error=error,
        )
        if status == 'failed':
            logger.warning("%s failed: residual %.3e > %.1e", record.check_id, residual, threshold)
        self.records.append(record)
        return value

    @staticmethod
    def _residual(value: Any) -> float:
        if isinstance(value, (bool, np.bool_)):
            return 0.0 if value else 1.0
        if isinstance(value, dict):
            numbers = [float(np.real(v)) for v in value.values()
                       if isinstance(v, (int, float, np.floating)) and not isinstance(v, bool)]
            return max(numbers) if numbers else 0.0
        return float(value)

    @staticmethod
    def require_dim(dim: int, cap: Optional[int] = None):
        """
        Raises:
            DimensionCapError: dim above the configured cap
        """
        cap = settings.MAX_DIM if cap is None else cap
        if dim > cap:
            raise DimensionCapError(dim, cap)

    @staticmethod
    def combine_dataframes(dfs: Dict[str, pd.DataFrame], add_suite_column: bool = True) -> pd.DataFrame:
        """
        Combine per-suite DataFrames

        Args:
            dfs: Dictionary mapping suite ids to DataFrames
            add_suite_column: Whether to add a 'suite' column
        """
        if not dfs:
            return pd.DataFrame()

        frames = []
        for suite_id, df in dfs.items():
            if add_suite_column:
                df = df.assign(suite=suite_id)
            frames.append(df)
        return pd.concat(frames, ignore_index=True)
