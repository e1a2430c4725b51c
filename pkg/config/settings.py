"""
Configuration management for the cyclic-representation workbench
"""
import os
import json
import logging
from pathlib import Path
from typing import List, Dict, Any, Tuple
from dotenv import load_dotenv

# Load environment variables
env_path = Path(__file__).parent.parent / '.env'
load_dotenv(env_path)

logger = logging.getLogger(__name__)

SUPPORTED_SETUPS = [(3, 3), (2, 4), (3, 6)]


class Settings:
    """Workbench settings: tolerances, dimension caps, seeds and default chains"""

    # App settings
    APP_NAME = "Cyclic Representation Workbench"
    APP_VERSION = "1.0.0"
    DEBUG = os.getenv('DEBUG', 'False').lower() == 'true'
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO').upper()

    # Dimension limits
    MAX_DIM = int(os.getenv('WORKBENCH_MAX_DIM', '4096'))
    RECOMMENDED_DIM = int(os.getenv('WORKBENCH_RECOMMENDED_DIM', '300'))

    # Tolerances
    TOLERANCE = float(os.getenv('WORKBENCH_TOLERANCE', '1e-10'))
    EIGEN_TOLERANCE = float(os.getenv('WORKBENCH_EIGEN_TOLERANCE', '1e-8'))
    CPM_TOLERANCE = float(os.getenv('WORKBENCH_CPM_TOLERANCE', '1e-9'))
    CURVE_TOLERANCE = float(os.getenv('WORKBENCH_CURVE_TOLERANCE', '1e-12'))

    # Run settings
    SEED = int(os.getenv('WORKBENCH_SEED', '20240601'))
    WORKERS = int(os.getenv('WORKBENCH_WORKERS', '4'))
    SPECTRAL_SAMPLES = int(os.getenv('WORKBENCH_SPECTRAL_SAMPLES', '5'))

    @classmethod
    def get_setups(cls) -> List[Tuple[int, int]]:
        """Get the (N, n) pairs a run covers when none are given"""
        setups_json = os.getenv('WORKBENCH_SETUPS', '')
        if setups_json:
            try:
                return [tuple(int(v) for v in pair) for pair in json.loads(setups_json)]
            except (json.JSONDecodeError, TypeError, ValueError):
                logger.warning("WORKBENCH_SETUPS is not a JSON list of pairs; using defaults")
        return list(SUPPORTED_SETUPS)

    @classmethod
    def get_default_chain(cls) -> Dict[str, Any]:
        """Get the default chain description (complex numbers as 're+imi' strings)"""
        chain_json = os.getenv('WORKBENCH_DEFAULT_CHAIN', '')
        if chain_json:
            try:
                return json.loads(chain_json)
            except json.JSONDecodeError:
                logger.warning("WORKBENCH_DEFAULT_CHAIN is not valid JSON; using defaults")
        return {
            'L': 2,
            'r': 0,
            'p_prime': ['0.83+0.27i', '1.12-0.21i', '0.91+0.14i'],
            'p': ['1.17-0.12i', '0.74+0.39i', '1.06-0.31i'],
        }

    @classmethod
    def get_tolerances(cls) -> Dict[str, float]:
        """Get every threshold keyed by the quantity it bounds"""
        return {
            'identity': cls.TOLERANCE,
            'eigen': cls.EIGEN_TOLERANCE,
            'cpm_commute': cls.CPM_TOLERANCE,
            'tau_t': cls.EIGEN_TOLERANCE,
            'curve': cls.CURVE_TOLERANCE,
            'periodicity': cls.TOLERANCE,
        }

    @classmethod
    def validate(cls):
        """Validate settings"""
        errors = []
        warnings = []

        if cls.DEBUG:
            logger.debug("Settings - max dim: %s, seed: %s, workers: %s",
                         cls.MAX_DIM, cls.SEED, cls.WORKERS)

        for name, value in cls.get_tolerances().items():
            if not value > 0:
                errors.append(f"tolerance '{name}' must be positive")

        for N, n in cls.get_setups():
            if (N, n) not in SUPPORTED_SETUPS:
                warnings.append(f"setup (N={N}, n={n}) is outside the tested set {SUPPORTED_SETUPS}")

        if cls.WORKERS < 1:
            errors.append("WORKBENCH_WORKERS must be at least 1")

        if cls.MAX_DIM < 1:
            errors.append("WORKBENCH_MAX_DIM must be positive")
        elif cls.MAX_DIM > cls.RECOMMENDED_DIM ** 2:
            warnings.append(f"WORKBENCH_MAX_DIM={cls.MAX_DIM} allows very large dense matrices")

        if errors:
            raise ValueError(f"Configuration errors: {'; '.join(errors)}")

        for warning in warnings:
            logger.warning(warning)

        return True


# Create settings instance
settings = Settings()
