"""
Configuration module for the weak-approximation certifier
Search bounds, Hensel precision, logging and output settings
"""

import os
from fractions import Fraction
from pathlib import Path

import psutil

# Load environment variables from a local .env file if present
try:
    from dotenv import load_dotenv
    env_path = Path(__file__).parent / ".env"
    if env_path.exists():
        load_dotenv(dotenv_path=env_path)
    else:
        load_dotenv()
except Exception:
    # os.getenv still works without python-dotenv
    pass


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(f'WACERT_{name}')
    return int(raw) if raw not in (None, '') else default


def _default_workers() -> int:
    cores = psutil.cpu_count(logical=False) or psutil.cpu_count() or 1
    return max(1, cores)


class Config:
    """Main configuration class"""

    # Local arithmetic
    HENSEL_PRECISION = _env_int('HENSEL_PRECISION', 8)

    # Prime search
    SEARCH_RADIUS = _env_int('SEARCH_RADIUS', 40)
    POSITIVITY_BOUND = Fraction(os.getenv('WACERT_POSITIVITY_BOUND', '0'))
    SEARCH_WORKERS = _env_int('SEARCH_WORKERS', _default_workers())
    SEARCH_BATCH = _env_int('SEARCH_BATCH', 64)

    # Fibration chart checks
    TRANSITION_SAMPLES = _env_int('TRANSITION_SAMPLES', 5)
    RANDOM_SEED = _env_int('RANDOM_SEED', 20240)

    # Certificates
    CERT_SCHEMA = 'wa-cert/1'
    GOLDEN_PATH = os.getenv(
        'WACERT_GOLDEN_PATH',
        str(Path(__file__).parent / 'golden' / 'verify_example.json'),
    )

    # Logging
    LOG_LEVEL = os.getenv('WACERT_LOG_LEVEL', 'INFO')
    LOG_FILE = os.getenv('WACERT_LOG_FILE', 'logs/wacert.log')
    LOG_TO_CONSOLE = os.getenv('WACERT_LOG_TO_CONSOLE', '1') not in ('0', 'false', 'no')

    @classmethod
    def validate_config(cls) -> bool:
        """Validate configuration parameters"""
        if cls.HENSEL_PRECISION < 1:
            raise ValueError("HENSEL_PRECISION must be at least 1")

        if cls.SEARCH_RADIUS < 1:
            raise ValueError("SEARCH_RADIUS must be at least 1")

        if cls.SEARCH_BATCH < 1 or cls.SEARCH_WORKERS < 1:
            raise ValueError("SEARCH_BATCH and SEARCH_WORKERS must be positive")

        if cls.POSITIVITY_BOUND < 0:
            raise ValueError("POSITIVITY_BOUND must be non-negative")

        if cls.LOG_LEVEL.upper() not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            raise ValueError(f"unknown LOG_LEVEL {cls.LOG_LEVEL!r}")

        return True
