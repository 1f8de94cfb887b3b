"""
Configuration module for smoothed-axioms
Centralized settings with environment variable overrides
"""
import logging
import os
from typing import List


class Config:
    """Configuration class with environment variable support"""

    # Computational bounds
    PUT_MAX_ALTERNATIVES = int(os.getenv("PUT_MAX_ALTERNATIVES", "8"))
    CL_LP_MAX_ALTERNATIVES = int(os.getenv("CL_LP_MAX_ALTERNATIVES", "6"))
    ACTIVATION_MAX_N = int(os.getenv("ACTIVATION_MAX_N", "30"))
    EXACT_PMV_MAX_N = int(os.getenv("EXACT_PMV_MAX_N", "8"))
    EXACT_PMV_MAX_M = int(os.getenv("EXACT_PMV_MAX_M", "4"))

    # Monte Carlo
    DEFAULT_SEED = int(os.getenv("SMOOTHED_SEED", "0"))
    DEFAULT_TRIALS = int(os.getenv("SMOOTHED_TRIALS", "2000"))
    DEFAULT_JOBS = int(os.getenv("SMOOTHED_JOBS", str(os.cpu_count() or 1)))

    # Data storage
    RESULTS_DIR = os.getenv("RESULTS_DIR", "./results")
    FIXTURES_DIR = os.getenv("FIXTURES_DIR", "./fixtures")
    PREFLIB_DIR = os.getenv("PREFLIB_DIR", "./data/preflib")
    CSV_ENCODING = "utf-8"

    # Corpus download
    HTTP_TIMEOUT = int(os.getenv("HTTP_TIMEOUT", "30"))
    USER_AGENT = os.getenv("USER_AGENT", "smoothed-axioms/1.0 (+corpus fetch)")

    # Logging
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
    LOG_FILE = os.getenv("LOG_FILE", "")
    LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    @classmethod
    def setup_logging(cls, level: str = None):
        """Configure root logging once"""
        handlers: List[logging.Handler] = [logging.StreamHandler()]
        if cls.LOG_FILE:
            handlers.append(logging.FileHandler(cls.LOG_FILE))
        logging.basicConfig(
            level=getattr(logging, (level or cls.LOG_LEVEL).upper(), logging.INFO),
            format=cls.LOG_FORMAT,
            handlers=handlers,
        )

    @classmethod
    def create_results_dir(cls) -> str:
        """Create results directory if it doesn't exist"""
        os.makedirs(cls.RESULTS_DIR, exist_ok=True)
        return cls.RESULTS_DIR

    @classmethod
    def project_root(cls) -> str:
        """Repository root (parent of utils/)"""
        return os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

    @classmethod
    def fixtures_path(cls, *parts: str) -> str:
        base = cls.FIXTURES_DIR
        if not os.path.isabs(base):
            base = os.path.join(cls.project_root(), base)
        return os.path.join(base, *parts)
