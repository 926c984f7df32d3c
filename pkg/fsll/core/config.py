"""
Settings for the FSLL toolkit.

This module defines and loads toolkit settings from environment variables
(prefix ``FSLL_``) and an optional ``.env`` file.
"""

import logging

from dotenv import load_dotenv
from pydantic import field_validator
from pydantic_settings import BaseSettings

load_dotenv()


class Settings(BaseSettings):
    """
    Toolkit settings loaded from environment variables.
    """
    PROJECT_NAME: str = "fsll"
    VERSION: str = "0.1.0"

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # Parallelism (sampling blocks, opt-in bench cells)
    THREADS: int = 1

    # Transform
    WHT_THRESHOLD: int = 32

    # Learner defaults
    DEFAULT_EPSILON: float = 1e-4
    DEFAULT_MAX_ITERS: int = 10_000
    REFRESH_EVERY: int = 512
    PRUNE_SEED_CANDIDATES: int = 64

    # Capacity limits
    MAX_STATES: int = 2 ** 27
    ENUMERATION_MAX_VARIABLES: int = 25
    ENUMERATION_CHUNK: int = 65_536

    # Sampling
    SAMPLE_BLOCK_ROWS: int = 65_536

    # Boltzmann machine with exact expectations
    DI_TOLERANCE: float = 1e-6
    DI_MAX_ITER: int = 2000

    @field_validator("LOG_LEVEL")
    def validate_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in logging.getLevelNamesMapping():
            raise ValueError(f"Unknown log level: {v}")
        return level

    @field_validator("THREADS", "REFRESH_EVERY", "ENUMERATION_CHUNK", "SAMPLE_BLOCK_ROWS", "PRUNE_SEED_CANDIDATES")
    def validate_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    @field_validator("WHT_THRESHOLD")
    def validate_wht_threshold(cls, v: int) -> int:
        if v < 2 or v & (v - 1):
            raise ValueError("WHT threshold must be a power of two >= 2")
        return v

    model_config = {
        "case_sensitive": True,
        "env_prefix": "FSLL_",
    }


settings = Settings()
