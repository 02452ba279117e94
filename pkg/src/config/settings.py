"""
Application configuration management.

Supports environment-based configuration with sensible defaults.
Simulator constants live here so every run, test and CLI call agrees on them.
"""

import os
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv


@dataclass
class Config:
    """Application configuration container."""

    # Logging settings
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # Simulator settings
    DT: float = 0.01  # Step size in seconds
    TIME_BUDGET: float = 5000.0  # Seconds of simulated time before TIMEOUT
    STATIONARITY_WINDOW: float = 2.0  # Seconds without motion before STATIONARY
    EPS_STATE: float = 1e-9  # Accumulated pose change treated as "no motion"
    EPS_CYCLE: float = 1e-6  # Per-coordinate tolerance of a state revisit
    CYCLE_RECORD_INTERVAL: float = 0.5  # Seconds between cycle-detector samples
    TRAJECTORY_INTERVAL: float = 0.1  # Seconds between trajectory samples

    # Contact settings
    CONTACT_TOLERANCE: float = 1e-6  # cm
    MAX_CONTACT_EVENTS: int = 8  # Per step, before the remainder is discarded
    BISECTION_ITERATIONS: int = 60

    # Geometric tolerances
    SENSOR_TOLERANCE: float = 1e-9  # cm, ray grazing a disc still counts
    AGGREGATION_TOLERANCE: float = 1e-9  # cm, discs touching still connect

    # Worker settings
    WORKER_CONCURRENCY: int = 1
    OUTPUT_DIR: str = "results"

    @classmethod
    def from_env(cls) -> "Config":
        """Create configuration from environment variables."""
        return cls(
            LOG_LEVEL=os.getenv("SWARM_LOG", cls.LOG_LEVEL).upper(),
            LOG_FORMAT=os.getenv("SWARM_LOG_FORMAT", cls.LOG_FORMAT),
            DT=float(os.getenv("SWARM_DT", cls.DT)),
            TIME_BUDGET=float(os.getenv("SWARM_TIME_BUDGET", cls.TIME_BUDGET)),
            STATIONARITY_WINDOW=float(
                os.getenv("SWARM_STATIONARITY_WINDOW", cls.STATIONARITY_WINDOW)
            ),
            WORKER_CONCURRENCY=int(os.getenv("SWARM_WORKERS", cls.WORKER_CONCURRENCY)),
            OUTPUT_DIR=os.getenv("SWARM_OUTPUT_DIR", cls.OUTPUT_DIR),
        )


@lru_cache(maxsize=1)
def get_config() -> Config:
    """Get cached configuration instance."""
    load_dotenv()
    return Config.from_env()


@dataclass
class TestConfig(Config):
    """Configuration for testing environment."""

    LOG_LEVEL: str = "DEBUG"
    TIME_BUDGET: float = 60.0
    OUTPUT_DIR: str = "test-results"
