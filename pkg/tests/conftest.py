"""
Test configuration and fixtures.

Provides common fixtures for unit and integration tests.
"""

import json
import os

import pytest

# Set test environment before importing app modules
os.environ["SWARM_LOG"] = "WARNING"
os.environ.pop("SWARM_WORKERS", None)

from src.config import TestConfig  # noqa: E402
from src.domain import (  # noqa: E402
    BimodalController,
    MRState,
    RobotState,
    Scenario,
    SimConfig,
    WorldParams,
)


@pytest.fixture
def world():
    """Default e-puck world."""
    return WorldParams()


@pytest.fixture
def test_config():
    """Application configuration for tests."""
    return TestConfig()


@pytest.fixture
def u_star():
    """Spin-then-charge controller."""
    return BimodalController.u_star()


@pytest.fixture
def u_prev():
    return BimodalController.u_prev()


@pytest.fixture
def u_prev_revised():
    return BimodalController.u_prev_revised()


@pytest.fixture
def short_sim():
    """Short, deterministic run configuration."""
    return SimConfig(time_budget=60.0, stationarity_window=1.0)


@pytest.fixture
def facing_pair(world):
    """Two robots 40 cm apart that see each other."""
    return MRState(
        robots=(RobotState(0.0, 0.0, 0.0), RobotState(40.0, 0.0, 3.141592653589793)),
        world=world,
    )


@pytest.fixture
def facing_scenario(facing_pair, u_star, short_sim):
    """u* on a facing pair; aggregates within a few seconds."""
    return Scenario(initial=facing_pair, controller=u_star, sim=short_sim, label="facing")


@pytest.fixture
def sample_scenario_data():
    """Scenario file contents as a dict."""
    return {
        "version": 1,
        "label": "facing",
        "seed": 3,
        "world": {"r": 3.7, "d_iw": 5.1, "v_max": 12.8, "rho": 0.185},
        "controller": [-0.5, 0.5, 1.0, 1.0],
        "robots": [
            {"x": 0.0, "y": 0.0, "theta": 0.0},
            {"x": 40.0, "y": 0.0, "theta": 3.141592653589793},
        ],
        "sim": {"time_budget": 60.0, "stationarity_window": 1.0},
    }


@pytest.fixture
def scenario_file(tmp_path, sample_scenario_data):
    """Scenario JSON written to a temporary file."""
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(sample_scenario_data))
    return path
