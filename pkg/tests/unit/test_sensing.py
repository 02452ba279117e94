"""
Unit tests for the line-of-sight sensor.
"""

import math

import numpy as np
import pytest

from src.domain import MRState, RobotState
from src.services.scenarios import sample_uniform
from src.services.sensing import ray_hits_disc, sense, sense_all, visibility_region_check


class TestRayHitsDisc:
    """Tests for ray_hits_disc."""

    def test_hit_ahead(self):
        """Test a disc straight ahead."""
        t = ray_hits_disc(0.0, 0.0, 0.0, 10.0, 0.0, 2.0, tolerance=0.0)
        assert t == pytest.approx(8.0)

    def test_disc_behind_not_seen(self):
        """Test that the ray is one-sided."""
        assert ray_hits_disc(0.0, 0.0, 0.0, -10.0, 0.0, 2.0, tolerance=0.0) is None

    def test_grazing_counts(self):
        """Test that a tangent ray sees the disc."""
        assert ray_hits_disc(0.0, 0.0, 0.0, 10.0, 2.0, 2.0, tolerance=0.0) is not None

    def test_tolerance_widens_disc(self):
        """Test a ray passing just outside the disc."""
        assert ray_hits_disc(0.0, 0.0, 0.0, 10.0, 2.0 + 1e-10, 2.0, tolerance=0.0) is None
        assert ray_hits_disc(0.0, 0.0, 0.0, 10.0, 2.0 + 1e-10, 2.0, tolerance=1e-9) is not None

    def test_miss(self):
        """Test a disc well off the ray."""
        assert ray_hits_disc(0.0, 0.0, math.pi / 2, 10.0, 0.0, 2.0, tolerance=0.0) is None


class TestSense:
    """Tests for sense and sense_all."""

    def test_facing_pair(self, facing_pair):
        """Test two robots facing each other."""
        readings = sense_all(facing_pair)
        assert [r.value for r in readings] == [True, True]
        assert readings[0].seen_index == 1
        assert readings[1].seen_index == 0

    def test_back_to_back(self, world):
        """Test two robots facing away from each other."""
        state = MRState((RobotState(0, 0, math.pi), RobotState(20, 0, 0.0)), world)
        assert not any(r.value for r in sense_all(state))

    def test_nearest_robot_reported(self, world):
        """Test that the closest robot on the ray is the one reported."""
        state = MRState(
            (RobotState(0, 0, 0.0), RobotState(30, 0, 0.0), RobotState(15, 1, 0.0)),
            world,
        )
        assert sense(state, 0).seen_index == 2

    def test_robot_placed_between_is_seen_instead(self, world):
        """Test that a robot put on the ray in front of the target becomes the reading."""
        state = MRState((RobotState(0.0, 0.0, 0.0), RobotState(40.0, 0.0, math.pi / 2)), world)
        assert sense(state, 0).seen_index == 1
        blocked = MRState(state.robots + (RobotState(20.0, 2.0, math.pi / 2),), world)
        assert sense(blocked, 0).seen_index == 2
        aside = MRState(state.robots + (RobotState(20.0, 10.0, math.pi / 2),), world)
        assert sense(aside, 0).seen_index == 1

    def test_rigid_motion_keeps_readings(self, world):
        """Test that rotating and shifting a whole swarm changes no reading."""
        rng = np.random.default_rng(9)
        for seed in range(50):
            state = sample_uniform(6, side=40.0, seed=seed, world=world)
            phi = float(rng.uniform(-math.pi, math.pi))
            dx, dy = rng.uniform(-100.0, 100.0, size=2)
            moved = state.transformed(phi, dx=float(dx), dy=float(dy))
            assert sense_all(moved) == sense_all(state)

    def test_single_robot_reads_zero(self, world):
        """Test that a lone robot sees nothing."""
        state = MRState((RobotState(0, 0, 0.0),), world)
        assert not sense(state, 0).value

    def test_index_out_of_range(self, facing_pair):
        """Test the robot index bounds."""
        with pytest.raises(IndexError, match="out of range"):
            sense(facing_pair, 2)

    def test_visibility_region(self, world):
        """Test the visibility region of a pose."""
        pose = RobotState(0.0, 0.0, 0.0)
        assert visibility_region_check(pose, (50.0, 3.0), world)
        assert not visibility_region_check(pose, (50.0, 4.0), world)
        assert not visibility_region_check(pose, (-50.0, 0.0), world)
