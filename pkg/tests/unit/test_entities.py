"""
Unit tests for domain entities.
"""

import math

import pytest

from src.domain.entities import (
    AggregationReport,
    BimodalController,
    ContactConfig,
    ControllerCategory,
    ExperimentResult,
    ExperimentSpec,
    MRState,
    NoiseConfig,
    RobotState,
    Scenario,
    SensorReading,
    SimConfig,
    SweepSetting,
    WheelCommand,
    WorldParams,
)
from src.domain.enums import MovementClass, NoiseMode


class TestWorldParams:
    """Tests for WorldParams."""

    def test_defaults(self):
        """Test the e-puck defaults and derived padding."""
        world = WorldParams()
        assert world.robot_radius == 3.7
        assert world.inter_wheel == 5.1
        assert world.v_max == 12.8
        assert world.padding == pytest.approx(3.7 / 20)

    def test_derived_distances(self):
        """Test contact and aggregation distances."""
        world = WorldParams(robot_radius=2.0, padding=0.5)
        assert world.contact_distance == 4.0
        assert world.aggregation_distance == 5.0
        assert world.proofs_mode().padding == 0.0

    @pytest.mark.parametrize("kwargs", [
        {"robot_radius": 0.0},
        {"inter_wheel": -1.0},
        {"v_max": 0.0},
        {"padding": -0.1},
    ])
    def test_invalid_values_rejected(self, kwargs):
        """Test that non-physical constants raise."""
        with pytest.raises(ValueError):
            WorldParams(**kwargs)


class TestRobotState:
    """Tests for RobotState."""

    def test_theta_normalized(self):
        """Test that headings are stored in [-pi, pi)."""
        robot = RobotState(1.0, 2.0, 3 * math.pi)
        assert robot.theta == pytest.approx(-math.pi)

    def test_non_finite_position_rejected(self):
        """Test that NaN coordinates raise."""
        with pytest.raises(ValueError, match="finite"):
            RobotState(math.nan, 0.0)

    def test_rotated_about_origin(self):
        """Test rigid rotation of a pose."""
        robot = RobotState(1.0, 0.0, 0.0).rotated_about(math.pi / 2)
        assert robot.x == pytest.approx(0.0, abs=1e-12)
        assert robot.y == pytest.approx(1.0)
        assert robot.theta == pytest.approx(math.pi / 2)


class TestMRState:
    """Tests for MRState."""

    def test_empty_state_rejected(self):
        """Test that a state needs a robot."""
        with pytest.raises(ValueError, match="at least one robot"):
            MRState(robots=())

    def test_min_pairwise_distance(self, world):
        """Test the closest-pair distance."""
        state = MRState(
            (RobotState(0, 0), RobotState(10, 0), RobotState(0, 8)), world
        )
        assert state.min_pairwise_distance() == pytest.approx(8.0)
        assert MRState((RobotState(0, 0),), world).min_pairwise_distance() == math.inf

    def test_free_space(self, world):
        """Test overlap detection with and without tolerance."""
        touching = MRState((RobotState(0, 0), RobotState(7.4, 0)), world)
        overlapping = MRState((RobotState(0, 0), RobotState(7.3, 0)), world)
        assert touching.in_free_space()
        assert not overlapping.in_free_space()
        assert overlapping.in_free_space(tolerance=0.2)

    def test_transformed_preserves_distances(self, world):
        """Test that rigid motions keep pairwise distances."""
        state = MRState((RobotState(0, 0), RobotState(10, 3), RobotState(-4, 9)), world)
        moved = state.transformed(1.1, dx=5.0, dy=-2.0)
        assert moved.min_pairwise_distance() == pytest.approx(state.min_pairwise_distance())

    def test_from_arrays(self, world):
        """Test construction from arrays."""
        state = MRState.from_arrays([[0, 0], [10, 0]], [0.0, 1.0], world)
        assert state.n == 2
        assert state.positions().shape == (2, 2)
        assert state.headings()[1] == 1.0


class TestControllers:
    """Tests for WheelCommand and BimodalController."""

    def test_command_range_enforced(self):
        """Test that wheel speeds outside [-1, 1] raise."""
        with pytest.raises(ValueError, match=r"within \[-1, 1\]"):
            WheelCommand(1.2, 0.0)

    def test_offsets_are_clipped(self):
        """Test that noisy commands stay in range."""
        cmd = WheelCommand(0.9, -0.9).with_offsets(0.3, -0.3)
        assert cmd == WheelCommand(1.0, -1.0)

    def test_named_controllers(self):
        """Test the predefined controllers."""
        assert BimodalController.u_star().as_tuple() == (-0.5, 0.5, 1.0, 1.0)
        assert BimodalController.u_prev().as_tuple() == (-0.7, -1.0, 1.0, -1.0)
        assert BimodalController.u_prev_revised().as_tuple() == (-0.18, -1.0, 1.0, -1.0)

    def test_mode_selection(self, u_star):
        """Test that the sensor value selects the mode."""
        assert u_star.command(False) == WheelCommand(-0.5, 0.5)
        assert u_star.command(True) == WheelCommand(1.0, 1.0)

    def test_from_sequence_length(self):
        """Test that four components are required."""
        with pytest.raises(ValueError, match="4 components"):
            BimodalController.from_sequence([0.1, 0.2, 0.3])

    def test_category_label_round_trip(self):
        """Test parsing and printing category labels."""
        category = ControllerCategory.from_label("cb-rs")
        assert category.mode_a == MovementClass.CB
        assert category.mode_b == MovementClass.RS
        assert str(category) == "CB-RS"


class TestRunConfiguration:
    """Tests for run-level value objects."""

    def test_reading_consistency(self):
        """Test that a positive reading names the robot it sees."""
        assert SensorReading(True, 2).value
        with pytest.raises(ValueError, match="inconsistent"):
            SensorReading(True, None)

    def test_contact_config_bounds(self):
        """Test restitution bounds."""
        assert ContactConfig().is_plastic
        with pytest.raises(ValueError, match="restitution"):
            ContactConfig(restitution=1.5)

    def test_noise_config(self):
        """Test static noise activation."""
        assert not NoiseConfig().is_active
        noise = NoiseConfig.static(0.05, 0.0, seed=9)
        assert noise.mode == NoiseMode.STATIC
        assert noise.is_active

    def test_sim_config_from_config(self, test_config):
        """Test that SimConfig takes defaults from the application config."""
        sim = SimConfig.from_config(test_config, dt=0.02)
        assert sim.dt == 0.02
        assert sim.time_budget == test_config.TIME_BUDGET
        assert sim.contact.contact_tolerance == test_config.CONTACT_TOLERANCE

    def test_sim_config_validation(self):
        """Test that a non-positive step raises."""
        with pytest.raises(ValueError, match="dt must be positive"):
            SimConfig(dt=0.0)

    def test_scenario_rejects_overlap(self, world, u_star):
        """Test that scenarios must start in free space."""
        state = MRState((RobotState(0, 0), RobotState(1, 0)), world)
        with pytest.raises(ValueError, match="overlapping"):
            Scenario(initial=state, controller=u_star, label="bad")

    def test_sweep_setting_label(self):
        """Test sweep cell labels and noise configs."""
        assert SweepSetting().label == "noise=none,e=0"
        setting = SweepSetting(0.05, 0.05, 0.5)
        assert setting.label == "noise=0.05/0.05,e=0.5"
        assert setting.noise_config(4).seed == 4
        assert not SweepSetting().noise_config(4).is_active

    def test_experiment_spec_seeds(self, u_star):
        """Test per-run seeds."""
        spec = ExperimentSpec(family="uniform", controller=u_star, num_runs=3, base_seed=100)
        assert [spec.seed_for(k) for k in range(3)] == [100, 101, 102]
        with pytest.raises(ValueError, match="num_runs"):
            ExperimentSpec(family="uniform", controller=u_star, num_runs=0)


class TestResults:
    """Tests for result value objects."""

    def test_report_consistency(self):
        """Test that aggregated means exactly one component."""
        report = AggregationReport(True, (frozenset({0, 1}),), 2)
        assert report.largest_component_size == 2
        with pytest.raises(ValueError, match="one component"):
            AggregationReport(True, (frozenset({0}), frozenset({1})), 1)

    def test_result_rate_consistency(self):
        """Test that the rate matches its counts."""
        with pytest.raises(ValueError, match="aggregation_rate"):
            ExperimentResult(
                runs=(), num_runs=4, num_aggregated=1, num_errors=0,
                aggregation_rate=0.5, mean_t_end=None, median_t_end=None,
                ci_low=0.0, ci_high=1.0,
            )
