"""
Unit tests for differential-drive kinematics.
"""

import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from src.domain import IcrKind, RobotState, WheelCommand
from src.services.kinematics import (
    advance,
    advance_arrays,
    command_for_radius,
    icr_center,
    icr_radius,
    orbit_period,
    twist,
)


def _integrate(state, cmd, t, world):
    """Reference pose from a numerical ODE solve."""
    tw = twist(cmd, world)

    def rhs(_, y):
        return [tw.v * math.cos(y[2]), tw.v * math.sin(y[2]), tw.omega]

    sol = solve_ivp(
        rhs, (0.0, t), [state.x, state.y, state.theta], method="DOP853", rtol=1e-12, atol=1e-12
    )
    return sol.y[:, -1]


class TestTwist:
    """Tests for twist."""

    def test_straight_forward(self, world):
        """Test equal wheel speeds."""
        tw = twist(WheelCommand(1.0, 1.0), world)
        assert tw.v == pytest.approx(12.8)
        assert tw.omega == 0.0

    def test_spin(self, world):
        """Test opposite wheel speeds."""
        tw = twist(WheelCommand(-0.5, 0.5), world)
        assert tw.v == 0.0
        assert tw.omega == pytest.approx(12.8 / 5.1)

    def test_clockwise_turn_sign(self, world):
        """Test that a faster left wheel turns clockwise."""
        assert twist(WheelCommand(1.0, -1.0), world).omega < 0


class TestIcrRadius:
    """Tests for icr_radius."""

    def test_u_prev_revised_mode_a(self, world):
        """Test the turning radius of (-0.18, -1)."""
        radius = icr_radius(WheelCommand(-0.18, -1.0), world)
        assert radius.kind == IcrKind.FINITE
        assert radius.value == pytest.approx(3.67, abs=0.01)
        assert radius.value < world.robot_radius

    def test_u_prev_mode_a(self, world):
        """Test the turning radius of (-0.7, -1)."""
        radius = icr_radius(WheelCommand(-0.7, -1.0), world)
        assert radius.value == pytest.approx(5.1 * 1.7 / 0.6)

    @pytest.mark.parametrize("cmd,kind,check", [
        (WheelCommand(0.6, 0.6), IcrKind.INFINITE, math.isinf),
        (WheelCommand(-0.6, 0.6), IcrKind.SPIN, lambda v: v == 0.0),
        (WheelCommand(0.0, 0.0), IcrKind.UNDEFINED, math.isnan),
    ])
    def test_degenerate_kinds(self, world, cmd, kind, check):
        """Test the tagged degenerate cases."""
        radius = icr_radius(cmd, world)
        assert radius.kind == kind
        assert check(radius.value)
        assert not radius.is_finite

    def test_icr_center_on_left_normal(self, world):
        """Test the ICR position of an anticlockwise forward turn."""
        cmd = WheelCommand(0.5, 1.0)
        center = icr_center(RobotState(0.0, 0.0, 0.0), cmd, world)
        assert center[0] == pytest.approx(0.0)
        assert center[1] == pytest.approx(icr_radius(cmd, world).value)
        assert icr_center(RobotState(0, 0, 0), WheelCommand(1, 1), world) is None


class TestAdvance:
    """Tests for the closed-form pose update."""

    @pytest.mark.parametrize("cmd", [
        WheelCommand(1.0, 1.0),
        WheelCommand(-0.7, -1.0),
        WheelCommand(0.3, 0.9),
        WheelCommand(-1.0, 1.0),
        WheelCommand(0.5, 0.5 + 1e-9),
    ])
    def test_matches_ode_solution(self, world, cmd):
        """Test the closed form against numerical integration."""
        start = RobotState(1.0, -2.0, 0.4)
        t = 3.0
        pose = advance(start, cmd, t, world)
        x, y, theta = _integrate(start, cmd, t, world)
        assert pose.x == pytest.approx(x, abs=1e-6)
        assert pose.y == pytest.approx(y, abs=1e-6)
        assert math.cos(pose.theta) == pytest.approx(math.cos(theta), abs=1e-6)
        assert math.sin(pose.theta) == pytest.approx(math.sin(theta), abs=1e-6)

    @pytest.mark.slow
    def test_random_commands_match_ode(self, world):
        """Test the closed form on 100 random commands and starting poses over 10 s."""
        rng = np.random.default_rng(23)
        for _ in range(100):
            v_l, v_r = rng.uniform(-1.0, 1.0, size=2)
            cmd = WheelCommand(float(v_l), float(v_r))
            x, y = rng.uniform(-50.0, 50.0, size=2)
            start = RobotState(float(x), float(y), float(rng.uniform(-math.pi, math.pi)))
            pose = advance(start, cmd, 10.0, world)
            ex, ey, etheta = _integrate(start, cmd, 10.0, world)
            assert pose.x == pytest.approx(ex, abs=1e-6)
            assert pose.y == pytest.approx(ey, abs=1e-6)
            assert math.cos(pose.theta) == pytest.approx(math.cos(etheta), abs=1e-6)
            assert math.sin(pose.theta) == pytest.approx(math.sin(etheta), abs=1e-6)

    def test_full_orbit_returns_home(self, world):
        """Test that one period closes the circle."""
        cmd = WheelCommand(-0.7, -1.0)
        start = RobotState(3.0, 4.0, 1.0)
        pose = advance(start, cmd, orbit_period(cmd, world), world)
        assert pose.x == pytest.approx(start.x, abs=1e-9)
        assert pose.y == pytest.approx(start.y, abs=1e-9)

    def test_composition(self, world):
        """Test that two half steps equal one full step."""
        cmd = WheelCommand(0.2, 0.8)
        start = RobotState(0.0, 0.0, 0.0)
        once = advance(start, cmd, 2.0, world)
        twice = advance(advance(start, cmd, 1.0, world), cmd, 1.0, world)
        assert twice.x == pytest.approx(once.x, abs=1e-12)
        assert twice.y == pytest.approx(once.y, abs=1e-12)

    def test_negative_dt_rejected(self, world):
        """Test that time cannot run backwards."""
        with pytest.raises(ValueError, match="non-negative"):
            advance(RobotState(0, 0), WheelCommand(1, 1), -0.1, world)

    def test_arrays_match_scalar(self, world):
        """Test the vectorised update against the scalar one."""
        cmds = [WheelCommand(1.0, 1.0), WheelCommand(-0.3, 0.6)]
        starts = [RobotState(0.0, 0.0, 0.2), RobotState(5.0, 1.0, -2.0)]
        positions = np.array([[s.x, s.y] for s in starts])
        theta = np.array([s.theta for s in starts])
        v = np.array([twist(c, world).v for c in cmds])
        omega = np.array([twist(c, world).omega for c in cmds])
        moved, turned = advance_arrays(positions, theta, v, omega, 0.7)
        for k, (s, c) in enumerate(zip(starts, cmds)):
            pose = advance(s, c, 0.7, world)
            assert moved[k, 0] == pytest.approx(pose.x)
            assert moved[k, 1] == pytest.approx(pose.y)


class TestCommandForRadius:
    """Tests for command_for_radius."""

    def test_radius_seven(self, world):
        """Test the deadlock command for R = 7."""
        cmd = command_for_radius(7.0, world)
        assert cmd.v_l == pytest.approx(-89 / 191)
        assert cmd.v_r == -1.0
        assert icr_radius(cmd, world).value == pytest.approx(7.0)
        assert twist(cmd, world).omega < 0

    def test_too_small_radius_rejected(self, world):
        """Test that the radius must exceed half the axle."""
        with pytest.raises(ValueError, match="needs radius"):
            command_for_radius(2.0, world)

    def test_orbit_period_straight(self, world):
        """Test that straight motion never closes."""
        assert orbit_period(WheelCommand(1, 1), world) == math.inf
