"""
Unit tests for planar geometry helpers.
"""

import math

import pytest

from src.domain.entities import RobotState
from src.domain.geometry import (
    angle_difference,
    distance,
    heading_vector,
    normalize_angle,
    rotate_point,
)


class TestNormalizeAngle:
    """Tests for normalize_angle."""

    @pytest.mark.parametrize("theta", [0.0, 1.0, -1.0, -math.pi, math.pi - 1e-12])
    def test_in_range_unchanged(self, theta):
        """Test that angles already in [-pi, pi) are returned as is."""
        assert normalize_angle(theta) == theta

    def test_pi_maps_to_minus_pi(self):
        """Test that the half-open interval excludes +pi."""
        assert normalize_angle(math.pi) == pytest.approx(-math.pi)

    @pytest.mark.parametrize("theta", [3 * math.pi / 2, -3 * math.pi / 2, 7.0, -20.0, 1e4])
    def test_result_in_range(self, theta):
        """Test wrapping of out-of-range angles."""
        wrapped = normalize_angle(theta)
        assert -math.pi <= wrapped < math.pi
        assert math.cos(wrapped) == pytest.approx(math.cos(theta), abs=1e-9)
        assert math.sin(wrapped) == pytest.approx(math.sin(theta), abs=1e-9)

    @pytest.mark.parametrize("theta", [5.0, -5.0, 100.0])
    def test_idempotent(self, theta):
        """Test normalize(normalize(x)) == normalize(x)."""
        once = normalize_angle(theta)
        assert normalize_angle(once) == once

    @pytest.mark.parametrize("theta", [math.nan, math.inf, -math.inf])
    def test_non_finite_rejected(self, theta):
        """Test that NaN and infinities raise."""
        with pytest.raises(ValueError, match="finite"):
            normalize_angle(theta)


class TestHelpers:
    """Tests for the remaining geometry helpers."""

    def test_angle_difference_wraps(self):
        """Test the signed difference across the branch cut."""
        diff = angle_difference(math.pi - 0.1, -math.pi + 0.1)
        assert diff == pytest.approx(-0.2)

    def test_distance_between_states(self):
        """Test the center distance of two poses."""
        assert distance(RobotState(0, 0), RobotState(3, 4)) == pytest.approx(5.0)

    def test_heading_vector_is_unit(self):
        """Test heading vectors."""
        hx, hy = heading_vector(math.pi / 2)
        assert hx == pytest.approx(0.0, abs=1e-15)
        assert hy == pytest.approx(1.0)

    def test_rotate_point_about_center(self):
        """Test a quarter turn about a point other than the origin."""
        x, y = rotate_point(2.0, 1.0, math.pi / 2, cx=1.0, cy=1.0)
        assert x == pytest.approx(1.0)
        assert y == pytest.approx(2.0)
