"""
Elementary planar geometry shared by every layer.

Units are centimeters, seconds and radians throughout.
"""

import math
from typing import Tuple

TWO_PI = 2.0 * math.pi

# Wheel commands closer than this are the same command (no turning).
COMMAND_EPS = 1e-12


def normalize_angle(theta: float) -> float:
    """
    Map an angle to [-pi, pi).

    Angles already in range are returned unchanged, so the map is idempotent.
    Raises ValueError for NaN or infinite input.
    """
    if not math.isfinite(theta):
        raise ValueError(f"Angle must be finite, got {theta}")
    if -math.pi <= theta < math.pi:
        return theta
    wrapped = math.fmod(theta + math.pi, TWO_PI)
    if wrapped < 0.0:
        wrapped += TWO_PI
    result = wrapped - math.pi
    if result >= math.pi:
        result -= TWO_PI
    return result


def angle_difference(a: float, b: float) -> float:
    """Smallest signed difference a - b, in [-pi, pi)."""
    return normalize_angle(a - b)


def distance(a, b) -> float:
    """Euclidean distance between the centers of two robot states."""
    return math.hypot(a.x - b.x, a.y - b.y)


def heading_vector(theta: float) -> Tuple[float, float]:
    """Unit vector along a heading."""
    return math.cos(theta), math.sin(theta)


def rotate_point(
    x: float,
    y: float,
    phi: float,
    cx: float = 0.0,
    cy: float = 0.0,
) -> Tuple[float, float]:
    """Rotate (x, y) anticlockwise by phi about (cx, cy)."""
    c, s = math.cos(phi), math.sin(phi)
    dx, dy = x - cx, y - cy
    return cx + c * dx - s * dy, cy + s * dx + c * dy
