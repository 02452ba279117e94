"""
Binary line-of-sight sensor.

A robot reads 1 when the infinite ray from its center along its heading meets
the closed disc of any other robot. Grazing the boundary counts.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np

from src.config import get_config
from src.domain import MRState, RobotState, SensorReading, WorldParams

logger = logging.getLogger(__name__)


def ray_hits_disc(
    ox: float,
    oy: float,
    theta: float,
    cx: float,
    cy: float,
    radius: float,
    tolerance: Optional[float] = None,
) -> Optional[float]:
    """
    Ray parameter of the first point where the ray meets the disc, or None.

    The ray starts at (ox, oy) and points along theta; the disc is closed and
    widened by `tolerance`.
    """
    tol = get_config().SENSOR_TOLERANCE if tolerance is None else tolerance
    dx, dy = math.cos(theta), math.sin(theta)
    wx, wy = cx - ox, cy - oy
    along = wx * dx + wy * dy
    across = abs(wx * dy - wy * dx)
    if across > radius + tol:
        return None
    inside = math.hypot(wx, wy) <= radius
    if along < 0 and not inside:
        return None
    return max(along - math.sqrt(max(radius * radius - across * across, 0.0)), 0.0)


def sense_arrays(
    positions: np.ndarray,
    theta: np.ndarray,
    radius: float,
    tolerance: float,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Readings of all robots at once.

    Returns (values, seen) where seen[i] is the nearest robot on robot i's ray
    or -1.
    """
    n = len(positions)
    if n < 2:
        return np.zeros(n, dtype=bool), np.full(n, -1, dtype=int)
    dirs = np.column_stack((np.cos(theta), np.sin(theta)))
    # offsets[i, j] = p_j - p_i
    offsets = positions[np.newaxis, :, :] - positions[:, np.newaxis, :]
    along = np.einsum("ijk,ik->ij", offsets, dirs)
    across = np.abs(offsets[:, :, 0] * dirs[:, 1, np.newaxis] - offsets[:, :, 1] * dirs[:, 0, np.newaxis])
    hits = (across <= radius + tolerance) & (along >= 0.0)
    np.fill_diagonal(hits, False)
    entry = along - np.sqrt(np.clip(radius * radius - across * across, 0.0, None))
    entry = np.where(hits, entry, np.inf)
    values = hits.any(axis=1)
    seen = np.where(values, np.argmin(entry, axis=1), -1)
    return values, seen


def sense_all(state: MRState, tolerance: Optional[float] = None) -> Tuple[SensorReading, ...]:
    """Sensor readings of every robot in the state."""
    tol = get_config().SENSOR_TOLERANCE if tolerance is None else tolerance
    values, seen = sense_arrays(
        state.positions(), state.headings(), state.world.robot_radius, tol
    )
    return tuple(
        SensorReading(True, int(s)) if v else SensorReading(False)
        for v, s in zip(values, seen)
    )


def sense(state: MRState, i: int, tolerance: Optional[float] = None) -> SensorReading:
    """Reading of robot i."""
    if not 0 <= i < state.n:
        raise IndexError(f"Robot index {i} out of range for {state.n} robots")
    return sense_all(state, tolerance)[i]


def visibility_region_check(state: RobotState, p: Tuple[float, float], world: WorldParams) -> bool:
    """True when a robot disc centered at p would be sensed from `state`."""
    hit = ray_hits_disc(state.x, state.y, state.theta, p[0], p[1], world.robot_radius)
    return hit is not None
