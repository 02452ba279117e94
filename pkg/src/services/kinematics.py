"""
Closed-form differential-drive kinematics.

With constant wheel speeds a robot moves on a circle about its instantaneous
center of rotation (ICR), or on a line when both wheels agree. Nothing here
knows about other robots.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.domain import BodyTwist, IcrKind, RobotState, WheelCommand, WorldParams
from src.domain.geometry import COMMAND_EPS, TWO_PI


@dataclass(frozen=True)
class IcrRadius:
    """Turning radius tagged with its kind; value is inf, 0 or nan off FINITE."""
    kind: IcrKind
    value: float

    @property
    def is_finite(self) -> bool:
        return self.kind == IcrKind.FINITE


def twist(cmd: WheelCommand, world: WorldParams) -> BodyTwist:
    """Body twist of a normalized wheel command."""
    v = world.v_max * (cmd.v_l + cmd.v_r) / 2.0
    if cmd.is_straight:
        return BodyTwist(v=v, omega=0.0)
    omega = world.v_max * (cmd.v_r - cmd.v_l) / world.inter_wheel
    return BodyTwist(v=v, omega=omega)


def icr_radius(cmd: WheelCommand, world: WorldParams) -> IcrRadius:
    """Radius of the circle driven by cmd: d_iw |v_l + v_r| / (2 |v_r - v_l|)."""
    spins = not cmd.is_straight
    moves = abs(cmd.v_l + cmd.v_r) > COMMAND_EPS
    if moves and spins:
        radius = world.inter_wheel * abs(cmd.v_l + cmd.v_r) / (2.0 * abs(cmd.v_r - cmd.v_l))
        return IcrRadius(IcrKind.FINITE, radius)
    if moves:
        return IcrRadius(IcrKind.INFINITE, math.inf)
    if spins:
        return IcrRadius(IcrKind.SPIN, 0.0)
    return IcrRadius(IcrKind.UNDEFINED, math.nan)


def icr_center(
    state: RobotState,
    cmd: WheelCommand,
    world: WorldParams,
) -> Optional[Tuple[float, float]]:
    """ICR at signed offset v/omega along the left normal; None without turning."""
    tw = twist(cmd, world)
    if tw.omega == 0.0:
        return None
    offset = tw.v / tw.omega
    return (
        state.x - offset * math.sin(state.theta),
        state.y + offset * math.cos(state.theta),
    )


def advance_twist(state: RobotState, tw: BodyTwist, dt: float) -> RobotState:
    """
    Exact pose after moving with a constant twist for dt.

    The chord form v*dt*sinc(phi/2) along theta + phi/2 (phi = omega*dt) is the
    rotation about the ICR, reduces to a straight line at omega = 0, and stays
    accurate for tiny omega.
    """
    if dt < 0:
        raise ValueError(f"dt must be non-negative, got {dt}")
    half = 0.5 * tw.omega * dt
    chord = tw.v * dt * float(np.sinc(half / math.pi))
    mid = state.theta + half
    return RobotState(
        state.x + chord * math.cos(mid),
        state.y + chord * math.sin(mid),
        state.theta + tw.omega * dt,
    )


def advance(state: RobotState, cmd: WheelCommand, dt: float, world: WorldParams) -> RobotState:
    """Exact pose after driving cmd for dt."""
    return advance_twist(state, twist(cmd, world), dt)


def advance_arrays(
    positions: np.ndarray,
    theta: np.ndarray,
    v: np.ndarray,
    omega: np.ndarray,
    dt: float,
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorised advance_twist; headings are left unnormalized."""
    half = 0.5 * omega * dt
    chord = v * dt * np.sinc(half / math.pi)
    mid = theta + half
    moved = positions + np.column_stack((chord * np.cos(mid), chord * np.sin(mid)))
    return moved, theta + omega * dt


def command_for_radius(radius: float, world: WorldParams) -> WheelCommand:
    """
    Clockwise backward-circling command (-a, -1) with ICR radius `radius`.

    Solves d_iw (1 + a) / (2 (1 - a)) = radius for a; needs radius > d_iw / 2.
    """
    half_axle = world.inter_wheel / 2.0
    if radius <= half_axle:
        raise ValueError(
            f"A backward circle of radius {radius} needs radius > {half_axle}"
        )
    a = (radius - half_axle) / (radius + half_axle)
    return WheelCommand(-a, -1.0)


def orbit_period(cmd: WheelCommand, world: WorldParams) -> float:
    """Time for one full turn; inf when the command does not turn."""
    tw = twist(cmd, world)
    if tw.omega == 0.0:
        return math.inf
    return TWO_PI / abs(tw.omega)
