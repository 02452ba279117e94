"""
Contact detection and resolution between robot discs.

Plastic contacts remove every velocity component that would drive a robot
into a touching partner; elastic contacts exchange equal-mass normal impulses.
Rotation on the spot is never affected.
"""

import logging
import math
from typing import List, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import pdist

from src.domain import (
    BodyTwist,
    Contact,
    ContactConfig,
    ContactSet,
    MRState,
    PlanarVelocity,
)

logger = logging.getLogger(__name__)

# Normal speeds below this are resting, not approaching.
VELOCITY_EPS = 1e-12


def detect_contacts_arrays(positions: np.ndarray, radius: float, tolerance: float) -> ContactSet:
    """Touching pairs of an (n, 2) position array."""
    n = len(positions)
    if n < 2:
        return ContactSet()
    dists = pdist(positions)
    touching = np.flatnonzero(dists <= 2.0 * radius + tolerance)
    if not len(touching):
        return ContactSet()
    # pdist orders pairs like the upper triangle, row by row.
    i_idx, j_idx = np.triu_indices(n, k=1)
    i_idx, j_idx = i_idx[touching], j_idx[touching]
    deltas = positions[j_idx] - positions[i_idx]
    pairs = []
    for i, j, (dx, dy), d in zip(i_idx, j_idx, deltas, dists[touching]):
        d = float(d)
        normal = (float(dx / d), float(dy / d)) if d > 0.0 else (1.0, 0.0)
        pairs.append(Contact(int(i), int(j), normal, d))
    return ContactSet(tuple(pairs))


def detect_contacts(state: MRState, cfg: ContactConfig) -> ContactSet:
    """All pairs with center distance at most 2r + contact_tolerance."""
    return detect_contacts_arrays(
        state.positions(), state.world.robot_radius, cfg.contact_tolerance
    )


def project_onto_free_cone(
    velocity: Tuple[float, float],
    normals: Sequence[Tuple[float, float]],
) -> Tuple[float, float]:
    """
    Nearest velocity w with w . n <= 0 for every normal n.

    In the plane the nearest point of a polyhedral cone is either the input,
    its projection onto one of the bounding lines, or zero.
    """
    ux, uy = velocity
    if all(ux * nx + uy * ny <= VELOCITY_EPS for nx, ny in normals):
        return ux, uy
    best = (0.0, 0.0)
    best_cost = math.inf
    for nx, ny in normals:
        dot = ux * nx + uy * ny
        cx, cy = ux - dot * nx, uy - dot * ny
        if all(cx * mx + cy * my <= VELOCITY_EPS for mx, my in normals):
            cost = abs(dot)
            if cost < best_cost:
                best, best_cost = (cx, cy), cost
    return best


def resolve_plastic(
    state: MRState,
    proposed_twists: Sequence[BodyTwist],
    contacts: ContactSet,
) -> List[PlanarVelocity]:
    """
    Clamp translations that point into touching partners.

    Each robot's velocity v*(cos theta, sin theta) is projected onto the set
    of directions that do not enter any partner; omega is kept.
    """
    resolved = []
    for index, (robot, tw) in enumerate(zip(state.robots, proposed_twists)):
        vx, vy = tw.v * math.cos(robot.theta), tw.v * math.sin(robot.theta)
        normals = contacts.normals_for(index)
        if normals:
            vx, vy = project_onto_free_cone((vx, vy), normals)
        resolved.append(PlanarVelocity(vx, vy, tw.omega))
    return resolved


def resolve_elastic(
    state: MRState,
    velocities: np.ndarray,
    contacts: ContactSet,
    e: float,
) -> np.ndarray:
    """
    Equal-mass normal impulses until no contact pair approaches.

    An approaching pair with normal speed s leaves with -e*s, each robot taking
    half of the (1 + e)*s change. After 10 impulses per contact any remaining
    approach is clamped away.
    """
    result = np.array(velocities, dtype=float, copy=True).reshape(-1, 2)
    if len(result) != state.n:
        raise ValueError(f"Expected {state.n} velocities, got {len(result)}")
    return exchange_impulses(result, contacts, e)


def exchange_impulses(velocities: np.ndarray, contacts: ContactSet, e: float) -> np.ndarray:
    """Array core of resolve_elastic; returns a new (n, 2) array."""
    if not 0.0 <= e <= 1.0:
        raise ValueError(f"Restitution must be within [0, 1], got {e}")
    result = np.array(velocities, dtype=float, copy=True)
    if not len(contacts):
        return result

    budget = 10 * len(contacts)
    applied = 0
    while applied < budget:
        changed = False
        for c in contacts:
            n = np.asarray(c.normal)
            approach = float(np.dot(result[c.i] - result[c.j], n))
            if approach > VELOCITY_EPS:
                impulse = 0.5 * (1.0 + e) * approach
                result[c.i] -= impulse * n
                result[c.j] += impulse * n
                applied += 1
                changed = True
                if applied >= budget:
                    break
        if not changed:
            return result

    logger.debug(f"Elastic resolution hit its budget of {budget} impulses, clamping")
    for index in contacts.involved:
        result[index] = project_onto_free_cone(tuple(result[index]), contacts.normals_for(index))
    return result


def translation_blocked(want: Tuple[float, float], got: Tuple[float, float]) -> bool:
    """True when a moving robot had its translation altered by a contact."""
    return (
        math.hypot(want[0], want[1]) > VELOCITY_EPS
        and math.hypot(want[0] - got[0], want[1] - got[1]) > VELOCITY_EPS
    )


def stall_blocked(
    commanded: Sequence[PlanarVelocity],
    resolved: Sequence[PlanarVelocity],
) -> List[PlanarVelocity]:
    """
    No-slip rule: a moving robot whose translation was altered by a contact
    stalls both wheels. Pure spins pass through.
    """
    out = []
    for want, got in zip(commanded, resolved):
        blocked = translation_blocked((want.vx, want.vy), (got.vx, got.vy))
        out.append(PlanarVelocity(0.0, 0.0, 0.0) if blocked else got)
    return out
