"""
Initial-state generators.

Random placements for Monte Carlo batches, the deadlock constructions that
defeat each controller category, the perturbed pairwise-deadlock tiling and
the perturbed ring used for noise and slippage sweeps. Generators with an
intended sensor pattern check it before returning.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import cdist, pdist

from src.domain import (
    Epsilons,
    MRState,
    MovementClass,
    PairFacing,
    RingHeading,
    RobotState,
    WheelCommand,
    WorldParams,
)
from src.domain.geometry import TWO_PI, angle_difference
from .kinematics import advance, command_for_radius, icr_radius, twist
from .sensing import sense_all
from .taxonomy import classify

logger = logging.getLogger(__name__)

# Side of the square used for random two-robot placements (cm).
DEFAULT_SIDE = 200.0 / math.sqrt(2.0)

# Densest packing of equal discs in the plane.
_PACKING_DENSITY = math.pi / (2.0 * math.sqrt(3.0))


class ScenarioError(Exception):
    """Base exception for scenario construction errors."""
    pass


class PlacementFailedError(ScenarioError):
    """Raised when random placement runs out of attempts."""
    pass


class ScenarioValidationError(ScenarioError):
    """Raised when a constructed state misses its intended property."""

    def __init__(self, condition: str, message: str):
        self.condition = condition
        super().__init__(f"Validation failed ({condition}): {message}")


class GeometryInfeasibleError(ScenarioError):
    """Raised when the requested ring cannot be built."""
    pass


class RadiusTooSmallError(ScenarioError):
    """Raised when a deadlock circle is too tight for the perturbation bound."""
    pass


class FormulaDomainError(ScenarioError):
    """Raised when the perturbation bound leaves the domain of arccos."""
    pass


# ============================================
# HELPERS
# ============================================

def _world(world: Optional[WorldParams]) -> WorldParams:
    return world or WorldParams()


def _require_free_space(state: MRState, label: str, tolerance: float = 1e-9) -> None:
    if not state.in_free_space(tolerance):
        raise ScenarioValidationError(
            "free space",
            f"{label}: robots overlap (min distance {state.min_pairwise_distance():.6f} "
            f"< {state.world.contact_distance})",
        )


def _validate_readings(state: MRState, intended: Sequence[Optional[bool]], label: str) -> None:
    """Compare t = 0 readings with the intended pattern (None = don't care)."""
    for index, (reading, want) in enumerate(zip(sense_all(state), intended)):
        if want is not None and reading.value != want:
            raise ScenarioValidationError(
                "readings",
                f"{label}: robot {index} reads {int(reading.value)}, expected {int(want)}",
            )


def contact_ring_radius(n_ring: int, robot_radius: float) -> float:
    """Radius of a ring of n touching discs: r / sin(pi / n)."""
    if n_ring < 2:
        raise ValueError(f"A ring needs at least 2 robots, got {n_ring}")
    return robot_radius / math.sin(math.pi / n_ring)


def minimal_ring_size(radius: float, world: Optional[WorldParams] = None) -> int:
    """Fewest touching robots (at least 3) whose ring radius reaches `radius`."""
    r = _world(world).robot_radius
    if radius <= contact_ring_radius(3, r):
        return 3
    n = max(int(math.ceil(math.pi / math.asin(r / radius))), 3)
    while contact_ring_radius(n, r) < radius:
        n += 1
    while n > 3 and contact_ring_radius(n - 1, r) >= radius:
        n -= 1
    return n


def xx_cb_ring_bound(mode_b_radius: float, world: Optional[WorldParams] = None) -> float:
    """
    Ring radius that keeps a center robot circling with radius R away from it.

    Orbit diameter plus body and padding clearances plus 1 cm.
    """
    w = _world(world)
    return 2.0 * mode_b_radius + 2.0 * w.robot_radius + w.aggregation_distance + 1.0


# ============================================
# RANDOM PLACEMENT
# ============================================

def sample_uniform(
    n: int,
    side: float = DEFAULT_SIDE,
    seed: int = 0,
    world: Optional[WorldParams] = None,
    max_attempts: int = 10 ** 6,
) -> MRState:
    """
    n robots with i.i.d. uniform centers in a side x side square around the
    origin and uniform headings, redrawn until no bodies overlap.
    """
    w = _world(world)
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    r = w.robot_radius
    if n * math.pi * r * r > _PACKING_DENSITY * (side + 2.0 * r) ** 2:
        raise PlacementFailedError(f"{n} robots cannot fit in a {side:.2f} cm square")

    rng = np.random.default_rng(seed)
    half = side / 2.0
    for attempt in range(max_attempts):
        positions = rng.uniform(-half, half, size=(n, 2))
        if n == 1 or pdist(positions).min() >= w.contact_distance:
            headings = rng.uniform(-math.pi, math.pi, size=n)
            if attempt:
                logger.debug(f"Placed {n} robots after {attempt + 1} attempts")
            return MRState.from_arrays(positions, headings, w)
    raise PlacementFailedError(
        f"Could not place {n} robots in a {side:.2f} cm square after {max_attempts} attempts"
    )


# ============================================
# DEADLOCK CONSTRUCTIONS
# ============================================

def gen_deadlock_pairs(
    n_pairs: int,
    facing: PairFacing,
    spacing: float = 10.0,
    world: Optional[WorldParams] = None,
) -> MRState:
    """
    Pairs of touching robots.

    AWAY pairs stand vertically back to back (one faces +y, one -y) and are
    laid out along x, so nobody sees anything. TOWARD pairs face each other
    on the x axis, so every ray meets a partner. `spacing` is the gap between
    the bodies of neighboring pairs.
    """
    w = _world(world)
    if n_pairs < 1:
        raise ValueError(f"n_pairs must be at least 1, got {n_pairs}")
    if spacing < 0:
        raise ScenarioValidationError("free space", f"negative pair spacing {spacing}")
    r = w.robot_radius
    robots: List[RobotState] = []
    if facing == PairFacing.AWAY:
        pitch = 2.0 * r + spacing
        for k in range(n_pairs):
            robots.append(RobotState(k * pitch, -r, -math.pi / 2.0))
            robots.append(RobotState(k * pitch, r, math.pi / 2.0))
        intended = [False] * len(robots)
    else:
        pitch = 4.0 * r + spacing
        for k in range(n_pairs):
            robots.append(RobotState(k * pitch - r, 0.0, 0.0))
            robots.append(RobotState(k * pitch + r, 0.0, math.pi))
        intended = [True] * len(robots)

    state = MRState(robots, w)
    _require_free_space(state, f"{facing.value} deadlock pairs")
    _validate_readings(state, intended, f"{facing.value} deadlock pairs")
    return state


def gen_collinear_backward(
    n_pairs: int,
    spacing: float = 20.0,
    world: Optional[WorldParams] = None,
) -> MRState:
    """
    2 * n_pairs robots on the x axis, `spacing` apart center to center.

    The left half faces +x and the right half faces -x, so pair k (k-th from
    the middle on each side) faces each other and every robot sees someone.
    Backing away splits the line into two receding groups.
    """
    w = _world(world)
    if n_pairs < 1:
        raise ValueError(f"n_pairs must be at least 1, got {n_pairs}")
    if spacing < w.contact_distance:
        raise ScenarioValidationError(
            "free space", f"spacing {spacing} below body diameter {w.contact_distance}"
        )
    count = 2 * n_pairs
    robots = [
        RobotState(k * spacing, 0.0, 0.0 if k < n_pairs else math.pi)
        for k in range(count)
    ]
    state = MRState(robots, w)
    _validate_readings(state, [True] * count, "collinear pairs")
    return state


def gen_blind(
    n: int = 2,
    spacing: float = 20.0,
    world: Optional[WorldParams] = None,
) -> MRState:
    """n robots side by side on the x axis, all facing +y: nobody sees anybody."""
    w = _world(world)
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if spacing < w.contact_distance:
        raise ScenarioValidationError(
            "free space", f"spacing {spacing} below body diameter {w.contact_distance}"
        )
    state = MRState([RobotState(k * spacing, 0.0, math.pi / 2.0) for k in range(n)], w)
    _validate_readings(state, [False] * n, "blind row")
    return state


def _ring_positions(n_ring: int, radius: float) -> np.ndarray:
    angles = 2.0 * math.pi * np.arange(n_ring) / n_ring
    return np.column_stack((radius * np.cos(angles), radius * np.sin(angles)))


def _right_neighbor_heading(k: int, n_ring: int) -> float:
    """Direction from ring robot k to its clockwise neighbor k - 1."""
    phi = 2.0 * math.pi * k / n_ring
    return phi - math.pi / 2.0 - math.pi / n_ring


def gen_ring_center(
    n_ring: int,
    heading: RingHeading,
    ring_radius: Optional[float] = None,
    world: Optional[WorldParams] = None,
    mode_b_radius: Optional[float] = None,
    center_heading: float = 0.0,
) -> MRState:
    """
    A ring of n_ring robots around one robot at the origin (the last index).

    With ring_radius None the ring robots touch their neighbors. RADIAL_OUT
    turns every ring robot outward; SEE_RIGHT_NEIGHBOR points each one at its
    clockwise neighbor, and with mode_b_radius given the ring must clear the
    center robot's circle (xx_cb_ring_bound).
    """
    w = _world(world)
    if n_ring < 3:
        raise ValueError(f"n_ring must be at least 3, got {n_ring}")
    r = w.robot_radius
    touching = contact_ring_radius(n_ring, r)
    radius = touching if ring_radius is None else float(ring_radius)

    if radius < touching - 1e-12:
        raise GeometryInfeasibleError(
            f"Ring radius {radius:.4f} makes {n_ring} neighbors overlap (needs >= {touching:.4f})"
        )
    if radius < w.contact_distance:
        raise GeometryInfeasibleError(
            f"A ring of {n_ring} (radius {radius:.4f}) leaves no room for the center robot"
        )
    if heading == RingHeading.SEE_RIGHT_NEIGHBOR and mode_b_radius is not None:
        needed = xx_cb_ring_bound(mode_b_radius, w)
        if radius < needed:
            raise GeometryInfeasibleError(
                f"Ring radius {radius:.4f} is inside the center robot's reach {needed:.4f}; "
                f"a touching ring needs n_ring >= {minimal_ring_size(needed, w)}"
            )

    positions = _ring_positions(n_ring, radius)
    robots = []
    for k, (x, y) in enumerate(positions):
        if heading == RingHeading.RADIAL_OUT:
            theta = 2.0 * math.pi * k / n_ring
        else:
            theta = _right_neighbor_heading(k, n_ring)
        robots.append(RobotState(float(x), float(y), theta))
    robots.append(RobotState(0.0, 0.0, center_heading))

    state = MRState(robots, w)
    ring_sees = heading == RingHeading.SEE_RIGHT_NEIGHBOR
    _require_free_space(state, f"{heading.value} ring")
    _validate_readings(state, [ring_sees] * n_ring + [True], f"{heading.value} ring")
    return state


def gen_near_miss_ring(
    n_ring: int,
    world: Optional[WorldParams] = None,
    offset: Optional[float] = None,
    center_heading: float = 0.0,
) -> MRState:
    """
    Touching ring whose robots look just past their clockwise neighbor.

    Each heading is the right-neighbor direction rotated outward by `offset`
    (default pi/6 + 0.01, past the grazing angle), so every ring sensor reads
    0 while driving forward runs into that neighbor.
    """
    w = _world(world)
    if n_ring < 3:
        raise ValueError(f"n_ring must be at least 3, got {n_ring}")
    turn = math.pi / 6.0 + 0.01 if offset is None else offset
    radius = contact_ring_radius(n_ring, w.robot_radius)
    if radius < w.contact_distance:
        raise GeometryInfeasibleError(
            f"A touching ring of {n_ring} (radius {radius:.4f}) leaves no room for the center robot"
        )
    positions = _ring_positions(n_ring, radius)
    robots = [
        RobotState(float(x), float(y), _right_neighbor_heading(k, n_ring) + turn)
        for k, (x, y) in enumerate(positions)
    ]
    robots.append(RobotState(0.0, 0.0, center_heading))
    state = MRState(robots, w)
    _require_free_space(state, "near-miss ring")
    _validate_readings(state, [False] * n_ring + [True], "near-miss ring")
    return state


def gen_shared_orbit(cmd: WheelCommand, world: Optional[WorldParams] = None) -> MRState:
    """
    Two robots at opposite ends of the circle driven by cmd.

    Both circle the same ICR forever and each ray stays tangent to the circle,
    so neither ever sees the other.
    """
    w = _world(world)
    tw = twist(cmd, w)
    if tw.omega == 0.0 or tw.v == 0.0:
        raise GeometryInfeasibleError(f"Command ({cmd.v_l}, {cmd.v_r}) does not drive a circle")
    offset = tw.v / tw.omega
    if 2.0 * abs(offset) <= w.aggregation_distance:
        raise GeometryInfeasibleError(
            f"Circle radius {abs(offset):.4f} is too small for two separate robots"
        )
    state = MRState([RobotState(0.0, -offset, 0.0), RobotState(0.0, offset, math.pi)], w)
    _validate_readings(state, [False, False], "shared orbit")
    return state


# ============================================
# PERTURBED PAIRWISE DEADLOCK
# ============================================

def epsilon_star(R: float, world: Optional[WorldParams] = None) -> Epsilons:
    """
    Largest pose perturbation that keeps a pair on circles of radius R colliding:
    (r/8, r/8, min(pi/8, arccos(1 - (64r^2 - r^2) / (64 R^2 (2 - sqrt 2))))).
    """
    r = _world(world).robot_radius
    limit = r / (2.0 - math.sqrt(2.0))
    if R <= limit:
        raise RadiusTooSmallError(f"R={R} must exceed r/(2 - sqrt(2)) = {limit:.6f}")
    argument = 1.0 - (64.0 * r * r - r * r) / (64.0 * R * R * (2.0 - math.sqrt(2.0)))
    if not -1.0 <= argument <= 1.0:
        raise FormulaDomainError(f"arccos argument {argument} outside [-1, 1]")
    return Epsilons(r / 8.0, r / 8.0, min(math.pi / 8.0, math.acos(argument)))


@dataclass(frozen=True)
class PairLayout:
    """A tiling of perturbed deadlock pairs with the data its checks need."""
    state: MRState
    radius: float
    mode_a: WheelCommand
    meeting_time: float
    epsilons: Epsilons
    shift: float
    rotation: float
    origins: Tuple[Tuple[float, float], ...]


# Unperturbed roles: each robot backs an eighth of its circle into the origin.
def _nominal_pair(R: float) -> Tuple[RobotState, RobotState]:
    offset = R * (1.0 - 1.0 / math.sqrt(2.0))
    height = R / math.sqrt(2.0)
    return (
        RobotState(-offset, height, 3.0 * math.pi / 4.0),
        RobotState(offset, -height, -math.pi / 4.0),
    )


def _deadlock_command(R: float, mode_a: Optional[WheelCommand], world: WorldParams) -> WheelCommand:
    cmd = mode_a or command_for_radius(R, world)
    radius = icr_radius(cmd, world)
    if classify(cmd) != MovementClass.CB or not radius.is_finite:
        raise ValueError(f"Mode A ({cmd.v_l}, {cmd.v_r}) must be circular-backward")
    if abs(radius.value - R) > 1e-9 * max(R, 1.0):
        raise ValueError(f"Mode A circles with radius {radius.value:.6f}, expected {R}")
    if twist(cmd, world).omega >= 0:
        raise ValueError("Mode A must circle clockwise (left wheel slower in reverse)")
    return cmd


def pair_tiling_layout(
    n: int,
    R: float,
    s_o: float,
    seed: int = 0,
    world: Optional[WorldParams] = None,
    mode_a: Optional[WheelCommand] = None,
    fractions: Optional[np.ndarray] = None,
) -> PairLayout:
    """
    n/2 perturbed deadlock pairs, pair k around origin (k s_o, k s_o).

    Every pose is perturbed by fractions * epsilon_star (fractions default to
    uniform draws in [-1, 1) from seed), each pair's plane is then rotated
    anticlockwise by epsilon_star.theta about its origin and shifted into place.
    """
    w = _world(world)
    if n < 2 or n % 2:
        raise ValueError(f"n must be an even count of at least 2, got {n}")
    eps = epsilon_star(R, w)
    cmd = _deadlock_command(R, mode_a, w)
    meeting_time = (math.pi / 4.0) * R / abs(twist(cmd, w).v)

    if fractions is None:
        fractions = np.random.default_rng(seed).uniform(-1.0, 1.0, size=(n, 3))
    fractions = np.asarray(fractions, dtype=float).reshape(n, 3)

    scale = np.array([eps.x, eps.y, eps.theta])
    nominal = _nominal_pair(R)
    robots = []
    origins = []
    for k in range(n // 2):
        origin = (k * s_o, k * s_o)
        origins.append(origin)
        for role in (0, 1):
            dx, dy, dtheta = fractions[2 * k + role] * scale
            base = nominal[role]
            pose = RobotState(base.x + dx, base.y + dy, base.theta + dtheta)
            robots.append(pose.rotated_about(eps.theta).translated(*origin))

    return PairLayout(
        state=MRState(robots, w),
        radius=R,
        mode_a=cmd,
        meeting_time=meeting_time,
        epsilons=eps,
        shift=s_o,
        rotation=eps.theta,
        origins=tuple(origins),
    )


def _sample_paths(layout: PairLayout, samples: int) -> np.ndarray:
    """Unblocked poses of every robot at evenly spaced times, shape (n, S, 3)."""
    world = layout.state.world
    times = np.linspace(0.0, layout.meeting_time, samples + 1)
    return np.array([
        [advance(robot, layout.mode_a, float(tau), world).as_tuple() for tau in times]
        for robot in layout.state.robots
    ])


@dataclass(frozen=True)
class TilingCheck:
    """What validate_pair_tiling measured on a layout that passed."""
    reach: float
    half_radius: float

    @property
    def within_half_radius(self) -> bool:
        """Every robot ends within r/2 of its pair origin at the meeting time."""
        return self.reach <= self.half_radius


def validate_pair_tiling(
    layout: PairLayout,
    samples: int = 64,
    strict_reach: bool = False,
) -> TilingCheck:
    """
    Check a pair tiling; the result carries the largest distance of a robot
    from its pair origin at the meeting time.

    (a) each pair's unblocked poses at the meeting time overlap (< 2r), so the
        pair must have collided before then; with strict_reach every robot
        must also end within r/2 of its origin;
    (b) along the unblocked paths every heading stays within its quadrant and
        no robot ever sees, or comes within 2(r + padding) of, another pair.
    """
    world = layout.state.world
    r = world.robot_radius
    robots = layout.state.robots
    reach = 0.0

    for k, origin in enumerate(layout.origins):
        first, second = robots[2 * k], robots[2 * k + 1]
        end_first = advance(first, layout.mode_a, layout.meeting_time, world)
        end_second = advance(second, layout.mode_a, layout.meeting_time, world)
        gap = math.hypot(end_first.x - end_second.x, end_first.y - end_second.y)
        if gap >= world.contact_distance:
            raise ScenarioValidationError(
                "a", f"pair {k} is {gap:.6f} cm apart at t={layout.meeting_time:.6f}s"
            )
        for end in (end_first, end_second):
            reach = max(reach, math.hypot(end.x - origin[0], end.y - origin[1]))
    if reach > r / 2.0:
        message = (
            f"pair robots end up to {reach:.4f} cm from their origin (beyond r/2 = {r / 2.0:.4f})"
        )
        if strict_reach:
            raise ScenarioValidationError("a", message)
        logger.warning(message)

    paths = _sample_paths(layout, samples)
    n = len(robots)
    # The plane rotation keeps perturbed headings inside quadrants II and IV.
    centers = (3.0 * math.pi / 4.0, -math.pi / 4.0)
    for i in range(n):
        for theta in paths[i, :, 2]:
            local = angle_difference(theta, centers[i % 2])
            if abs(local) > math.pi / 4.0 + 1e-9:
                raise ScenarioValidationError(
                    "b", f"robot {i} turns out of its quadrant (heading {theta:.6f})"
                )

    for i in range(n):
        others = [j for j in range(n) if j // 2 != i // 2]
        if not others:
            continue
        targets = paths[others, :, :2].reshape(-1, 2)
        own = paths[i, :, :2]
        if cdist(own, targets).min() <= world.aggregation_distance:
            raise ScenarioValidationError("b", f"robot {i} comes close to another pair")
        dirs = np.column_stack((np.cos(paths[i, :, 2]), np.sin(paths[i, :, 2])))
        offsets = targets[np.newaxis, :, :] - own[:, np.newaxis, :]
        along = np.einsum("sk,smk->sm", dirs, offsets)
        across = np.abs(offsets[:, :, 0] * dirs[:, 1, np.newaxis] - offsets[:, :, 1] * dirs[:, 0, np.newaxis])
        if np.any((along >= 0.0) & (across <= r)):
            raise ScenarioValidationError("b", f"robot {i} can see a robot of another pair")
    return TilingCheck(reach=reach, half_radius=r / 2.0)


def pair_tiling_construction(
    n: int,
    R: float,
    s_o: Optional[float] = None,
    seed: int = 0,
    world: Optional[WorldParams] = None,
    mode_a: Optional[WheelCommand] = None,
    fractions: Optional[np.ndarray] = None,
    max_doublings: int = 20,
    strict_reach: bool = False,
) -> PairLayout:
    """
    A validated pair tiling. Without s_o the shift starts at 10 R and doubles
    until the cross-pair check (b) passes.
    """
    if s_o is not None:
        layout = pair_tiling_layout(n, R, s_o, seed, world, mode_a, fractions)
        validate_pair_tiling(layout, strict_reach=strict_reach)
        return layout

    shift = 10.0 * R
    for _ in range(max_doublings + 1):
        layout = pair_tiling_layout(n, R, shift, seed, world, mode_a, fractions)
        try:
            validate_pair_tiling(layout, strict_reach=strict_reach)
            return layout
        except ScenarioValidationError as e:
            if e.condition != "b":
                raise
            logger.debug(f"Shift {shift:.2f} too small, doubling")
            shift *= 2.0
    raise ScenarioValidationError("b", f"no shift up to {shift / 2.0:.2f} separates the pairs")


def gen_pair_tiling(
    n: int,
    R: float,
    s_o: Optional[float] = None,
    seed: int = 0,
    world: Optional[WorldParams] = None,
    mode_a: Optional[WheelCommand] = None,
    fractions: Optional[np.ndarray] = None,
) -> MRState:
    """Initial state of a validated perturbed pair tiling."""
    return pair_tiling_construction(n, R, s_o, seed, world, mode_a, fractions).state


def nonaggregation_probability_bound(
    eps: Epsilons,
    n: int,
    workspace_area: float,
    world: Optional[WorldParams] = None,
) -> float:
    """
    Lower bound on the chance that n uniformly drawn poses form a deadlock
    tiling: ((2 pi r / 4) / |S| * eps_theta / 2 pi)^n.

    Only the heading bound eps.theta enters; eps.x and eps.y shape the
    tiling but the position factor is fixed at 2 pi r / 4 per robot.
    """
    if workspace_area <= 0:
        raise ValueError(f"workspace_area must be positive, got {workspace_area}")
    r = _world(world).robot_radius
    per_robot = (2.0 * math.pi * r / 4.0) / workspace_area * (eps.theta / TWO_PI)
    return min(per_robot, 1.0) ** n


# ============================================
# PERTURBED RING
# ============================================

def gen_perturbed_ring(
    n_ring: int,
    seed: int = 0,
    world: Optional[WorldParams] = None,
    shift: Optional[float] = None,
    position_jitter: Optional[float] = None,
    heading_jitter: float = math.pi / 32.0,
    scale: float = 1.0,
    max_redraws: int = 10 ** 4,
) -> MRState:
    """
    Outward-facing touching ring with a center robot, loosened and jittered.

    Ring robots move r/2 outward, then every robot (center last) is shifted by
    up to r/4 in x and y and turned by up to pi/32; a robot overlapping one
    already placed is drawn again. `scale` multiplies both jitters.
    """
    w = _world(world)
    if not 6 <= n_ring <= 11:
        raise ValueError(f"n_ring must be within [6, 11], got {n_ring}")
    r = w.robot_radius
    outward = r / 2.0 if shift is None else shift
    jitter = (r / 4.0 if position_jitter is None else position_jitter) * scale
    turn = heading_jitter * scale

    radius = contact_ring_radius(n_ring, r) + outward
    nominal = [
        (float(x), float(y), 2.0 * math.pi * k / n_ring)
        for k, (x, y) in enumerate(_ring_positions(n_ring, radius))
    ]
    nominal.append((0.0, 0.0, 0.0))

    rng = np.random.default_rng(seed)
    placed: List[RobotState] = []
    redraws = 0
    for x, y, theta in nominal:
        while True:
            dx, dy = rng.uniform(-jitter, jitter, size=2) if jitter else (0.0, 0.0)
            dtheta = rng.uniform(-turn, turn) if turn else 0.0
            candidate = RobotState(x + dx, y + dy, theta + dtheta)
            if all(
                math.hypot(candidate.x - p.x, candidate.y - p.y) >= w.contact_distance
                for p in placed
            ):
                placed.append(candidate)
                break
            redraws += 1
            if redraws > max_redraws:
                raise PlacementFailedError(
                    f"Perturbed ring of {n_ring} needed more than {max_redraws} redraws"
                )
    return MRState(placed, w)
