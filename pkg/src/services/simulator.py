"""
Swarm simulator - the core execution loop.

Each step senses once, picks every robot's mode, applies static wheel noise,
resolves contacts and moves all robots together for dt. Contacts that appear
inside a step are located by bisection and the rest of the step continues
from there. Runs stop on aggregation, on the time budget, when nothing moves,
or when the motion provably repeats.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Deque, Dict, Optional, Tuple

import numpy as np
from scipy.spatial.distance import pdist

from src.config import Config, get_config
from src.domain import (
    BimodalController,
    ContactSet,
    MRState,
    NoiseConfig,
    RobotState,
    RunOutcome,
    Scenario,
    SimConfig,
    TrajectorySample,
    Verdict,
    WheelCommand,
    WorldParams,
)
from src.domain.geometry import TWO_PI
from .aggregation import positions_connected
from .contact import (
    VELOCITY_EPS,
    detect_contacts_arrays,
    exchange_impulses,
    project_onto_free_cone,
    translation_blocked,
)
from .kinematics import advance, advance_arrays, twist
from .sensing import sense_arrays

logger = logging.getLogger(__name__)

# Observer signature: (t, state, sensor values)
StepObserver = Callable[[float, MRState, Tuple[bool, ...]], None]


class SimulationError(Exception):
    """Base exception for simulator errors."""
    pass


class StepDivergedError(SimulationError):
    """Raised when contact substepping hits its event cap on consecutive steps."""

    def __init__(self, t: float, events: int):
        self.t = t
        self.events = events
        super().__init__(
            f"Contact substepping exceeded {events} events on consecutive steps at t={t:.4f}"
        )


@dataclass
class _Motion:
    """Per-robot velocities for the rest of a step."""
    linear: np.ndarray  # robots in contact move with a fixed world velocity
    velocity: np.ndarray
    v: np.ndarray
    omega: np.ndarray

    def signature(self) -> Tuple[bytes, ...]:
        return (
            self.linear.tobytes(),
            self.velocity.tobytes(),
            self.v.tobytes(),
            self.omega.tobytes(),
        )

    def copy(self) -> "_Motion":
        return _Motion(self.linear.copy(), self.velocity.copy(), self.v.copy(), self.omega.copy())

    def world_velocities(self, theta: np.ndarray) -> np.ndarray:
        """Current (n, 2) center velocities."""
        heading = np.column_stack((self.v * np.cos(theta), self.v * np.sin(theta)))
        return np.where(self.linear[:, np.newaxis], self.velocity, heading)

    def max_speed(self) -> float:
        speeds = np.where(
            self.linear, np.hypot(self.velocity[:, 0], self.velocity[:, 1]), np.abs(self.v)
        )
        return float(speeds.max()) if len(speeds) else 0.0


@dataclass
class _StepInfo:
    events: int
    capped: bool
    contacts: ContactSet
    motion: _Motion


def wrap_angles(theta: np.ndarray) -> np.ndarray:
    """Vectorised normalize_angle."""
    wrapped = np.mod(theta + math.pi, TWO_PI) - math.pi
    wrapped = np.where(wrapped >= math.pi, wrapped - TWO_PI, wrapped)
    in_range = (theta >= -math.pi) & (theta < math.pi)
    return np.where(in_range, theta, wrapped)


# Keys the noise draws apart from the placement draws that share a run seed.
NOISE_STREAM = 0x6E6F697365


def draw_noise_offsets(noise: NoiseConfig, n: int) -> np.ndarray:
    """Static per-robot wheel offsets, shape (n, 2), drawn from noise.seed."""
    if not noise.is_active:
        return np.zeros((n, 2))
    rng = np.random.default_rng([noise.seed, NOISE_STREAM])
    left = rng.uniform(-noise.left_magnitude, noise.left_magnitude, n)
    right = rng.uniform(-noise.right_magnitude, noise.right_magnitude, n)
    return np.column_stack((left, right))


def u_star_time_bound(
    controller: BimodalController,
    initial_distance: float,
    world: WorldParams,
) -> float:
    """
    Worst-case aggregation time of two robots under (-a, a, b, b).

    Up to one spin before someone sees, a second (slightly slowed) spin before
    the other robot turns onto the first, then closing head-on at no less than
    sqrt(3) * v_b while the partner stays inside the ray.
    """
    spin = twist(controller.mode_a, world)
    drive = twist(controller.mode_b, world)
    if spin.v != 0.0 or spin.omega == 0.0 or drive.omega != 0.0 or drive.v <= 0.0:
        raise ValueError(f"Controller {controller.as_tuple()} is not of the form (-a, a, b, b)")
    period = TWO_PI / abs(spin.omega)
    return 3.0 * period + initial_distance / (math.sqrt(3.0) * drive.v)


class _StationarityMonitor:
    """Accumulated pose change over a sliding window of steps."""

    def __init__(self, window_steps: int, eps: float):
        self._changes: Deque[float] = deque(maxlen=max(window_steps, 1))
        self._eps = eps

    def update(self, change: float) -> bool:
        self._changes.append(change)
        return len(self._changes) == self._changes.maxlen and sum(self._changes) < self._eps


def relative_coordinates(positions: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Poses of robots 1..n-1 in the frame of robot 0, flattened."""
    c, s = math.cos(theta[0]), math.sin(theta[0])
    offsets = positions[1:] - positions[0]
    local = np.column_stack((
        c * offsets[:, 0] + s * offsets[:, 1],
        -s * offsets[:, 0] + c * offsets[:, 1],
    ))
    return np.concatenate((local.ravel(), wrap_angles(theta[1:] - theta[0])))


class _CycleDetector:
    """
    Hash grid of states sampled at a fixed cadence.

    The dynamics commute with rigid motions of the plane, so states are
    compared in the frame of robot 0: a swarm that repeats its shape while
    drifting or turning as a whole is caught as well.
    """

    def __init__(self, interval_steps: int, eps: float, eps_state: float):
        self._interval = max(interval_steps, 1)
        self._eps = eps
        self._eps_state = eps_state
        self._grid: Dict[Tuple[int, ...], np.ndarray] = {}
        self._moved = 0.0

    def update(self, step: int, change: float, positions: np.ndarray, theta: np.ndarray) -> bool:
        self._moved += change
        if step % self._interval:
            return False
        moved, self._moved = self._moved, 0.0
        # A swarm at rest is left to the stationarity rule.
        if moved < self._eps_state:
            return False
        coords = relative_coordinates(positions, theta)
        key = tuple(np.round(coords / self._eps).astype(np.int64))
        previous = self._grid.get(key)
        if previous is not None and np.max(np.abs(previous - coords)) <= self._eps:
            return True
        self._grid[key] = coords.copy()
        return False


class _RegimeMonitor:
    """
    Detects a repeating regime.

    When sensor values, contacts and velocities stay fixed for one full period
    of the rotating robots, and every robot either keeps its position or
    orbits freely with the common |omega|, the swarm returns to the same state
    forever.
    """

    def __init__(self):
        self._signature: Optional[Tuple] = None
        self._since = 0.0

    def update(self, t_start: float, t_end: float, values: np.ndarray, info: _StepInfo) -> bool:
        signature = (values.tobytes(), info.contacts.keys) + info.motion.signature()
        if info.events or signature != self._signature:
            self._signature = None if info.events else signature
            self._since = t_start
            return False
        period = self._period(info.motion)
        return period is not None and t_end - self._since >= period

    @staticmethod
    def _period(motion: _Motion) -> Optional[float]:
        translating = np.where(
            motion.linear,
            np.hypot(motion.velocity[:, 0], motion.velocity[:, 1]) > 0.0,
            motion.v != 0.0,
        )
        rotating = motion.omega != 0.0
        # Straight-line movers never come back.
        if np.any(translating & (motion.linear | ~rotating)):
            return None
        if not np.any(rotating):
            return None
        rates = np.abs(motion.omega[rotating])
        if rates.max() - rates.min() > 1e-12 * rates.max():
            return None
        return TWO_PI / float(rates.max())


class Simulator:
    """
    Fixed-step simulator for one SimConfig.

    Responsibilities:
    - Sense, select modes and move robots synchronously
    - Keep bodies from overlapping through contact substepping
    - Decide when a run is over and why
    """

    def __init__(self, sim: Optional[SimConfig] = None, config: Optional[Config] = None):
        self.config = config or get_config()
        self.sim = sim or SimConfig.from_config(self.config)
        self._consecutive_caps = 0
        self.t = 0.0

    # ------------------------------------------------------------------
    # Public operations
    # ------------------------------------------------------------------

    def step(
        self,
        state: MRState,
        controller: BimodalController,
        noise_offsets: Optional[np.ndarray] = None,
    ) -> MRState:
        """
        Advance the whole swarm by one dt.

        Raises StepDivergedError when this simulator hit the contact event cap
        on two consecutive calls. self.t counts the simulated time of the calls.
        """
        world = state.world
        offsets = np.zeros((state.n, 2)) if noise_offsets is None else np.asarray(noise_offsets)
        twists = self._mode_twists(controller, offsets, world)
        positions, theta = state.positions(), state.headings()
        values, _ = sense_arrays(
            positions, theta, world.robot_radius, self.config.SENSOR_TOLERANCE
        )
        new_positions, new_theta, info = self._advance(positions, theta, values, twists, world)
        if self._track_cap(info):
            raise StepDivergedError(self.t, self.config.MAX_CONTACT_EVENTS)
        self.t += self.sim.dt
        return MRState.from_arrays(new_positions, wrap_angles(new_theta), world)

    def run(self, scenario: Scenario, observer: Optional[StepObserver] = None) -> RunOutcome:
        """Simulate a scenario until it aggregates or provably never will."""
        sim = scenario.sim
        world = scenario.initial.world
        n = scenario.initial.n
        offsets = draw_noise_offsets(sim.noise, n)
        twists = self._mode_twists(scenario.controller, offsets, world)
        pinned = (twists[0] == 0.0) & (twists[2] == 0.0)

        positions = scenario.initial.positions()
        theta = scenario.initial.headings()
        threshold = world.aggregation_distance
        agg_tol = self.config.AGGREGATION_TOLERANCE
        dt = sim.dt
        max_steps = int(math.ceil(sim.time_budget / dt - 1e-9))
        trajectory_every = max(int(round(sim.trajectory_interval / dt)), 1)

        stationarity = _StationarityMonitor(
            int(round(sim.stationarity_window / dt)), self.config.EPS_STATE
        )
        cycles = _CycleDetector(
            int(round(self.config.CYCLE_RECORD_INTERVAL / dt)),
            self.config.EPS_CYCLE,
            self.config.EPS_STATE,
        )
        regime = _RegimeMonitor()
        trajectory = [TrajectorySample(0.0, scenario.initial)] if sim.record_trajectory else None
        self._consecutive_caps = 0
        self.t = 0.0

        logger.info(
            f"Starting run '{scenario.label}' (n={n}, seed={scenario.seed}, "
            f"budget={sim.time_budget}s)"
        )

        def finish(verdict: Verdict, steps: int) -> RunOutcome:
            t = steps * dt
            final = MRState.from_arrays(positions, theta, world)
            if trajectory is not None and trajectory[-1].t != t:
                trajectory.append(TrajectorySample(t, final))
            logger.info(f"Run '{scenario.label}' finished: {verdict.value} at t={t:.2f}s")
            return RunOutcome(
                verdict=verdict,
                t_end=t,
                final_state=final,
                trajectory=tuple(trajectory) if trajectory is not None else None,
                steps=steps,
            )

        if positions_connected(positions, threshold, agg_tol):
            return finish(Verdict.AGGREGATED, 0)

        steps = 0
        while steps < max_steps:
            self.t = steps * dt
            values, _ = sense_arrays(
                positions, theta, world.robot_radius, self.config.SENSOR_TOLERANCE
            )
            if observer is not None:
                observer(
                    steps * dt,
                    MRState.from_arrays(positions, theta, world),
                    tuple(bool(v) for v in values),
                )

            new_positions, new_theta, info = self._advance(positions, theta, values, twists, world)
            new_theta = wrap_angles(new_theta)
            change = self._pose_change(positions, theta, new_positions, new_theta, pinned)

            if self._track_cap(info):
                if change < self.config.EPS_STATE:
                    logger.warning(f"Run '{scenario.label}' wedged at t={steps * dt:.2f}s")
                    return finish(Verdict.STATIONARY, steps)
                raise StepDivergedError(self.t, self.config.MAX_CONTACT_EVENTS)

            positions, theta = new_positions, new_theta
            steps += 1

            if trajectory is not None and steps % trajectory_every == 0:
                trajectory.append(
                    TrajectorySample(steps * dt, MRState.from_arrays(positions, theta, world))
                )
            if positions_connected(positions, threshold, agg_tol):
                return finish(Verdict.AGGREGATED, steps)
            if stationarity.update(change):
                return finish(Verdict.STATIONARY, steps)
            if sim.cycle_detection:
                if regime.update((steps - 1) * dt, steps * dt, values, info):
                    return finish(Verdict.PERIODIC, steps)
                if cycles.update(steps, change, positions, theta):
                    return finish(Verdict.PERIODIC, steps)

        return finish(Verdict.TIMEOUT, steps)

    @staticmethod
    def simulate_unblocked(
        state: RobotState,
        cmd: WheelCommand,
        t: float,
        world: Optional[WorldParams] = None,
    ) -> RobotState:
        """Pose after driving cmd for t while ignoring every other robot."""
        return advance(state, cmd, t, world or WorldParams())

    # ------------------------------------------------------------------
    # Step internals
    # ------------------------------------------------------------------

    @staticmethod
    def _mode_twists(
        controller: BimodalController,
        offsets: np.ndarray,
        world: WorldParams,
    ) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(v_a, omega_a, v_b, omega_b) per robot after noise."""
        n = len(offsets)
        out = np.zeros((4, n))
        for i in range(n):
            a = twist(controller.mode_a.with_offsets(*offsets[i]), world)
            b = twist(controller.mode_b.with_offsets(*offsets[i]), world)
            out[:, i] = (a.v, a.omega, b.v, b.omega)
        return out[0], out[1], out[2], out[3]

    def _track_cap(self, info: _StepInfo) -> bool:
        """True on the second consecutive capped step."""
        self._consecutive_caps = self._consecutive_caps + 1 if info.capped else 0
        return self._consecutive_caps >= 2

    def _advance(
        self,
        positions: np.ndarray,
        theta: np.ndarray,
        values: np.ndarray,
        twists: Tuple[np.ndarray, ...],
        world: WorldParams,
    ) -> Tuple[np.ndarray, np.ndarray, _StepInfo]:
        n = len(theta)
        commanded = _Motion(
            linear=np.zeros(n, dtype=bool),
            velocity=np.zeros((n, 2)),
            v=np.where(values, twists[2], twists[0]),
            omega=np.where(values, twists[3], twists[1]),
        )
        radius = world.robot_radius
        tol = self.sim.contact.contact_tolerance
        elastic = not self.sim.contact.is_plastic

        contacts = detect_contacts_arrays(positions, radius, tol)
        motion = self._resolve(theta, commanded, contacts)
        first = _StepInfo(0, False, contacts, motion)
        remaining = self.sim.dt
        events = 0
        capped = False

        while True:
            moved_pos, moved_theta = self._move(positions, theta, motion, remaining)
            if not self._penetrates(moved_pos, radius, tol):
                positions, theta = moved_pos, moved_theta
                break
            if events >= self.config.MAX_CONTACT_EVENTS:
                logger.debug("Contact event cap reached, clamping the rest of the step")
                motion = self._clamp(positions, theta, motion, remaining, radius, tol)
                moved_pos, moved_theta = self._move(positions, theta, motion, remaining)
                if self._penetrates(moved_pos, radius, tol):
                    tau = self._time_of_impact(positions, theta, motion, remaining, radius)
                    moved_pos, moved_theta = self._move(positions, theta, motion, tau)
                    capped = True
                positions, theta = moved_pos, moved_theta
                break
            tau = self._time_of_impact(positions, theta, motion, remaining, radius)
            positions, theta = self._move(positions, theta, motion, tau)
            remaining -= tau
            events += 1
            # Elastic bounces also settle every pair that could still meet this step.
            reach = 2.0 * motion.max_speed() * remaining if elastic else 0.0
            contacts = detect_contacts_arrays(positions, radius, tol + reach)
            motion = self._resolve(theta, motion, contacts)
            logger.debug(f"Contact event {events}: {len(contacts)} resolved pairs")

        first.events = events
        first.capped = capped
        return positions, theta, first

    def _resolve(self, theta: np.ndarray, motion: _Motion, contacts: ContactSet) -> _Motion:
        """
        Velocities for the rest of the step, starting from the current ones.

        Robots already moved by an earlier event keep their resolved velocity
        as the input of this one.
        """
        resolved = motion.copy()
        if not len(contacts):
            return resolved

        involved = sorted(contacts.involved)
        current = motion.world_velocities(theta)
        contact_cfg = self.sim.contact

        if contact_cfg.is_plastic:
            for i in involved:
                want = (float(current[i, 0]), float(current[i, 1]))
                got = project_onto_free_cone(want, contacts.normals_for(i))
                if not contact_cfg.allow_sliding and translation_blocked(want, got):
                    resolved.omega[i] = 0.0
                    got = (0.0, 0.0)
                resolved.velocity[i] = got
            moved = np.zeros(len(theta), dtype=bool)
            moved[involved] = True
        else:
            after = exchange_impulses(current, contacts, contact_cfg.restitution)
            moved = motion.linear | np.any(np.abs(after - current) > VELOCITY_EPS, axis=1)
            resolved.velocity[moved] = after[moved]
        resolved.linear |= moved
        resolved.v[moved] = 0.0
        return resolved

    def _clamp(
        self,
        positions: np.ndarray,
        theta: np.ndarray,
        motion: _Motion,
        horizon: float,
        radius: float,
        tol: float,
    ) -> _Motion:
        """
        Plastic free-cone clamp of every pair that could meet within horizon.

        No clamped pair approaches and no other pair is close enough to meet,
        so the clamped motion runs to the end of the step without overlap.
        """
        reach = 2.0 * motion.max_speed() * horizon
        near = detect_contacts_arrays(positions, radius, tol + reach)
        clamped = motion.copy()
        if not len(near):
            return clamped
        current = motion.world_velocities(theta)
        contact_cfg = self.sim.contact
        stall = contact_cfg.is_plastic and not contact_cfg.allow_sliding
        for i in sorted(near.involved):
            want = (float(current[i, 0]), float(current[i, 1]))
            got = project_onto_free_cone(want, near.normals_for(i))
            if stall and translation_blocked(want, got):
                clamped.omega[i] = 0.0
                got = (0.0, 0.0)
            clamped.linear[i] = True
            clamped.velocity[i] = got
            clamped.v[i] = 0.0
        return clamped

    @staticmethod
    def _move(
        positions: np.ndarray,
        theta: np.ndarray,
        motion: _Motion,
        dt: float,
    ) -> Tuple[np.ndarray, np.ndarray]:
        arc_pos, arc_theta = advance_arrays(positions, theta, motion.v, motion.omega, dt)
        if not motion.linear.any():
            return arc_pos, arc_theta
        lin = motion.linear
        arc_pos[lin] = positions[lin] + motion.velocity[lin] * dt
        return arc_pos, arc_theta

    @staticmethod
    def _penetrates(positions: np.ndarray, radius: float, tol: float) -> bool:
        if len(positions) < 2:
            return False
        return bool(pdist(positions).min() < 2.0 * radius - tol)

    def _time_of_impact(
        self,
        positions: np.ndarray,
        theta: np.ndarray,
        motion: _Motion,
        horizon: float,
        radius: float,
    ) -> float:
        """
        Latest time in [0, horizon] before any pair comes closer than 2r, by
        bisection. Pairs resolved there keep the contact tolerance as slack.
        """
        lo, hi = 0.0, horizon
        for _ in range(self.config.BISECTION_ITERATIONS):
            mid = 0.5 * (lo + hi)
            if self._penetrates(self._move(positions, theta, motion, mid)[0], radius, 0.0):
                hi = mid
            else:
                lo = mid
        return lo

    @staticmethod
    def _pose_change(
        positions: np.ndarray,
        theta: np.ndarray,
        new_positions: np.ndarray,
        new_theta: np.ndarray,
        pinned: np.ndarray,
    ) -> float:
        """Largest per-robot pose change; headings of pinned robots ignored."""
        moved = np.abs(new_positions - positions).max(axis=1)
        turned = np.abs(wrap_angles(new_theta - theta))
        turned = np.where(pinned, 0.0, turned)
        return float(np.maximum(moved, turned).max())


# ============================================
# MODULE-LEVEL OPERATIONS
# ============================================

def step(
    state: MRState,
    u: BimodalController,
    cfg: Optional[SimConfig] = None,
    noise_offsets: Optional[np.ndarray] = None,
) -> MRState:
    """One synchronous step of the whole swarm."""
    return Simulator(cfg).step(state, u, noise_offsets)


def run(scenario: Scenario, observer: Optional[StepObserver] = None) -> RunOutcome:
    """Simulate a scenario with its own SimConfig."""
    return Simulator(scenario.sim).run(scenario, observer)


def simulate_unblocked(
    state: RobotState,
    cmd: WheelCommand,
    t: float,
    world: Optional[WorldParams] = None,
) -> RobotState:
    """Pose after driving cmd for t while ignoring every other robot."""
    return Simulator.simulate_unblocked(state, cmd, t, world)
