"""
Domain entities for swarm aggregation.

These are immutable value objects shared by every service: world constants,
robot poses, multi-robot states, controllers, run configuration and results.
Invariants are enforced in __post_init__ and raise ValueError.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import pdist

from .enums import MovementClass, NoiseMode, Verdict
from .geometry import COMMAND_EPS, heading_vector, normalize_angle, rotate_point


def _require_unit_interval(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or not -1.0 <= value <= 1.0:
        raise ValueError(f"{name} must be within [-1, 1], got {value}")
    return value


# ============================================
# WORLD AND POSES
# ============================================

@dataclass(frozen=True)
class WorldParams:
    """
    Physical constants shared by all robots of a run.

    Defaults are the e-puck values: radius 3.7 cm, inter-wheel distance
    5.1 cm, top wheel speed 12.8 cm/s, aggregation padding r/20.
    """
    robot_radius: float = 3.7
    inter_wheel: float = 5.1
    v_max: float = 12.8
    padding: Optional[float] = None

    def __post_init__(self):
        if self.padding is None:
            object.__setattr__(self, "padding", self.robot_radius / 20.0)
        if not self.robot_radius > 0:
            raise ValueError(f"robot_radius must be positive, got {self.robot_radius}")
        if not self.inter_wheel > 0:
            raise ValueError(f"inter_wheel must be positive, got {self.inter_wheel}")
        if not self.v_max > 0:
            raise ValueError(f"v_max must be positive, got {self.v_max}")
        if not self.padding >= 0:
            raise ValueError(f"padding must be non-negative, got {self.padding}")

    @property
    def contact_distance(self) -> float:
        """Center distance at which two bodies touch."""
        return 2.0 * self.robot_radius

    @property
    def aggregation_distance(self) -> float:
        """Center distance at which two padded discs touch."""
        return 2.0 * (self.robot_radius + self.padding)

    @property
    def max_turn_rate(self) -> float:
        return 2.0 * self.v_max / self.inter_wheel

    def proofs_mode(self) -> "WorldParams":
        """The same world with zero padding."""
        return replace(self, padding=0.0)


@dataclass(frozen=True)
class RobotState:
    """Pose of one robot; theta is stored normalized to [-pi, pi)."""
    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self):
        x, y = float(self.x), float(self.y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError(f"Robot position must be finite, got ({x}, {y})")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "theta", normalize_angle(float(self.theta)))

    @property
    def position(self) -> Tuple[float, float]:
        return self.x, self.y

    @property
    def heading(self) -> Tuple[float, float]:
        return heading_vector(self.theta)

    def translated(self, dx: float, dy: float) -> "RobotState":
        return RobotState(self.x + dx, self.y + dy, self.theta)

    def rotated_about(self, phi: float, cx: float = 0.0, cy: float = 0.0) -> "RobotState":
        """Rigidly rotate the pose anticlockwise by phi about (cx, cy)."""
        x, y = rotate_point(self.x, self.y, phi, cx, cy)
        return RobotState(x, y, self.theta + phi)

    def as_tuple(self) -> Tuple[float, float, float]:
        return self.x, self.y, self.theta


@dataclass(frozen=True)
class MRState:
    """
    Multi-robot state: an ordered tuple of poses plus the world they live in.

    Robot identity is the index. The free-space property (bodies never
    overlap) is not enforced here because generators build candidate states
    and test them; see in_free_space() and Scenario.
    """
    robots: Tuple[RobotState, ...]
    world: WorldParams = field(default_factory=WorldParams)

    def __post_init__(self):
        robots = tuple(self.robots)
        if not robots:
            raise ValueError("An MR state needs at least one robot")
        object.__setattr__(self, "robots", robots)

    @classmethod
    def from_arrays(
        cls,
        positions: np.ndarray,
        headings: np.ndarray,
        world: WorldParams,
    ) -> "MRState":
        """Build a state from an (n, 2) position array and n headings."""
        robots = tuple(
            RobotState(float(p[0]), float(p[1]), float(h))
            for p, h in zip(positions, headings)
        )
        return cls(robots=robots, world=world)

    @property
    def n(self) -> int:
        return len(self.robots)

    def __len__(self) -> int:
        return len(self.robots)

    def __iter__(self) -> Iterator[RobotState]:
        return iter(self.robots)

    def __getitem__(self, index: int) -> RobotState:
        return self.robots[index]

    def positions(self) -> np.ndarray:
        return np.array([[r.x, r.y] for r in self.robots], dtype=float)

    def headings(self) -> np.ndarray:
        return np.array([r.theta for r in self.robots], dtype=float)

    def with_robots(self, robots: Sequence[RobotState]) -> "MRState":
        return MRState(robots=tuple(robots), world=self.world)

    def transformed(self, phi: float, dx: float = 0.0, dy: float = 0.0) -> "MRState":
        """Rotate every pose by phi about the origin, then translate."""
        return self.with_robots(
            r.rotated_about(phi).translated(dx, dy) for r in self.robots
        )

    def min_pairwise_distance(self) -> float:
        if self.n < 2:
            return math.inf
        return float(pdist(self.positions()).min())

    def in_free_space(self, tolerance: float = 0.0) -> bool:
        """True when no two bodies overlap by more than tolerance."""
        return self.min_pairwise_distance() >= self.world.contact_distance - tolerance


# ============================================
# COMMANDS AND CONTROLLERS
# ============================================

@dataclass(frozen=True)
class WheelCommand:
    """Normalized left/right wheel speeds, each within [-1, 1]."""
    v_l: float
    v_r: float

    def __post_init__(self):
        object.__setattr__(self, "v_l", _require_unit_interval("v_l", self.v_l))
        object.__setattr__(self, "v_r", _require_unit_interval("v_r", self.v_r))

    @property
    def is_straight(self) -> bool:
        return abs(self.v_r - self.v_l) <= COMMAND_EPS

    def with_offsets(self, offset_l: float, offset_r: float) -> "WheelCommand":
        """Add wheel offsets and clip back into [-1, 1]."""
        return WheelCommand(
            float(np.clip(self.v_l + offset_l, -1.0, 1.0)),
            float(np.clip(self.v_r + offset_r, -1.0, 1.0)),
        )

    def reversed(self) -> "WheelCommand":
        return WheelCommand(-self.v_l, -self.v_r)

    def swapped(self) -> "WheelCommand":
        return WheelCommand(self.v_r, self.v_l)


@dataclass(frozen=True)
class BodyTwist:
    """Tangential speed v (cm/s) and turn rate omega (rad/s)."""
    v: float
    omega: float


@dataclass(frozen=True)
class PlanarVelocity:
    """World-frame translation (vx, vy) plus turn rate omega."""
    vx: float
    vy: float
    omega: float

    @property
    def speed(self) -> float:
        return math.hypot(self.vx, self.vy)


@dataclass(frozen=True)
class BimodalController:
    """
    Four normalized wheel speeds (v_l0, v_r0, v_l1, v_r1).

    Mode A (v_l0, v_r0) runs while the sensor reads 0, mode B (v_l1, v_r1)
    while another robot is in sight.
    """
    v_l0: float
    v_r0: float
    v_l1: float
    v_r1: float

    def __post_init__(self):
        for name in ("v_l0", "v_r0", "v_l1", "v_r1"):
            object.__setattr__(self, name, _require_unit_interval(name, getattr(self, name)))

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> "BimodalController":
        values = list(values)
        if len(values) != 4:
            raise ValueError(f"A controller has 4 components, got {len(values)}")
        return cls(*values)

    @classmethod
    def u_prev(cls) -> "BimodalController":
        """Backward circling when alone, spin on the spot when a robot is seen."""
        return cls(-0.7, -1.0, 1.0, -1.0)

    @classmethod
    def u_prev_revised(cls) -> "BimodalController":
        """u_prev with its circle shrunk below the robot radius."""
        return cls(-0.18, -1.0, 1.0, -1.0)

    @classmethod
    def u_star(cls, a: float = 0.5, b: float = 1.0) -> "BimodalController":
        """Spin on the spot when alone, drive straight at what is seen."""
        if not (0.0 < a <= 1.0 and 0.0 < b <= 1.0):
            raise ValueError(f"u_star needs a, b in (0, 1], got a={a}, b={b}")
        return cls(-a, a, b, b)

    @property
    def mode_a(self) -> WheelCommand:
        return WheelCommand(self.v_l0, self.v_r0)

    @property
    def mode_b(self) -> WheelCommand:
        return WheelCommand(self.v_l1, self.v_r1)

    def command(self, sees: bool) -> WheelCommand:
        return self.mode_b if sees else self.mode_a

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return self.v_l0, self.v_r0, self.v_l1, self.v_r1


@dataclass(frozen=True)
class ControllerCategory:
    """Pair of movement classes, labelled like "CB-RS"."""
    mode_a: MovementClass
    mode_b: MovementClass

    @classmethod
    def from_label(cls, label: str) -> "ControllerCategory":
        parts = label.strip().upper().split("-")
        if len(parts) != 2:
            raise ValueError(f"Category label must look like 'CB-RS', got {label!r}")
        return cls(MovementClass(parts[0]), MovementClass(parts[1]))

    @property
    def label(self) -> str:
        return f"{self.mode_a.value}-{self.mode_b.value}"

    def __str__(self) -> str:
        return self.label


# ============================================
# SENSING AND CONTACTS
# ============================================

@dataclass(frozen=True)
class SensorReading:
    """Binary sensor value plus the nearest robot on the ray (diagnostic)."""
    value: bool
    seen_index: Optional[int] = None

    def __post_init__(self):
        if self.value != (self.seen_index is not None):
            raise ValueError(
                f"Reading value {self.value} inconsistent with seen_index {self.seen_index}"
            )


@dataclass(frozen=True)
class ContactConfig:
    """
    Collision law.

    restitution 0 is purely plastic, 1 purely elastic. allow_sliding lets a
    plastically blocked robot keep the tangential part of its motion; by
    default a blocked wheel pair stalls instead.
    """
    restitution: float = 0.0
    contact_tolerance: float = 1e-6
    allow_sliding: bool = False

    def __post_init__(self):
        if not 0.0 <= self.restitution <= 1.0:
            raise ValueError(f"restitution must be within [0, 1], got {self.restitution}")
        if not self.contact_tolerance > 0:
            raise ValueError(
                f"contact_tolerance must be positive, got {self.contact_tolerance}"
            )

    @property
    def is_plastic(self) -> bool:
        return self.restitution == 0.0


@dataclass(frozen=True)
class Contact:
    """Touching pair i < j with the unit normal pointing from i to j."""
    i: int
    j: int
    normal: Tuple[float, float]
    distance: float


@dataclass(frozen=True)
class ContactSet:
    pairs: Tuple[Contact, ...] = ()

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[Contact]:
        return iter(self.pairs)

    @property
    def keys(self) -> FrozenSet[Tuple[int, int]]:
        return frozenset((c.i, c.j) for c in self.pairs)

    @property
    def involved(self) -> FrozenSet[int]:
        return frozenset(k for c in self.pairs for k in (c.i, c.j))

    def normals_for(self, index: int) -> List[Tuple[float, float]]:
        """Unit normals pointing from robot `index` into each touching partner."""
        normals = []
        for c in self.pairs:
            if c.i == index:
                normals.append(c.normal)
            elif c.j == index:
                normals.append((-c.normal[0], -c.normal[1]))
        return normals


# ============================================
# RUN CONFIGURATION
# ============================================

@dataclass(frozen=True)
class NoiseConfig:
    """Static wheel noise: magnitudes are half-widths of uniform offsets."""
    mode: NoiseMode = NoiseMode.NONE
    left_magnitude: float = 0.0
    right_magnitude: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.left_magnitude < 0 or self.right_magnitude < 0:
            raise ValueError("Noise magnitudes must be non-negative")

    @classmethod
    def static(cls, left: float, right: float, seed: int = 0) -> "NoiseConfig":
        return cls(NoiseMode.STATIC, left, right, seed)

    @property
    def is_active(self) -> bool:
        return self.mode == NoiseMode.STATIC and (
            self.left_magnitude > 0 or self.right_magnitude > 0
        )


@dataclass(frozen=True)
class SimConfig:
    """Per-run simulator configuration."""
    dt: float = 0.01
    time_budget: float = 5000.0
    contact: ContactConfig = field(default_factory=ContactConfig)
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    stationarity_window: float = 2.0
    cycle_detection: bool = True
    record_trajectory: bool = False
    trajectory_interval: float = 0.1

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.time_budget >= 0:
            raise ValueError(f"time_budget must be non-negative, got {self.time_budget}")
        if not self.stationarity_window > 0:
            raise ValueError(
                f"stationarity_window must be positive, got {self.stationarity_window}"
            )
        if not self.trajectory_interval > 0:
            raise ValueError(
                f"trajectory_interval must be positive, got {self.trajectory_interval}"
            )

    @classmethod
    def from_config(cls, config, **overrides) -> "SimConfig":
        """Defaults taken from the application Config, then overrides."""
        values: Dict[str, Any] = {
            "dt": config.DT,
            "time_budget": config.TIME_BUDGET,
            "contact": ContactConfig(contact_tolerance=config.CONTACT_TOLERANCE),
            "stationarity_window": config.STATIONARITY_WINDOW,
            "trajectory_interval": config.TRAJECTORY_INTERVAL,
        }
        values.update(overrides)
        return cls(**values)


@dataclass(frozen=True)
class Scenario:
    """Initial state, controller and run configuration of one simulation."""
    initial: MRState
    controller: BimodalController
    sim: SimConfig = field(default_factory=SimConfig)
    label: str = ""
    seed: int = 0

    def __post_init__(self):
        if not self.initial.in_free_space(self.sim.contact.contact_tolerance):
            raise ValueError(
                f"Scenario '{self.label}' starts with overlapping robots "
                f"(min distance {self.initial.min_pairwise_distance():.9g})"
            )


@dataclass(frozen=True)
class Epsilons:
    """Maximal pose perturbation (x, y, theta) of a deadlock construction."""
    x: float
    y: float
    theta: float

    def __post_init__(self):
        if not (self.x > 0 and self.y > 0 and self.theta > 0):
            raise ValueError(f"Perturbation bounds must be positive, got {self}")


# ============================================
# RESULTS
# ============================================

@dataclass(frozen=True)
class TrajectorySample:
    t: float
    state: MRState


@dataclass(frozen=True)
class RunOutcome:
    """Verdict of one run with the time and state it ended at."""
    verdict: Verdict
    t_end: float
    final_state: MRState
    trajectory: Optional[Tuple[TrajectorySample, ...]] = None
    steps: int = 0


@dataclass(frozen=True)
class AggregationReport:
    aggregated: bool
    components: Tuple[FrozenSet[int], ...]
    largest_component_size: int

    def __post_init__(self):
        if self.aggregated != (len(self.components) == 1):
            raise ValueError("aggregated must hold exactly when there is one component")


@dataclass(frozen=True)
class SweepSetting:
    """One (noise, restitution) cell of a ring sweep."""
    noise_left: float = 0.0
    noise_right: float = 0.0
    restitution: float = 0.0

    @property
    def label(self) -> str:
        if self.noise_left == 0 and self.noise_right == 0:
            noise = "none"
        else:
            noise = f"{self.noise_left:g}/{self.noise_right:g}"
        return f"noise={noise},e={self.restitution:g}"

    def noise_config(self, seed: int) -> NoiseConfig:
        if self.noise_left == 0 and self.noise_right == 0:
            return NoiseConfig(seed=seed)
        return NoiseConfig.static(self.noise_left, self.noise_right, seed)


@dataclass(frozen=True)
class ExperimentSpec:
    """
    A batch of seeded runs of one scenario family.

    Run k uses seed base_seed + k for every random draw it makes.
    """
    family: str
    controller: BimodalController
    num_runs: int
    params: Dict[str, Any] = field(default_factory=dict)
    base_seed: int = 0
    sim: SimConfig = field(default_factory=SimConfig)
    world: WorldParams = field(default_factory=WorldParams)
    sweep: Tuple[SweepSetting, ...] = ()
    workers: int = 1
    label: str = ""

    def __post_init__(self):
        if self.num_runs < 1:
            raise ValueError(f"num_runs must be at least 1, got {self.num_runs}")
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")
        object.__setattr__(self, "sweep", tuple(self.sweep))

    def seed_for(self, run_index: int) -> int:
        return self.base_seed + run_index


@dataclass(frozen=True)
class RunSummary:
    """One row of a result file."""
    run_index: int
    seed: int
    verdict: Verdict
    t_end: float
    final_min_pairwise_dist: float
    n_ring: Optional[int] = None
    setting: Optional[str] = None
    error: Optional[str] = None


@dataclass(frozen=True)
class ExperimentResult:
    """Run summaries sorted by run index, plus batch statistics."""
    runs: Tuple[RunSummary, ...]
    num_runs: int
    num_aggregated: int
    num_errors: int
    aggregation_rate: float
    mean_t_end: Optional[float]
    median_t_end: Optional[float]
    ci_low: float
    ci_high: float

    def __post_init__(self):
        if self.num_runs and self.aggregation_rate != self.num_aggregated / self.num_runs:
            raise ValueError("aggregation_rate must equal num_aggregated / num_runs")
