# Domain models
from .enums import (
    IcrKind,
    MovementClass,
    NoiseMode,
    PairFacing,
    RingHeading,
    SightingCase,
    Verdict,
)
from .entities import (
    AggregationReport,
    BimodalController,
    BodyTwist,
    Contact,
    ContactConfig,
    ContactSet,
    ControllerCategory,
    Epsilons,
    ExperimentResult,
    ExperimentSpec,
    MRState,
    NoiseConfig,
    PlanarVelocity,
    RobotState,
    RunOutcome,
    RunSummary,
    Scenario,
    SensorReading,
    SimConfig,
    SweepSetting,
    TrajectorySample,
    WheelCommand,
    WorldParams,
)
from .geometry import distance, normalize_angle
from .state_machine import InvalidTransitionError, SightingStateMachine, SightingTracker

__all__ = [
    "IcrKind",
    "MovementClass",
    "NoiseMode",
    "PairFacing",
    "RingHeading",
    "SightingCase",
    "Verdict",
    "AggregationReport",
    "BimodalController",
    "BodyTwist",
    "Contact",
    "ContactConfig",
    "ContactSet",
    "ControllerCategory",
    "Epsilons",
    "ExperimentResult",
    "ExperimentSpec",
    "MRState",
    "NoiseConfig",
    "PlanarVelocity",
    "RobotState",
    "RunOutcome",
    "RunSummary",
    "Scenario",
    "SensorReading",
    "SimConfig",
    "SweepSetting",
    "TrajectorySample",
    "WheelCommand",
    "WorldParams",
    "distance",
    "normalize_angle",
    "InvalidTransitionError",
    "SightingStateMachine",
    "SightingTracker",
]
