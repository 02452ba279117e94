# Service layer
from .aggregation import DisjointSet, check, is_aggregated
from .contact import detect_contacts, resolve_elastic, resolve_plastic
from .experiments import (
    ExperimentError,
    SweepTable,
    UnknownFamilyError,
    execute_run,
    rate_trend,
    run_experiment,
    run_ring_sweep,
    summarize,
    wilson_interval,
)
from .generators import (
    Counterexample,
    CounterexampleGenerator,
    GeneratorRegistry,
    build_counterexample,
    create_default_registry,
)
from .kinematics import advance, icr_radius, twist
from .scenarios import (
    GeometryInfeasibleError,
    PlacementFailedError,
    ScenarioError,
    ScenarioValidationError,
)
from .sensing import sense, sense_all
from .simulator import SimulationError, Simulator, StepDivergedError, run, step
from .taxonomy import all_categories, categorize, classify

__all__ = [
    "DisjointSet",
    "check",
    "is_aggregated",
    "detect_contacts",
    "resolve_elastic",
    "resolve_plastic",
    "ExperimentError",
    "SweepTable",
    "UnknownFamilyError",
    "execute_run",
    "rate_trend",
    "run_experiment",
    "run_ring_sweep",
    "summarize",
    "wilson_interval",
    "Counterexample",
    "CounterexampleGenerator",
    "GeneratorRegistry",
    "build_counterexample",
    "create_default_registry",
    "advance",
    "icr_radius",
    "twist",
    "GeometryInfeasibleError",
    "PlacementFailedError",
    "ScenarioError",
    "ScenarioValidationError",
    "sense",
    "sense_all",
    "SimulationError",
    "Simulator",
    "StepDivergedError",
    "run",
    "step",
    "all_categories",
    "categorize",
    "classify",
]
