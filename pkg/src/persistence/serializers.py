"""
Dictionary and JSON mapping for scenario files, experiment specs and results.

Floats are written with repr precision, so parse(serialize(x)) == x.
Field errors name the offending path (for example "robots[2].theta").
"""

import json
import math
from typing import Any, Dict, List, Optional, Sequence

from src.domain import (
    AggregationReport,
    BimodalController,
    ContactConfig,
    ExperimentResult,
    ExperimentSpec,
    MRState,
    NoiseConfig,
    NoiseMode,
    RobotState,
    RunOutcome,
    RunSummary,
    Scenario,
    SimConfig,
    SweepSetting,
    WorldParams,
)

SCENARIO_FILE_VERSION = 1


class ScenarioFileError(ValueError):
    """Raised when a scenario or experiment file cannot be parsed."""

    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


# ============================================
# FIELD HELPERS
# ============================================

def _require(data: Any, key: str, path: str) -> Any:
    if not isinstance(data, dict):
        raise ScenarioFileError("expected an object", path or "<root>")
    if key not in data:
        raise ScenarioFileError("missing field", _join(path, key))
    return data[key]


def _join(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioFileError(f"expected a number, got {value!r}", path)
    return float(value)


def _optional_number(data: Dict[str, Any], key: str, default: float, path: str) -> float:
    if key not in data:
        return default
    return _number(data[key], _join(path, key))


def _build(factory, path: str, **kwargs):
    """Call a value-object constructor, reporting ValueError at `path`."""
    try:
        return factory(**kwargs)
    except ValueError as e:
        raise ScenarioFileError(str(e), path) from e


def parse_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioFileError(e.msg, f"line {e.lineno} column {e.colno}") from e


def dump_json(data: Any) -> str:
    return json.dumps(data, indent=2, allow_nan=True) + "\n"


# ============================================
# WORLD / CONTROLLER / SIM
# ============================================

def world_to_dict(world: WorldParams) -> Dict[str, float]:
    return {
        "r": world.robot_radius,
        "d_iw": world.inter_wheel,
        "v_max": world.v_max,
        "rho": world.padding,
    }


def world_from_dict(data: Optional[Dict[str, Any]], path: str = "world") -> WorldParams:
    if data is None:
        return WorldParams()
    if not isinstance(data, dict):
        raise ScenarioFileError("expected an object", path)
    defaults = WorldParams()
    kwargs = {
        "robot_radius": _optional_number(data, "r", defaults.robot_radius, path),
        "inter_wheel": _optional_number(data, "d_iw", defaults.inter_wheel, path),
        "v_max": _optional_number(data, "v_max", defaults.v_max, path),
    }
    if data.get("rho") is not None:
        kwargs["padding"] = _number(data["rho"], _join(path, "rho"))
    return _build(WorldParams, path, **kwargs)


def controller_to_list(controller: BimodalController) -> List[float]:
    return list(controller.as_tuple())


def controller_from_list(values: Any, path: str = "controller") -> BimodalController:
    if not isinstance(values, list) or len(values) != 4:
        raise ScenarioFileError("expected a list of 4 numbers", path)
    numbers = [_number(v, f"{path}[{i}]") for i, v in enumerate(values)]
    try:
        return BimodalController.from_sequence(numbers)
    except ValueError as e:
        raise ScenarioFileError(str(e), path) from e


def sim_to_dict(sim: SimConfig) -> Dict[str, Any]:
    return {
        "dt": sim.dt,
        "time_budget": sim.time_budget,
        "noise": {
            "mode": sim.noise.mode.value,
            "left": sim.noise.left_magnitude,
            "right": sim.noise.right_magnitude,
            "seed": sim.noise.seed,
        },
        "contact": {
            "restitution": sim.contact.restitution,
            "contact_tolerance": sim.contact.contact_tolerance,
            "allow_sliding": sim.contact.allow_sliding,
        },
        "stationarity_window": sim.stationarity_window,
        "cycle_detection": sim.cycle_detection,
        "record_trajectory": sim.record_trajectory,
        "trajectory_interval": sim.trajectory_interval,
    }


def sim_from_dict(data: Optional[Dict[str, Any]], base: SimConfig, path: str = "sim") -> SimConfig:
    """Overlay the fields present in `data` on `base`."""
    if data is None:
        return base
    if not isinstance(data, dict):
        raise ScenarioFileError("expected an object", path)

    noise = base.noise
    if "noise" in data:
        raw = data["noise"]
        npath = _join(path, "noise")
        if not isinstance(raw, dict):
            raise ScenarioFileError("expected an object", npath)
        try:
            mode = NoiseMode(raw.get("mode", NoiseMode.STATIC.value if raw.get("left") or raw.get("right") else noise.mode.value))
        except ValueError as e:
            raise ScenarioFileError(str(e), _join(npath, "mode")) from e
        noise = _build(
            NoiseConfig,
            npath,
            mode=mode,
            left_magnitude=_optional_number(raw, "left", noise.left_magnitude, npath),
            right_magnitude=_optional_number(raw, "right", noise.right_magnitude, npath),
            seed=int(_optional_number(raw, "seed", noise.seed, npath)),
        )

    contact = base.contact
    if "contact" in data:
        raw = data["contact"]
        cpath = _join(path, "contact")
        if not isinstance(raw, dict):
            raise ScenarioFileError("expected an object", cpath)
        contact = _build(
            ContactConfig,
            cpath,
            restitution=_optional_number(raw, "restitution", contact.restitution, cpath),
            contact_tolerance=_optional_number(
                raw, "contact_tolerance", contact.contact_tolerance, cpath
            ),
            allow_sliding=bool(raw.get("allow_sliding", contact.allow_sliding)),
        )

    return _build(
        SimConfig,
        path,
        dt=_optional_number(data, "dt", base.dt, path),
        time_budget=_optional_number(data, "time_budget", base.time_budget, path),
        contact=contact,
        noise=noise,
        stationarity_window=_optional_number(
            data, "stationarity_window", base.stationarity_window, path
        ),
        cycle_detection=bool(data.get("cycle_detection", base.cycle_detection)),
        record_trajectory=bool(data.get("record_trajectory", base.record_trajectory)),
        trajectory_interval=_optional_number(
            data, "trajectory_interval", base.trajectory_interval, path
        ),
    )


# ============================================
# STATES AND SCENARIOS
# ============================================

def robots_to_list(state: MRState) -> List[Dict[str, float]]:
    return [{"x": r.x, "y": r.y, "theta": r.theta} for r in state.robots]


def state_from_list(values: Any, world: WorldParams, path: str = "robots") -> MRState:
    if not isinstance(values, list) or not values:
        raise ScenarioFileError("expected a non-empty list of robots", path)
    robots = []
    for i, raw in enumerate(values):
        rpath = f"{path}[{i}]"
        robots.append(_build(
            RobotState,
            rpath,
            x=_number(_require(raw, "x", rpath), _join(rpath, "x")),
            y=_number(_require(raw, "y", rpath), _join(rpath, "y")),
            theta=_optional_number(raw, "theta", 0.0, rpath),
        ))
    return MRState(tuple(robots), world)


def scenario_to_dict(scenario: Scenario) -> Dict[str, Any]:
    return {
        "version": SCENARIO_FILE_VERSION,
        "world": world_to_dict(scenario.initial.world),
        "controller": controller_to_list(scenario.controller),
        "robots": robots_to_list(scenario.initial),
        "sim": sim_to_dict(scenario.sim),
        "label": scenario.label,
        "seed": scenario.seed,
    }


def scenario_from_dict(data: Any, defaults: Optional[SimConfig] = None) -> Scenario:
    """Build a Scenario; sim fields missing from the file come from `defaults`."""
    if not isinstance(data, dict):
        raise ScenarioFileError("expected a JSON object", "<root>")
    version = data.get("version", SCENARIO_FILE_VERSION)
    if version != SCENARIO_FILE_VERSION:
        raise ScenarioFileError(f"unsupported version {version!r}", "version")
    world = world_from_dict(data.get("world"))
    return _build(
        Scenario,
        "robots",
        initial=state_from_list(_require(data, "robots", ""), world),
        controller=controller_from_list(_require(data, "controller", "")),
        sim=sim_from_dict(data.get("sim"), defaults or SimConfig()),
        label=str(data.get("label", "")),
        seed=int(_optional_number(data, "seed", 0, "")),
    )


def parse_scenario_json(text: str, defaults: Optional[SimConfig] = None) -> Scenario:
    return scenario_from_dict(parse_json(text), defaults)


def dump_scenario_json(scenario: Scenario) -> str:
    return dump_json(scenario_to_dict(scenario))


# ============================================
# EXPERIMENT SPECS
# ============================================

def sweep_to_list(settings: Sequence[SweepSetting]) -> List[Dict[str, float]]:
    return [
        {"noise_left": s.noise_left, "noise_right": s.noise_right, "restitution": s.restitution}
        for s in settings
    ]


def spec_to_dict(spec: ExperimentSpec) -> Dict[str, Any]:
    return {
        "family": spec.family,
        "controller": controller_to_list(spec.controller),
        "num_runs": spec.num_runs,
        "params": dict(spec.params),
        "base_seed": spec.base_seed,
        "sim": sim_to_dict(spec.sim),
        "world": world_to_dict(spec.world),
        "sweep": sweep_to_list(spec.sweep),
        "workers": spec.workers,
        "label": spec.label,
    }


def spec_from_dict(data: Any, defaults: Optional[SimConfig] = None) -> ExperimentSpec:
    if not isinstance(data, dict):
        raise ScenarioFileError("expected a JSON object", "<root>")
    params = data.get("params", {})
    if not isinstance(params, dict):
        raise ScenarioFileError("expected an object", "params")
    raw_sweep = data.get("sweep", [])
    if not isinstance(raw_sweep, list):
        raise ScenarioFileError("expected a list", "sweep")
    sweep = []
    for i, raw in enumerate(raw_sweep):
        spath = f"sweep[{i}]"
        if not isinstance(raw, dict):
            raise ScenarioFileError("expected an object", spath)
        sweep.append(SweepSetting(
            _optional_number(raw, "noise_left", 0.0, spath),
            _optional_number(raw, "noise_right", 0.0, spath),
            _optional_number(raw, "restitution", 0.0, spath),
        ))
    family = _require(data, "family", "")
    if not isinstance(family, str):
        raise ScenarioFileError("expected a string", "family")
    return _build(
        ExperimentSpec,
        "<root>",
        family=family,
        controller=controller_from_list(_require(data, "controller", "")),
        num_runs=int(_number(_require(data, "num_runs", ""), "num_runs")),
        params=params,
        base_seed=int(_optional_number(data, "base_seed", 0, "")),
        sim=sim_from_dict(data.get("sim"), defaults or SimConfig()),
        world=world_from_dict(data.get("world")),
        sweep=tuple(sweep),
        workers=int(_optional_number(data, "workers", 1, "")),
        label=str(data.get("label", "")),
    )


def parse_spec_json(text: str, defaults: Optional[SimConfig] = None) -> ExperimentSpec:
    return spec_from_dict(parse_json(text), defaults)


# ============================================
# RESULTS
# ============================================

def _finite_or_none(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return value


def report_to_dict(report: AggregationReport) -> Dict[str, Any]:
    return {
        "aggregated": report.aggregated,
        "components": [sorted(c) for c in report.components],
        "largest_component_size": report.largest_component_size,
    }


def outcome_to_dict(outcome: RunOutcome) -> Dict[str, Any]:
    return {
        "verdict": outcome.verdict.value,
        "t_end": outcome.t_end,
        "steps": outcome.steps,
        "final_min_pairwise_dist": _finite_or_none(outcome.final_state.min_pairwise_distance()),
        "final_state": robots_to_list(outcome.final_state),
    }


def summary_to_dict(run: RunSummary) -> Dict[str, Any]:
    data = {
        "run_index": run.run_index,
        "seed": run.seed,
        "verdict": run.verdict.value,
        "t_end": run.t_end,
        "final_min_pairwise_dist": _finite_or_none(run.final_min_pairwise_dist),
    }
    if run.n_ring is not None:
        data["n_ring"] = run.n_ring
    if run.setting is not None:
        data["setting"] = run.setting
    if run.error is not None:
        data["error"] = run.error
    return data


def result_to_dict(result: ExperimentResult, include_runs: bool = False) -> Dict[str, Any]:
    data = {
        "num_runs": result.num_runs,
        "num_aggregated": result.num_aggregated,
        "num_errors": result.num_errors,
        "aggregation_rate": result.aggregation_rate,
        "mean_t_end": result.mean_t_end,
        "median_t_end": result.median_t_end,
        "ci_low": result.ci_low,
        "ci_high": result.ci_high,
    }
    if include_runs:
        data["runs"] = [summary_to_dict(r) for r in result.runs]
    return data
