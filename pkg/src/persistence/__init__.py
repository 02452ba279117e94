# Persistence layer
from .plots import render_sweep_plot
from .repositories import (
    ResultRepository,
    ScenarioRepository,
    read_runs_csv,
    write_trajectory_csv,
)
from .serializers import (
    ScenarioFileError,
    outcome_to_dict,
    report_to_dict,
    result_to_dict,
    scenario_from_dict,
    scenario_to_dict,
    spec_from_dict,
    spec_to_dict,
)
from .svg import render_trajectories_svg

__all__ = [
    "render_sweep_plot",
    "ResultRepository",
    "ScenarioRepository",
    "read_runs_csv",
    "write_trajectory_csv",
    "ScenarioFileError",
    "outcome_to_dict",
    "report_to_dict",
    "result_to_dict",
    "scenario_from_dict",
    "scenario_to_dict",
    "spec_from_dict",
    "spec_to_dict",
    "render_trajectories_svg",
]
