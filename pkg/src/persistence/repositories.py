"""
File repositories for scenarios, experiment results and trajectories.

These repositories are the only code that touches the filesystem. Result
files are written row by row in a fixed order, so the same experiment
always produces byte-identical files.
"""

import csv
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

from src.domain import ExperimentResult, RunOutcome, RunSummary, Scenario, SimConfig, Verdict
from .serializers import (
    ScenarioFileError,
    dump_json,
    dump_scenario_json,
    parse_scenario_json,
    parse_spec_json,
    result_to_dict,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

RUN_COLUMNS = [
    "run_index",
    "seed",
    "verdict",
    "t_end",
    "final_min_pairwise_dist",
    "aggregation_rate_running",
]
CELL_COLUMNS = ["n_ring", "setting"]
TRAJECTORY_COLUMNS = ["t", "robot", "x", "y", "theta"]


def _read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioFileError(f"cannot read file: {e.strerror}", str(path)) from e


class ScenarioRepository:
    """Repository for scenario and experiment-spec files."""

    def __init__(self, defaults: Optional[SimConfig] = None):
        self.defaults = defaults

    def load(self, path: PathLike) -> Scenario:
        """Load a scenario file; sim fields it omits come from the defaults."""
        scenario = parse_scenario_json(_read_text(path), self.defaults)
        logger.debug(f"Loaded scenario '{scenario.label}' ({scenario.initial.n} robots) from {path}")
        return scenario

    def save(self, scenario: Scenario, path: PathLike) -> Path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(dump_scenario_json(scenario), encoding="utf-8")
        logger.info(f"Wrote scenario '{scenario.label}' to {target}")
        return target

    def load_spec(self, path: PathLike):
        return parse_spec_json(_read_text(path), self.defaults)


class ResultRepository:
    """Repository for experiment result files under one output directory."""

    def __init__(self, out_dir: PathLike):
        self.out_dir = Path(out_dir)

    def _target(self, name: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        return self.out_dir / name

    def write_runs(self, runs: Sequence[RunSummary], name: str = "runs.csv") -> Path:
        """
        One CSV row per run. Runs carrying an (n_ring, setting) cell get the
        two cell columns first; the running aggregation rate restarts per cell.
        """
        with_cells = any(r.n_ring is not None or r.setting is not None for r in runs)
        columns = (CELL_COLUMNS if with_cells else []) + RUN_COLUMNS
        target = self._target(name)
        with target.open("w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(columns)
            for row in self._rows(runs, with_cells):
                writer.writerow(row)
        logger.info(f"Wrote {len(runs)} run rows to {target}")
        return target

    @staticmethod
    def _rows(runs: Sequence[RunSummary], with_cells: bool) -> Iterable[List[Any]]:
        cell = None
        seen = aggregated = 0
        for run in runs:
            key = (run.n_ring, run.setting)
            if key != cell:
                cell, seen, aggregated = key, 0, 0
            seen += 1
            aggregated += run.verdict == Verdict.AGGREGATED
            row = [
                run.run_index,
                run.seed,
                run.verdict.value,
                repr(float(run.t_end)),
                repr(float(run.final_min_pairwise_dist)),
                repr(aggregated / seen),
            ]
            if with_cells:
                row = ["" if run.n_ring is None else run.n_ring, run.setting or ""] + row
            yield row

    def write_summary(self, data: Dict[str, Any], name: str = "summary.json") -> Path:
        target = self._target(name)
        target.write_text(dump_json(data), encoding="utf-8")
        logger.info(f"Wrote summary to {target}")
        return target

    def write_result(self, result: ExperimentResult, label: str = "") -> Dict[str, Path]:
        """runs.csv plus summary.json for a single batch."""
        summary = {"label": label, **result_to_dict(result)}
        return {
            "runs": self.write_runs(result.runs),
            "summary": self.write_summary(summary),
        }


def read_runs_csv(path: PathLike) -> List[Dict[str, str]]:
    with Path(path).open(newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def write_trajectory_csv(outcome: RunOutcome, path: PathLike) -> Path:
    """t,robot,x,y,theta rows at the sampling cadence of the run."""
    if outcome.trajectory is None:
        raise ValueError("Run was not recorded with record_trajectory=True")
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(TRAJECTORY_COLUMNS)
        for sample in outcome.trajectory:
            for index, robot in enumerate(sample.state.robots):
                writer.writerow([repr(sample.t), index, repr(robot.x), repr(robot.y), repr(robot.theta)])
    logger.info(f"Wrote {len(outcome.trajectory)} trajectory samples to {target}")
    return target
