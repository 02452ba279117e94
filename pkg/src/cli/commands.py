"""
Subcommand handlers.

Each handler takes the parsed arguments and the Config and returns an exit
code. Machine-readable results go to stdout as JSON.
"""

import argparse
import json
import logging
import math
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict

from src.config import Config
from src.domain import BimodalController, SimConfig, WorldParams
from src.persistence import (
    ResultRepository,
    ScenarioRepository,
    outcome_to_dict,
    render_sweep_plot,
    render_trajectories_svg,
    report_to_dict,
    result_to_dict,
    write_trajectory_csv,
)
from src.services.aggregation import check
from src.services.experiments import rate_trend, restitution_means, run_experiment, run_ring_sweep
from src.services.generators import build_counterexample
from src.services.sensing import sense_all
from src.services.simulator import Simulator
from src.services.taxonomy import categorize
from src.worker import ExperimentWorkerPool

logger = logging.getLogger(__name__)


def _emit(data: Dict[str, Any]) -> None:
    print(json.dumps(data, indent=2))


def _nan_to_none(value: float):
    return None if value is None or math.isnan(value) else value


def _defaults(config: Config) -> SimConfig:
    return SimConfig.from_config(config)


# ============================================
# simulate
# ============================================

def cmd_simulate(args: argparse.Namespace, config: Config) -> int:
    repo = ScenarioRepository(_defaults(config))
    scenario = repo.load(args.scenario)

    sim = scenario.sim
    if args.time_budget is not None:
        sim = replace(sim, time_budget=args.time_budget)
    if args.trajectory or args.svg:
        sim = replace(sim, record_trajectory=True)
    if sim is not scenario.sim:
        scenario = replace(scenario, sim=sim)

    outcome = Simulator(scenario.sim, config).run(scenario)
    if args.trajectory:
        write_trajectory_csv(outcome, args.trajectory)
    if args.svg:
        render_trajectories_svg(outcome.trajectory, args.svg)

    _emit({"label": scenario.label, "seed": scenario.seed, **outcome_to_dict(outcome)})
    return 0


# ============================================
# experiment
# ============================================

def cmd_experiment(args: argparse.Namespace, config: Config) -> int:
    spec = ScenarioRepository(_defaults(config)).load_spec(args.spec)
    workers = args.workers or (spec.workers if spec.workers > 1 else config.WORKER_CONCURRENCY)
    pool = ExperimentWorkerPool(workers)
    out_dir = Path(args.out_dir or config.OUTPUT_DIR)
    results = ResultRepository(out_dir)
    label = spec.label or spec.family

    if args.sweep or spec.sweep:
        table = run_ring_sweep(spec, pool=pool)
        results.write_runs(table.all_runs())
        summary = {
            "label": label,
            "cells": table.to_rows(),
            "trend": {s.label: _nan_to_none(rate_trend(table, s)) for s in table.settings},
            "restitution_means": {f"{e:g}": rate for e, rate in restitution_means(table).items()},
        }
        results.write_summary(summary)
        if args.plot:
            render_sweep_plot(table, out_dir / "sweep.png")
        for row in table.to_rows():
            print(
                f"n_ring={row['n_ring']:<3d} {row['setting']:<24s} "
                f"rate={row['aggregation_rate']:.3f} "
                f"[{row['ci_low']:.3f}, {row['ci_high']:.3f}]"
            )
        return 0

    result = run_experiment(spec, pool)
    results.write_result(result, label)
    _emit({"label": label, **result_to_dict(result)})
    return 0


# ============================================
# counterexample / classify / check
# ============================================

def _controller(values) -> BimodalController:
    return BimodalController.from_sequence(values)


def cmd_counterexample(args: argparse.Namespace, config: Config) -> int:
    controller = _controller(args.controller)
    found = build_counterexample(controller, WorldParams(), n=args.n, sim=_defaults(config))
    out = args.out or str(Path(config.OUTPUT_DIR) / f"counterexample_{found.category.label}.json")
    ScenarioRepository().save(found.scenario, out)
    _emit({
        "category": found.category.label,
        "generator": found.family,
        "n": found.scenario.initial.n,
        "out": out,
    })
    return 0


def cmd_classify(args: argparse.Namespace, config: Config) -> int:
    print(categorize(_controller(args.controller)).label)
    return 0


def cmd_check(args: argparse.Namespace, config: Config) -> int:
    scenario = ScenarioRepository(_defaults(config)).load(args.scenario)
    readings = sense_all(scenario.initial)
    _emit({
        "label": scenario.label,
        "n": scenario.initial.n,
        "category": categorize(scenario.controller).label,
        "min_pairwise_dist": _nan_to_none(
            scenario.initial.min_pairwise_distance() if scenario.initial.n > 1 else math.nan
        ),
        "readings": [int(r.value) for r in readings],
        **report_to_dict(check(scenario.initial)),
    })
    return 0


def register_commands(subparsers) -> None:
    simulate = subparsers.add_parser("simulate", help="Run one scenario file")
    simulate.add_argument("scenario", help="Scenario JSON file")
    simulate.add_argument("--trajectory", metavar="CSV", help="Write sampled poses")
    simulate.add_argument("--svg", metavar="SVG", help="Render trajectories")
    simulate.add_argument("--time-budget", type=float, help="Override the simulated time budget (s)")
    simulate.set_defaults(handler=cmd_simulate)

    experiment = subparsers.add_parser("experiment", help="Run a Monte Carlo experiment spec")
    experiment.add_argument("spec", help="Experiment spec JSON file")
    experiment.add_argument("--workers", type=int, help="Worker processes")
    experiment.add_argument("--out-dir", help="Directory for runs.csv and summary.json")
    experiment.add_argument("--sweep", action="store_true", help="Run the ring sweep")
    experiment.add_argument("--plot", action="store_true", help="Write sweep.png (sweeps only)")
    experiment.set_defaults(handler=cmd_experiment)

    counterexample = subparsers.add_parser(
        "counterexample", help="Write a non-aggregating scenario for a controller"
    )
    counterexample.add_argument("controller", type=float, nargs=4, metavar="V")
    counterexample.add_argument("--n", type=int, help="Requested number of robots")
    counterexample.add_argument("--out", help="Scenario file to write")
    counterexample.set_defaults(handler=cmd_counterexample)

    classify = subparsers.add_parser("classify", help="Print the category of a controller")
    classify.add_argument("controller", type=float, nargs=4, metavar="V")
    classify.set_defaults(handler=cmd_classify)

    check_cmd = subparsers.add_parser("check", help="Aggregation report of a scenario file")
    check_cmd.add_argument("scenario", help="Scenario JSON file")
    check_cmd.set_defaults(handler=cmd_check)
