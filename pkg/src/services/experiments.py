"""
Monte Carlo experiments.

An ExperimentSpec names a scenario family and a number of seeded runs. Each
run is built and simulated independently, so runs may be spread over worker
processes; results are sorted by run index before they are summarized, which
keeps every output independent of the worker count.
"""

import logging
import math
from dataclasses import dataclass, replace
from statistics import mean, median
from typing import TYPE_CHECKING, Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from src.domain import (
    BimodalController,
    ExperimentResult,
    ExperimentSpec,
    MRState,
    RingHeading,
    RobotState,
    RunSummary,
    Scenario,
    SweepSetting,
    Verdict,
    WorldParams,
)
from .scenarios import (
    DEFAULT_SIDE,
    ScenarioError,
    gen_pair_tiling,
    gen_perturbed_ring,
    gen_ring_center,
    sample_uniform,
)
from .simulator import SimulationError, run

if TYPE_CHECKING:
    from src.worker import ExperimentWorkerPool

logger = logging.getLogger(__name__)


class ExperimentError(Exception):
    """Base exception for experiment errors."""
    pass


class UnknownFamilyError(ExperimentError):
    """Raised when an experiment names a scenario family that does not exist."""

    def __init__(self, family: str):
        self.family = family
        super().__init__(f"Unknown scenario family '{family}' (known: {', '.join(FAMILIES)})")


# ============================================
# SCENARIO FAMILIES
# ============================================

Params = Dict[str, Any]
FamilyBuilder = Callable[[Params, int, WorldParams, BimodalController], MRState]


def _uniform(
    params: Params, seed: int, world: WorldParams, controller: BimodalController
) -> MRState:
    side = float(params.get("side", DEFAULT_SIDE))
    return sample_uniform(int(params.get("n", 2)), side, seed, world)


def _perturbed_ring(
    params: Params, seed: int, world: WorldParams, controller: BimodalController
) -> MRState:
    return gen_perturbed_ring(
        int(params.get("n_ring", 8)), seed, world, scale=float(params.get("scale", 1.0))
    )


def _pair_tiling(
    params: Params, seed: int, world: WorldParams, controller: BimodalController
) -> MRState:
    # The pairs are laid out for the controller's own mode A circle.
    s_o = params.get("s_o")
    return gen_pair_tiling(
        int(params.get("n", 4)),
        float(params.get("R", 7.0)),
        None if s_o is None else float(s_o),
        seed,
        world,
        mode_a=controller.mode_a,
    )


def _ring_center(
    params: Params, seed: int, world: WorldParams, controller: BimodalController
) -> MRState:
    ring_radius = params.get("ring_radius")
    return gen_ring_center(
        int(params.get("n_ring", 8)),
        RingHeading(params.get("heading", RingHeading.RADIAL_OUT.value)),
        None if ring_radius is None else float(ring_radius),
        world,
    )


def _fixed(
    params: Params, seed: int, world: WorldParams, controller: BimodalController
) -> MRState:
    try:
        robots = [
            RobotState(float(r["x"]), float(r["y"]), float(r.get("theta", 0.0)))
            for r in params["robots"]
        ]
    except (KeyError, TypeError) as e:
        raise ExperimentError(f"'fixed' family needs params.robots as a list of poses: {e}") from e
    return MRState(robots, world)


FAMILIES: Dict[str, FamilyBuilder] = {
    "uniform": _uniform,
    "perturbed_ring": _perturbed_ring,
    "pair_tiling": _pair_tiling,
    "ring_center": _ring_center,
    "fixed": _fixed,
}


def build_initial_state(
    family: str,
    params: Dict[str, Any],
    seed: int,
    world: WorldParams,
    controller: BimodalController,
) -> MRState:
    builder = FAMILIES.get(family)
    if builder is None:
        raise UnknownFamilyError(family)
    return builder(params, seed, world, controller)


def build_scenario(
    spec: ExperimentSpec,
    run_index: int,
    n_ring: Optional[int] = None,
    setting: Optional[SweepSetting] = None,
) -> Scenario:
    """
    Scenario of one run. Its seed drives the placement and, when noise is on,
    the wheel offsets, which draw from their own stream of that seed.
    """
    seed = spec.seed_for(run_index)
    params = dict(spec.params)
    if n_ring is not None:
        params["n_ring"] = n_ring
    state = build_initial_state(spec.family, params, seed, spec.world, spec.controller)

    sim = spec.sim
    if setting is not None:
        sim = replace(
            sim,
            noise=setting.noise_config(seed),
            contact=replace(sim.contact, restitution=setting.restitution),
        )
    elif sim.noise.is_active:
        sim = replace(sim, noise=replace(sim.noise, seed=seed))

    return Scenario(
        initial=state,
        controller=spec.controller,
        sim=sim,
        label=f"{spec.label or spec.family}#{run_index}",
        seed=seed,
    )


def execute_run(
    spec: ExperimentSpec,
    run_index: int,
    n_ring: Optional[int] = None,
    setting: Optional[SweepSetting] = None,
) -> RunSummary:
    """Build and simulate one run; construction or simulation failures become ERROR rows."""
    seed = spec.seed_for(run_index)
    label = setting.label if setting is not None else None
    try:
        scenario = build_scenario(spec, run_index, n_ring, setting)
        outcome = run(scenario)
    except (ScenarioError, SimulationError, ValueError) as e:
        logger.warning(f"Run {run_index} (seed {seed}) failed: {e}")
        return RunSummary(
            run_index=run_index,
            seed=seed,
            verdict=Verdict.ERROR,
            t_end=0.0,
            final_min_pairwise_dist=math.nan,
            n_ring=n_ring,
            setting=label,
            error=str(e),
        )
    return RunSummary(
        run_index=run_index,
        seed=seed,
        verdict=outcome.verdict,
        t_end=outcome.t_end,
        final_min_pairwise_dist=outcome.final_state.min_pairwise_distance(),
        n_ring=n_ring,
        setting=label,
    )


# ============================================
# STATISTICS
# ============================================

def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        return 0.0, 1.0
    z = float(stats.norm.ppf(1.0 - (1.0 - confidence) / 2.0))
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def summarize(runs: Sequence[RunSummary], confidence: float = 0.95) -> ExperimentResult:
    """Batch statistics over run summaries (sorted by run index)."""
    ordered = tuple(sorted(runs, key=lambda r: r.run_index))
    num_runs = len(ordered)
    aggregated = [r for r in ordered if r.verdict == Verdict.AGGREGATED]
    errors = sum(1 for r in ordered if r.verdict == Verdict.ERROR)
    times = [r.t_end for r in aggregated]
    low, high = wilson_interval(len(aggregated), num_runs, confidence)
    return ExperimentResult(
        runs=ordered,
        num_runs=num_runs,
        num_aggregated=len(aggregated),
        num_errors=errors,
        aggregation_rate=len(aggregated) / num_runs if num_runs else 0.0,
        mean_t_end=mean(times) if times else None,
        median_t_end=median(times) if times else None,
        ci_low=low,
        ci_high=high,
    )


def _pool(spec: ExperimentSpec, pool: Optional["ExperimentWorkerPool"]) -> "ExperimentWorkerPool":
    if pool is not None:
        return pool
    from src.worker import ExperimentWorkerPool

    return ExperimentWorkerPool(spec.workers)


def run_experiment(
    spec: ExperimentSpec,
    pool: Optional["ExperimentWorkerPool"] = None,
) -> ExperimentResult:
    """Run spec.num_runs seeded runs and summarize them."""
    from src.worker import RunTask

    if spec.family not in FAMILIES:
        raise UnknownFamilyError(spec.family)
    logger.info(
        f"Running experiment '{spec.label or spec.family}': {spec.num_runs} runs, "
        f"base seed {spec.base_seed}"
    )
    tasks = [RunTask.create(spec, index, order=index) for index in range(spec.num_runs)]
    result = summarize(_pool(spec, pool).run(tasks))
    logger.info(
        f"Experiment '{spec.label or spec.family}' done: "
        f"{result.num_aggregated}/{result.num_runs} aggregated, {result.num_errors} errors"
    )
    return result


# ============================================
# RING SWEEP
# ============================================

SWEEP_NOISE = ((0.0, 0.0), (0.02, 0.01), (0.01, 0.02), (0.02, 0.02))
SWEEP_RESTITUTION = (0.0, 0.1, 0.5, 0.9)
SWEEP_RING_SIZES = tuple(range(6, 12))


def default_sweep_settings() -> Tuple[SweepSetting, ...]:
    """Every wheel-noise level crossed with every restitution coefficient."""
    return tuple(
        SweepSetting(left, right, e) for left, right in SWEEP_NOISE for e in SWEEP_RESTITUTION
    )


@dataclass(frozen=True)
class SweepTable:
    """Results of a ring sweep, one ExperimentResult per (n_ring, setting) cell."""
    n_rings: Tuple[int, ...]
    settings: Tuple[SweepSetting, ...]
    cells: Dict[Tuple[int, str], ExperimentResult]

    def cell(self, n_ring: int, setting: SweepSetting) -> ExperimentResult:
        return self.cells[(n_ring, setting.label)]

    def rate(self, n_ring: int, setting: SweepSetting) -> float:
        return self.cell(n_ring, setting).aggregation_rate

    def rates(self, setting: SweepSetting) -> List[float]:
        return [self.rate(n, setting) for n in self.n_rings]

    def all_runs(self) -> List[RunSummary]:
        """Every run, ordered by n_ring, then setting, then run index."""
        return [
            run_summary
            for n_ring in self.n_rings
            for setting in self.settings
            for run_summary in self.cell(n_ring, setting).runs
        ]

    def to_rows(self) -> List[Dict[str, Any]]:
        rows = []
        for n_ring in self.n_rings:
            for setting in self.settings:
                result = self.cell(n_ring, setting)
                rows.append({
                    "n_ring": n_ring,
                    "setting": setting.label,
                    "noise_left": setting.noise_left,
                    "noise_right": setting.noise_right,
                    "restitution": setting.restitution,
                    "num_runs": result.num_runs,
                    "num_aggregated": result.num_aggregated,
                    "num_errors": result.num_errors,
                    "aggregation_rate": result.aggregation_rate,
                    "ci_low": result.ci_low,
                    "ci_high": result.ci_high,
                })
        return rows


def run_ring_sweep(
    base: ExperimentSpec,
    n_rings: Optional[Sequence[int]] = None,
    pool: Optional["ExperimentWorkerPool"] = None,
) -> SweepTable:
    """
    Perturbed-ring runs for every ring size and every (noise, restitution)
    setting. Ring sizes default to base.params["n_rings"], then 6..11;
    settings come from base.sweep or default_sweep_settings().
    """
    from src.worker import RunTask

    if base.family != "perturbed_ring":
        raise ExperimentError(f"Ring sweeps need the 'perturbed_ring' family, got '{base.family}'")
    settings = base.sweep or default_sweep_settings()
    if n_rings is None:
        n_rings = base.params.get("n_rings", SWEEP_RING_SIZES)
    n_rings = tuple(int(n) for n in n_rings)

    tasks = []
    for n_ring in n_rings:
        for setting in settings:
            for index in range(base.num_runs):
                tasks.append(RunTask.create(base, index, n_ring=n_ring, setting=setting, order=len(tasks)))
    logger.info(
        f"Running ring sweep: {len(n_rings)} sizes x {len(settings)} settings x {base.num_runs} runs"
    )
    results = _pool(base, pool).run(tasks)

    grouped: Dict[Tuple[int, str], List[RunSummary]] = {}
    for summary in results:
        grouped.setdefault((summary.n_ring, summary.setting), []).append(summary)
    cells = {
        (n_ring, setting.label): summarize(grouped.get((n_ring, setting.label), []))
        for n_ring in n_rings
        for setting in settings
    }
    return SweepTable(n_rings=n_rings, settings=tuple(settings), cells=cells)


def rate_trend(table: SweepTable, setting: SweepSetting) -> float:
    """Spearman correlation of aggregation rate with ring size; nan when rates are constant."""
    rates = table.rates(setting)
    if len(set(rates)) < 2 or len(table.n_rings) < 2:
        return math.nan
    rho, _ = stats.spearmanr(table.n_rings, rates)
    return float(rho)


def restitution_means(table: SweepTable) -> Dict[float, float]:
    """Mean aggregation rate for each restitution coefficient over every other axis."""
    by_e: Dict[float, List[float]] = {}
    for setting in table.settings:
        by_e.setdefault(setting.restitution, []).extend(table.rates(setting))
    return {e: float(np.mean(rates)) for e, rates in sorted(by_e.items())}
