"""
Unit tests for the swarm simulator.
"""

import math
from dataclasses import replace

import numpy as np
import pytest

from src.domain import (
    BimodalController,
    ContactConfig,
    ContactSet,
    MRState,
    NoiseConfig,
    PairFacing,
    RobotState,
    Scenario,
    SightingCase,
    SightingTracker,
    SimConfig,
    Verdict,
    WheelCommand,
)
from src.services.kinematics import orbit_period
from src.services.scenarios import (
    gen_deadlock_pairs,
    gen_perturbed_ring,
    gen_shared_orbit,
    sample_uniform,
)
from src.services.simulator import (
    NOISE_STREAM,
    Simulator,
    StepDivergedError,
    _StepInfo,
    draw_noise_offsets,
    relative_coordinates,
    run,
    simulate_unblocked,
    step,
    u_star_time_bound,
    wrap_angles,
)


class TestHelpers:
    """Tests for simulator helpers."""

    def test_wrap_angles_matches_scalar_rule(self):
        """Test the vectorised wrap."""
        theta = np.array([0.5, math.pi, -math.pi, 7.0, -7.0])
        wrapped = wrap_angles(theta)
        assert wrapped[0] == 0.5
        assert wrapped[1] == pytest.approx(-math.pi)
        assert wrapped[2] == -math.pi
        assert np.all((wrapped >= -math.pi) & (wrapped < math.pi))

    def test_noise_offsets_are_seeded(self):
        """Test that the same seed draws the same offsets."""
        noise = NoiseConfig.static(0.02, 0.01, seed=11)
        first = draw_noise_offsets(noise, 5)
        assert first.shape == (5, 2)
        assert np.array_equal(first, draw_noise_offsets(noise, 5))
        assert np.all(np.abs(first[:, 0]) <= 0.02)
        assert np.all(np.abs(first[:, 1]) <= 0.01)

    def test_noise_stream_is_independent_of_placement(self):
        """Test that noise offsets are not a rescaling of the seed's plain uniform draws."""
        noise = NoiseConfig.static(0.02, 0.02, seed=5)
        offsets = draw_noise_offsets(noise, 9)
        plain = np.random.default_rng(5).uniform(-1.0, 1.0, 9)
        assert not np.allclose(offsets[:, 0] / 0.02, plain)
        keyed = np.random.default_rng([5, NOISE_STREAM]).uniform(-0.02, 0.02, 9)
        assert np.array_equal(offsets[:, 0], keyed)

    def test_relative_coordinates_ignore_rigid_motion(self):
        """Test that moving and turning the whole swarm leaves the frame of robot 0 unchanged."""
        rng = np.random.default_rng(3)
        positions = rng.uniform(-20.0, 20.0, size=(4, 2))
        theta = rng.uniform(-math.pi, math.pi, size=4)
        turn = 1.1
        c, s = math.cos(turn), math.sin(turn)
        moved = positions @ np.array([[c, s], [-s, c]]) + np.array([5.0, -8.0])
        before = relative_coordinates(positions, theta)
        after = relative_coordinates(moved, wrap_angles(theta + turn))
        assert np.allclose(before, after, atol=1e-9)

    def test_inactive_noise_is_zero(self):
        """Test that NONE mode draws nothing."""
        assert not draw_noise_offsets(NoiseConfig(), 3).any()

    def test_time_bound(self, u_star, world):
        """Test the two-robot time bound for u*."""
        spin = 2.0 * math.pi * world.inter_wheel / (2.0 * world.v_max * 0.5)
        expected = 3.0 * spin + 40.0 / (math.sqrt(3.0) * world.v_max)
        assert u_star_time_bound(u_star, 40.0, world) == pytest.approx(expected)

    def test_time_bound_rejects_other_forms(self, u_prev, world):
        """Test that the bound only applies to spin-then-charge controllers."""
        with pytest.raises(ValueError, match="not of the form"):
            u_star_time_bound(u_prev, 40.0, world)

    def test_simulate_unblocked(self, world):
        """Test the free-motion helper."""
        pose = simulate_unblocked(RobotState(0.0, 0.0, 0.0), WheelCommand(1.0, 1.0), 2.0, world)
        assert pose.x == pytest.approx(25.6)
        assert pose.y == pytest.approx(0.0)


class TestStep:
    """Tests for a single simulator step."""

    def test_facing_pair_moves_together(self, facing_pair, u_star):
        """Test that both robots drive forward when they see each other."""
        after = step(facing_pair, u_star, SimConfig(dt=0.01))
        assert after[0].x == pytest.approx(0.128)
        assert after[1].x == pytest.approx(40.0 - 0.128)
        assert after[0].theta == 0.0

    def test_blind_robots_spin(self, world, u_star):
        """Test that robots seeing nothing rotate on the spot."""
        state = MRState((RobotState(0, 0, math.pi / 2), RobotState(20, 0, math.pi / 2)), world)
        after = step(state, u_star, SimConfig(dt=0.01))
        assert after[0].x == pytest.approx(0.0)
        assert after[0].theta > math.pi / 2

    def test_noise_offsets_applied(self, facing_pair, u_star):
        """Test explicit per-robot wheel offsets."""
        offsets = np.array([[-0.5, -0.5], [0.0, 0.0]])
        after = step(facing_pair, u_star, SimConfig(dt=0.01), noise_offsets=offsets)
        assert after[0].x == pytest.approx(0.064)


class TestRun:
    """Tests for full runs and their verdicts."""

    def test_facing_pair_aggregates(self, facing_scenario, u_star, world):
        """Test that u* brings a facing pair together within its bound."""
        outcome = run(facing_scenario)
        assert outcome.verdict == Verdict.AGGREGATED
        assert 0.0 < outcome.t_end < u_star_time_bound(u_star, 40.0, world)
        assert outcome.final_state.min_pairwise_distance() <= world.aggregation_distance + 1e-6

    def test_aggregated_at_start(self, world, u_star, short_sim):
        """Test that an aggregated start ends at t = 0."""
        state = MRState((RobotState(0, 0), RobotState(7.5, 0)), world)
        outcome = run(Scenario(initial=state, controller=u_star, sim=short_sim))
        assert outcome.verdict == Verdict.AGGREGATED
        assert outcome.t_end == 0.0
        assert outcome.steps == 0

    def test_back_to_back_pairs_are_stationary(self, world, u_prev, short_sim):
        """Test that two backward-pushing pairs wedge and stop."""
        state = gen_deadlock_pairs(2, PairFacing.AWAY, world=world)
        outcome = run(Scenario(initial=state, controller=u_prev, sim=short_sim))
        assert outcome.verdict == Verdict.STATIONARY
        assert outcome.t_end == pytest.approx(short_sim.stationarity_window)
        assert outcome.final_state.positions() == pytest.approx(state.positions())

    def test_shared_orbit_is_periodic(self, world, u_prev, short_sim):
        """Test that two robots on one circle are detected as periodic."""
        state = gen_shared_orbit(u_prev.mode_a, world)
        outcome = run(Scenario(initial=state, controller=u_prev, sim=short_sim))
        assert outcome.verdict == Verdict.PERIODIC
        period = orbit_period(u_prev.mode_a, world)
        assert outcome.t_end <= period + 2 * short_sim.dt
        assert outcome.final_state.min_pairwise_distance() == pytest.approx(
            state.min_pairwise_distance(), rel=1e-6
        )

    def test_timeout_without_cycle_detection(self, world, u_prev):
        """Test that the budget ends a run that never settles."""
        state = gen_shared_orbit(u_prev.mode_a, world)
        sim = SimConfig(time_budget=3.0, cycle_detection=False)
        outcome = run(Scenario(initial=state, controller=u_prev, sim=sim))
        assert outcome.verdict == Verdict.TIMEOUT
        assert outcome.steps == 300
        assert outcome.t_end == pytest.approx(3.0)

    def test_standing_still_is_stationary(self, world, short_sim):
        """Test a controller that never moves."""
        state = MRState((RobotState(0, 0), RobotState(30, 0)), world)
        still = BimodalController(0.0, 0.0, 0.0, 0.0)
        outcome = run(Scenario(initial=state, controller=still, sim=short_sim))
        assert outcome.verdict == Verdict.STATIONARY

    def test_trajectory_recording(self, facing_scenario):
        """Test sampled trajectories."""
        sim = replace(facing_scenario.sim, record_trajectory=True, trajectory_interval=0.1)
        outcome = run(replace(facing_scenario, sim=sim))
        times = [s.t for s in outcome.trajectory]
        assert times[0] == 0.0
        assert times[-1] == pytest.approx(outcome.t_end)
        assert all(b > a for a, b in zip(times, times[1:]))

    def test_runs_are_deterministic(self, world, u_prev):
        """Test that the same seeds reproduce a run exactly."""
        state = sample_uniform(4, side=50.0, seed=5, world=world)
        sim = SimConfig(time_budget=15.0, noise=NoiseConfig.static(0.05, 0.05, seed=8))
        scenario = Scenario(initial=state, controller=u_prev, sim=sim)
        first, second = run(scenario), run(scenario)
        assert first.verdict == second.verdict
        assert first.steps == second.steps
        assert np.array_equal(first.final_state.positions(), second.final_state.positions())

    def test_bodies_never_overlap(self, world, u_prev):
        """Test that contacts keep every pair apart during a crowded run."""
        state = sample_uniform(6, side=45.0, seed=2, world=world)
        sim = SimConfig(time_budget=20.0)
        closest = []

        def observer(t, current, readings):
            closest.append(current.min_pairwise_distance())

        Simulator(sim).run(Scenario(initial=state, controller=u_prev, sim=sim), observer)
        assert closest
        assert min(closest) >= world.contact_distance - 1e-6

    @pytest.mark.parametrize("build, controller, expected", [
        (lambda w: MRState((RobotState(0, 0, 0.0), RobotState(40, 0, math.pi)), w),
         BimodalController.u_star(), Verdict.AGGREGATED),
        (lambda w: gen_deadlock_pairs(2, PairFacing.AWAY, world=w),
         BimodalController.u_prev(), Verdict.STATIONARY),
        (lambda w: gen_shared_orbit(BimodalController.u_prev().mode_a, w),
         BimodalController.u_prev(), Verdict.PERIODIC),
    ])
    def test_halving_dt_keeps_verdict(self, world, short_sim, build, controller, expected):
        """Test that the verdict does not depend on the step size."""
        state = build(world)
        for dt in (0.01, 0.005):
            sim = replace(short_sim, dt=dt)
            outcome = run(Scenario(initial=state, controller=controller, sim=sim))
            assert outcome.verdict == expected

    @pytest.mark.slow
    def test_halving_dt_on_random_pairs(self, world, u_star):
        """Test that random spin-then-charge pairs aggregate at both step sizes."""
        for seed in range(10):
            state = sample_uniform(2, side=60.0, seed=seed, world=world)
            for dt in (0.01, 0.005):
                sim = SimConfig(dt=dt, time_budget=100.0)
                outcome = run(Scenario(initial=state, controller=u_star, sim=sim))
                assert outcome.verdict == Verdict.AGGREGATED

    def test_observer_sees_each_step(self, facing_scenario):
        """Test the observer call pattern."""
        calls = []
        outcome = run(facing_scenario, lambda t, s, readings: calls.append((t, readings)))
        assert len(calls) == outcome.steps
        assert calls[0] == (0.0, (True, True))


class TestTwoRobotCases:
    """Tests for the case progression of a spin-then-charge pair."""

    def test_one_sees_then_both(self, world, u_star, short_sim):
        """Test that the pair moves forward through the cases and closes in."""
        state = MRState(
            (RobotState(0.0, 0.0, 0.0), RobotState(40.0, 0.0, math.pi / 2)), world
        )
        tracker = SightingTracker()
        gaps = []

        def observer(t, current, readings):
            tracker.observe(t, *readings)
            if all(readings):
                gaps.append(current.min_pairwise_distance())

        outcome = Simulator(short_sim).run(
            Scenario(initial=state, controller=u_star, sim=short_sim), observer
        )
        assert outcome.verdict == Verdict.AGGREGATED
        assert tracker.visited == [SightingCase.ONE_SEES, SightingCase.BOTH_SEE]
        assert gaps
        assert all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))

    @pytest.mark.slow
    def test_random_pairs_never_step_back(self, world, u_star):
        """Test 300 random pairs: cases only move forward, the gap only shrinks while both see."""
        sim = SimConfig(time_budget=100.0, stationarity_window=1.0)
        for seed in range(300):
            state = sample_uniform(2, side=80.0, seed=seed, world=world)
            tracker = SightingTracker()
            gaps = []

            def observer(t, current, readings):
                tracker.observe(t, *readings)
                if all(readings):
                    gaps.append(current.min_pairwise_distance())

            outcome = Simulator(sim).run(
                Scenario(initial=state, controller=u_star, sim=sim), observer
            )
            assert outcome.verdict == Verdict.AGGREGATED
            assert len(tracker.visited) == len(set(tracker.visited))
            assert all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))


class TestCycleDetection:
    """Tests for repeats detected in the frame of robot 0."""

    def test_parallel_drivers_are_periodic(self, world, short_sim):
        """Test that two robots driving side by side forever end as periodic."""
        state = MRState((RobotState(0.0, 0.0, 0.0), RobotState(0.0, 20.0, 0.0)), world)
        forward = BimodalController(1.0, 1.0, 1.0, 1.0)
        outcome = run(Scenario(initial=state, controller=forward, sim=short_sim))
        assert outcome.verdict == Verdict.PERIODIC
        assert outcome.t_end < 5.0
        assert outcome.final_state[0].x > 0.0

    def test_drift_without_detection_times_out(self, world):
        """Test that the same pair runs to the budget with detection off."""
        state = MRState((RobotState(0.0, 0.0, 0.0), RobotState(0.0, 20.0, 0.0)), world)
        forward = BimodalController(1.0, 1.0, 1.0, 1.0)
        sim = SimConfig(time_budget=2.0, cycle_detection=False)
        assert run(Scenario(initial=state, controller=forward, sim=sim)).verdict == Verdict.TIMEOUT


class TestContactSubstepping:
    """Tests for contacts that appear inside a step."""

    @pytest.mark.parametrize("e", [0.5, 1.0])
    def test_head_on_bounce(self, world, e):
        """Test a mid-step collision: approach, bounce with -e times the normal speed."""
        state = MRState((RobotState(0.0, 0.0, 0.0), RobotState(7.45, 0.0, math.pi)), world)
        forward = BimodalController(1.0, 1.0, 1.0, 1.0)
        sim = SimConfig(dt=0.01, contact=ContactConfig(restitution=e))
        after = Simulator(sim).step(state, forward)

        impact = 0.05 / 25.6
        x0 = 12.8 * impact - e * 12.8 * (0.01 - impact)
        assert after[0].x == pytest.approx(x0, abs=1e-9)
        assert after[0].x + after[1].x == pytest.approx(7.45, abs=1e-9)
        assert after.min_pairwise_distance() >= world.contact_distance - 1e-9

    def test_chain_bounce_conserves_momentum(self, world):
        """Test that a bounce into a close third robot is settled within the same step."""
        state = MRState(
            (
                RobotState(0.0, 0.0, math.pi / 2),
                RobotState(7.42, 0.0, math.pi),
                RobotState(14.85, 0.0, math.pi),
            ),
            world,
        )
        chase = BimodalController(0.0, 0.0, 1.0, 1.0)
        sim = SimConfig(dt=0.01, contact=ContactConfig(restitution=0.5))
        after = Simulator(sim).step(state, chase)

        shift = sum(after[i].x - state[i].x for i in range(3))
        assert shift == pytest.approx(-2.0 * 12.8 * 0.01, abs=1e-9)
        assert after.min_pairwise_distance() >= world.contact_distance - 1e-6
        assert [after[i].y for i in range(3)] == pytest.approx([0.0, 0.0, 0.0])

    def test_plastic_stop_sits_at_contact(self, world):
        """Test that a blocked pair stops at 2r and stalls."""
        state = MRState((RobotState(0.0, 0.0, 0.0), RobotState(7.45, 0.0, math.pi)), world)
        forward = BimodalController(1.0, 1.0, 1.0, 1.0)
        after = Simulator(SimConfig(dt=0.01)).step(state, forward)
        assert after.min_pairwise_distance() == pytest.approx(world.contact_distance, abs=1e-9)
        assert after[0].x == pytest.approx(0.025, abs=1e-9)


@pytest.mark.slow
class TestElasticRings:
    """Tests for partly elastic contacts inside a loosened ring."""

    @pytest.mark.parametrize("e", [0.1, 0.5, 0.9])
    def test_runs_finish_without_divergence(self, world, u_prev_revised, e):
        """Test that bouncing robots never leave a run undecided or overlapping."""
        sim = SimConfig(time_budget=10.0, contact=ContactConfig(restitution=e))
        for seed in range(3):
            closest = []
            state = gen_perturbed_ring(8, seed=seed, world=world)
            outcome = Simulator(sim).run(
                Scenario(initial=state, controller=u_prev_revised, sim=sim, seed=seed),
                lambda t, current, readings: closest.append(current.min_pairwise_distance()),
            )
            assert outcome.verdict != Verdict.ERROR
            assert min(closest) >= world.contact_distance - 1e-6


class TestDivergence:
    """Tests for the consecutive event cap."""

    def test_error_carries_simulated_time(self, mocker, facing_pair, u_star):
        """Test that the second capped step reports the time it started at."""
        capped = _StepInfo(events=8, capped=True, contacts=ContactSet(), motion=None)
        mocker.patch.object(
            Simulator,
            "_advance",
            side_effect=lambda positions, theta, *args: (positions, theta, capped),
        )
        simulator = Simulator(SimConfig(dt=0.01))
        state = simulator.step(facing_pair, u_star)
        assert simulator.t == pytest.approx(0.01)

        with pytest.raises(StepDivergedError, match="t=0.0100") as exc_info:
            simulator.step(state, u_star)
        assert exc_info.value.t == pytest.approx(0.01)
        assert exc_info.value.events == 8
