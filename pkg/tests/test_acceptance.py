"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -s` to see the report lines as
they complete (the generator-contract and determinism runs take minutes).
"""

import os
import time

import numpy as np
import pytest

from boxarena import geometry as geo
from boxarena.engine import (
    SimParams,
    SimState,
    StaticSimParams,
    add_circle,
    add_polygon,
    make_arena_state,
    static_for_class,
    step,
)
from boxarena.env import Action, EnvParams, env_step, reset
from boxarena.harness import audit_level, bench, learnability, rollout, NoopPolicy
from boxarena.levelgen import GenerationFailed, generate, noop_filter, validation_errors
from boxarena.render import render_pixels

from conftest import convex_overlap_area, random_convex_quad, sat_depth

SIZES = ("S", "M", "L")


def report(name: str, passed: bool, detail: str = ""):
    line = f"ACCEPTANCE {name}: {'PASS' if passed else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    print(line, flush=True)
    assert passed, line


class TestDeterminismAudit:
    def test_bit_identical_rollouts(self):
        """100 levels per size, 1000-engine-step seeded random rollouts,
        hashes bit-identical over 10 serial repeats and a thread pool."""
        t0 = time.time()
        failures = 0
        total = 0
        for size in SIZES:
            params = EnvParams(size_class=size, horizon=500)  # 500 env steps = 1000 engine steps
            for seed in range(100):
                level = generate(seed, size)
                result = audit_level(level, steps=500, repeats=10, policy_seed=seed, params=params)
                total += 1
                failures += not result.passed
        elapsed = time.time() - t0
        report(
            "determinism-audit",
            failures == 0 and elapsed < 120,
            f"{total} levels, {failures} hash mismatches, {elapsed:.0f}s",
        )


class TestElasticExchange:
    @staticmethod
    def collide(e):
        static = StaticSimParams(0, 2, 1, 1)
        state = SimState.zeros(static)
        add_circle(state, static, 0.5, (0.0, 0.0), density=4 / np.pi, velocity=(1, 0),
                   restitution=e, friction=0.0)
        add_circle(state, static, 0.5, (0.99, 0.0), density=4 / np.pi, velocity=(-1, 0),
                   restitution=e, friction=0.0)
        params = SimParams(gravity=(0.0, 0.0), velocity_bias_alpha=0.0)
        return step(state, None, None, params, static)

    def test_exchange_and_rest(self):
        out = self.collide(1.0)
        # oracle: 1D elastic equal masses swap velocities
        err_elastic = max(
            abs(float(out.velocity[0, 0]) + 1.0),
            abs(float(out.velocity[1, 0]) - 1.0),
            abs(float(out.velocity[0, 1])),
            abs(float(out.velocity[1, 1])),
        )
        out0 = self.collide(0.0)
        err_rest = float(np.abs(out0.velocity).max())
        report(
            "elastic-exchange",
            err_elastic < 1e-4 and err_rest < 1e-4,
            f"e=1 err {err_elastic:.2e}, e=0 err {err_rest:.2e}",
        )


def random_free_scene(rng, static):
    """Random non-fixated bodies scattered without meaningful overlap."""
    state = SimState.zeros(static)
    for i in range(4, static.num_polygons):
        for _ in range(20):
            try:
                body = add_polygon(
                    state, static,
                    geo.rect_vertices(rng.uniform(0.12, 0.4), rng.uniform(0.12, 0.4)),
                    rng.uniform(0.5, 7.5, 2), rotation=rng.uniform(0, 6.28),
                    velocity=rng.uniform(-2, 2, 2), angular_velocity=rng.uniform(-2, 2),
                    density=rng.uniform(0.5, 2), friction=rng.uniform(0, 1),
                    restitution=rng.uniform(0, 0.8), slot=i,
                )
            except Exception:
                continue
            from boxarena.engine.step import refresh_manifolds

            probe = state.copy()
            refresh_manifolds(probe, static)
            if not probe.mani_active.any():
                break
            state.body_active[body] = False
    for i in range(static.num_polygons, static.num_bodies):
        for _ in range(20):
            body = add_circle(
                state, static, rng.uniform(0.1, 0.35), rng.uniform(0.5, 7.5, 2),
                velocity=rng.uniform(-2, 2, 2), density=rng.uniform(0.5, 2),
                friction=rng.uniform(0, 1), restitution=rng.uniform(0, 0.8), slot=i,
            )
            from boxarena.engine.step import refresh_manifolds

            probe = state.copy()
            refresh_manifolds(probe, static)
            if not probe.mani_active.any():
                break
            state.body_active[body] = False
    return state


class TestMomentum:
    def test_conservation_over_200_scenes(self):
        static = static_for_class("M")
        params = SimParams(gravity=(0.0, 0.0))
        rng = np.random.default_rng(2024)
        worst = 0.0
        for _ in range(200):
            state = random_free_scene(rng, static)
            mass = np.where(state.body_active & (state.inverse_mass > 0),
                            1.0 / np.where(state.inverse_mass > 0, state.inverse_mass, 1.0), 0.0)
            p0 = (mass[:, None] * state.velocity.astype(np.float64)).sum(axis=0)
            scale = (mass * np.linalg.norm(state.velocity.astype(np.float64), axis=1)).sum()
            for _ in range(100):
                state = step(state, None, None, params, static)
            p1 = (mass[:, None] * state.velocity.astype(np.float64)).sum(axis=0)
            rel = np.linalg.norm(p1 - p0) / max(scale, 1e-9)
            worst = max(worst, rel)
        report("momentum-conservation", worst < 1e-3, f"worst relative drift {worst:.2e}")


class TestStacking:
    @staticmethod
    def run(params, steps=1000):
        static = static_for_class("M")
        state = make_arena_state(static)
        for k in range(4):
            add_polygon(state, static, geo.rect_vertices(0.5, 0.5), (2.5, 0.5 + k),
                        friction=0.8, restitution=0.0)
        top = 7
        x0 = float(state.position[top, 0])
        max_pen = 0.0
        for _ in range(steps):
            state = step(state, None, None, params, static)
            if state.mani_active.any():
                max_pen = max(max_pen, float(state.mani_penetration[state.mani_active].max()))
        return max_pen, abs(float(state.position[top, 0]) - x0)

    def test_stack_stability_and_warm_start_benefit(self):
        pen_warm, drift = self.run(SimParams())
        pen_cold, _ = self.run(SimParams(warm_starting=False, num_solver_steps=2))
        ok = pen_warm < 0.01 and drift < 0.05 and pen_cold > pen_warm
        report(
            "stacking-stability",
            ok,
            f"pen {pen_warm:.4f} (<1% of 1.0), drift {drift:.4f} (<5%), cold pen {pen_cold:.4f}",
        )


class TestSatOracle:
    def test_matches_exact_intersection(self):
        from boxarena.engine import manifold_polygon_polygon
        from conftest import polygon_body

        rng = np.random.default_rng(7)
        mismatches = 0
        checked = 0
        while checked < 10_000:
            qa = random_convex_quad(rng)
            qb = random_convex_quad(rng) + rng.uniform(-1.8, 1.8, 2)
            if abs(sat_depth(qa, qb)) < 1e-4:
                continue  # grazing band excluded
            a = polygon_body(qa, geo.vertex_centroid(qa))
            b = polygon_body(qb, geo.vertex_centroid(qb))
            m1, m2 = manifold_polygon_polygon(a, b)
            overlap = convex_overlap_area(qa, qb) > 0.0
            mismatches += (m1.active or m2.active) != overlap
            checked += 1
        report("sat-oracle", mismatches == 0, f"{checked} pairs, {mismatches} mismatches")


class TestGeneratorContract:
    def test_ten_thousand_levels_per_size(self):
        t0 = time.time()
        stats = []
        for size in SIZES:
            static = static_for_class(size)
            params = EnvParams(size_class=size)
            invalid = solved = failed = over_capacity = 0
            produced = 0
            seed = 0
            while produced < 10_000:
                try:
                    level = generate(seed, size, env_params=params)
                except GenerationFailed:
                    failed += 1
                    seed += 1
                    continue
                seed += 1
                produced += 1
                if validation_errors(level):
                    invalid += 1
                if noop_filter(level, params).solved:
                    solved += 1
                state = level.initial_state
                if (
                    state.body_active[: static.num_polygons].sum() > static.num_polygons
                    or state.body_active[static.num_polygons :].sum() > static.num_circles
                    or state.joint_active.sum() > static.num_joints
                    or state.thruster_active.sum() > static.num_thrusters
                ):
                    over_capacity += 1
            stats.append((size, invalid, solved, over_capacity, failed, seed))
        elapsed = time.time() - t0
        ok = all(i == 0 and s == 0 and o == 0 and f < 0.01 * total
                 for _, i, s, o, f, total in stats) and elapsed < 600
        detail = "; ".join(
            f"{sz}: invalid {i}, noop-solved {s}, over-cap {o}, failed seeds {f}/{t}"
            for sz, i, s, o, f, t in stats
        )
        report("generator-contract", ok, f"{detail}; {elapsed:.0f}s")


class TestDenseTelescoping:
    def test_sum_equals_kappa_d0_minus_dT(self):
        params = EnvParams(size_class="M", horizon=64)
        count = 0
        worst = 0.0
        seed = 0
        while count < 100:
            level = generate(seed, "M")
            seed += 1
            state = reset(level, params)
            d0 = state.last_distance
            total = 0.0
            done = False
            sparse_fired = False
            while not done:
                state, _, reward, done = env_step(state, Action.noop(params.static), params)
                total += reward
                if abs(reward) > 0.5:
                    sparse_fired = True
            if sparse_fired or state.timestep < params.horizon:
                continue  # only non-terminating episodes count
            expected = params.dense_reward_kappa * (d0 - state.last_distance)
            worst = max(worst, abs(total - expected))
            count += 1
        report("dense-telescoping", worst < 1e-4, f"{count} rollouts, worst error {worst:.2e}")


class TestPixelShape:
    def test_125_125_3(self):
        level = generate(0, "M")
        params = EnvParams(size_class="M", observation_mode="pixels")
        img = render_pixels(reset(level, params), params)
        report(
            "pixel-observation",
            img.shape == (125, 125, 3) and img.dtype == np.uint8,
            f"shape {img.shape}",
        )


class TestThroughput:
    def test_scaling_shape_and_mode_ordering(self):
        cores = os.cpu_count() or 1
        counts = sorted({1, 2, min(4, max(2, cores)), cores})
        engine_rows = bench("M", counts, secs=1.5, mode="engine", seed=3)
        env_rows = bench("M", [1], secs=1.0, mode="env", observation_mode="pixels", seed=3)

        within_parallelism = [r for r in engine_rows if r.instances <= cores]
        non_decreasing = all(
            b.sps >= 0.9 * a.sps
            for a, b in zip(within_parallelism, within_parallelism[1:])
        )
        ordering = engine_rows[0].sps > env_rows[0].sps
        sps_line = ", ".join(f"{r.instances}:{r.sps:.0f}" for r in engine_rows)
        # the aggregate-SPS desk target is hardware-bound; reported, not asserted
        print(
            f"ACCEPTANCE-INFO throughput: engine sps {{{sps_line}}}, "
            f"env+pixels sps {env_rows[0].sps:.0f}, cores {cores}, "
            f"soft target 500K/8-core: measured best {max(r.sps for r in engine_rows):.0f}",
            flush=True,
        )
        report(
            "throughput-shape",
            non_decreasing and ordering,
            f"non-decreasing to {cores} core(s): {non_decreasing}, engine > env+pixels: {ordering}",
        )


class TestLearnability:
    def test_exact_values(self):
        ok = (
            learnability(0, 10) == 0.0
            and learnability(10, 10) == 0.0
            and learnability(5, 10) == 0.25
        )
        report("learnability", ok, "p in {0, 1} -> 0; p = 0.5 -> 0.25")
