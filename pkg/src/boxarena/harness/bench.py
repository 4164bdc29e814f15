"""Throughput benchmarks: aggregate engine steps per second over batches of
independent scenes, engine-only or through the full environment step with
observations."""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..engine.state import F32
from ..engine.step import SceneStepper, SimulationDiverged
from ..env import Action, Episode, EnvParams, observe, reset
from ..levelgen import generate

CHUNK_STEPS = 240


@dataclass
class BenchRow:
    size_class: str
    mode: str
    instances: int
    seconds: float
    steps_per_instance: int
    total_steps: int
    sps: float


class _EngineInstance:
    def __init__(self, level, params, rng):
        self.level = level
        self.params = params
        self._fresh()
        self.motors = rng.uniform(-1, 1, level.static_params.num_joints).astype(F32)
        self.thrusters = rng.uniform(0, 1, level.static_params.num_thrusters).astype(F32)

    def _fresh(self):
        self.state = self.level.initial_state.copy()
        self.stepper = SceneStepper(self.state, self.params.sim, self.level.static_params)

    def run(self, n):
        self.stepper.motor_actions[:] = self.motors
        self.stepper.thruster_actions[:] = self.thrusters
        try:
            self.stepper.run(n)
        except SimulationDiverged:
            self._fresh()
        return n


class _EnvInstance:
    def __init__(self, level, params, rng):
        self.level = level
        self.params = params
        self.action = Action(
            rng.integers(-1, 2, level.static_params.num_joints).astype(F32),
            rng.integers(0, 2, level.static_params.num_thrusters).astype(F32),
        )
        self._fresh()

    def _fresh(self):
        self.episode = Episode(reset(self.level, self.params).sim, self.params)

    def run(self, n_engine_steps):
        env_steps = max(1, n_engine_steps // self.params.frame_skip)
        for _ in range(env_steps):
            try:
                _, done = self.episode.advance(self.action.motor_values, self.action.thruster_values)
            except SimulationDiverged:
                done = True
            observe(self.episode.env_state(), self.params)
            if done:
                self._fresh()
        return env_steps * self.params.frame_skip


def bench(
    size_class: str,
    instance_counts: list[int],
    secs: float = 5.0,
    mode: str = "engine",
    observation_mode: str = "pixels",
    seed: int = 0,
    workers: int | None = None,
) -> list[BenchRow]:
    """Measure aggregate steps/second for each instance count.

    Every instance advances the same number of steps per round, so the
    reported total is exactly instances * steps_per_instance.
    """
    if mode not in ("engine", "env"):
        raise ValueError("mode must be 'engine' or 'env'")
    params = EnvParams(size_class=size_class, observation_mode=observation_mode)
    level = generate(seed, size_class, env_params=EnvParams(size_class=size_class))
    workers = workers or os.cpu_count() or 1
    rows = []
    for count in instance_counts:
        rng = np.random.default_rng(seed + 1)
        cls = _EngineInstance if mode == "engine" else _EnvInstance
        instances = [cls(level, params, rng) for _ in range(count)]
        instances[0].run(1)  # warm the jit outside the timed region
        pool = ThreadPoolExecutor(workers) if workers > 1 else None
        steps_each = 0
        t0 = time.perf_counter()
        while True:
            if pool is None:
                done = [inst.run(CHUNK_STEPS) for inst in instances]
            else:
                done = list(pool.map(lambda i: i.run(CHUNK_STEPS), instances))
            steps_each += done[0]
            if time.perf_counter() - t0 >= secs:
                break
        elapsed = time.perf_counter() - t0
        if pool is not None:
            pool.shutdown()
        total = steps_each * count
        rows.append(
            BenchRow(
                size_class=size_class,
                mode=mode if mode == "engine" else f"env+{observation_mode}",
                instances=count,
                seconds=elapsed,
                steps_per_instance=steps_each,
                total_steps=total,
                sps=total / elapsed,
            )
        )
    return rows
