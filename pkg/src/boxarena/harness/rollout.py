"""Scripted episode execution: policies, rollouts, learnability scoring."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..engine import StaticSimParams
from ..engine.state import F32
from ..engine.step import SimulationDiverged
from ..env import Episode, EnvParams, reset
from .hashing import state_hash


class Policy:
    """Scripted action source: one (motors, thrusters) row per env step.

    Implementations must be deterministic functions of their spec.
    """

    def sequence(self, horizon: int, static: StaticSimParams) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    @property
    def is_noop(self) -> bool:
        return False


class NoopPolicy(Policy):
    spec = "noop"

    def sequence(self, horizon, static):
        return (
            np.zeros((1, static.num_joints), F32),
            np.zeros((1, static.num_thrusters), F32),
        )

    @property
    def is_noop(self):
        return True


class RandomPolicy(Policy):
    """Seeded uniform multi-discrete actions, resampled every env step."""

    def __init__(self, seed: int, continuous: bool = False):
        self.seed = int(seed)
        self.continuous = continuous
        self.spec = f"random:{seed}"

    def sequence(self, horizon, static):
        rng = np.random.default_rng(self.seed)
        if self.continuous:
            motors = rng.uniform(-1, 1, (horizon, static.num_joints))
            thrusters = rng.uniform(0, 1, (horizon, static.num_thrusters))
        else:
            motors = rng.integers(-1, 2, (horizon, static.num_joints))
            thrusters = rng.integers(0, 2, (horizon, static.num_thrusters))
        return motors.astype(F32), thrusters.astype(F32)


class FilePolicy(Policy):
    """Replays an action log: {"actions": [{"motors": [...], "thrusters": [...]}]}.

    Steps beyond the end of the log hold the no-op action.
    """

    def __init__(self, path):
        self.spec = f"file:{path}"
        doc = json.loads(Path(path).read_text())
        self._log = doc["actions"]

    def sequence(self, horizon, static):
        motors = np.zeros((horizon, static.num_joints), F32)
        thrusters = np.zeros((horizon, static.num_thrusters), F32)
        for t, entry in enumerate(self._log[:horizon]):
            motors[t] = np.asarray(entry["motors"], F32)
            thrusters[t] = np.asarray(entry["thrusters"], F32)
        return motors, thrusters


def parse_policy(spec: str) -> Policy:
    """Policy from a CLI spec: 'noop', 'random:SEED' or 'file:PATH'."""
    if spec == "noop":
        return NoopPolicy()
    if spec.startswith("random:"):
        return RandomPolicy(int(spec.split(":", 1)[1]))
    if spec.startswith("file:"):
        return FilePolicy(spec.split(":", 1)[1])
    raise ValueError(f"unknown policy spec {spec!r}")


@dataclass
class RolloutResult:
    level_name: str
    solved: bool
    steps: int
    episode_return: float
    state_hash: str
    diverged: bool = False


def rollout(level, policy: Policy, params: EnvParams | None = None) -> RolloutResult:
    """Run one episode; deterministic given (level, policy spec, params)."""
    params = params or EnvParams(size_class=level.size_class)
    env_state = reset(level, params)
    episode = Episode(env_state.sim, params)
    total = 0.0
    diverged = False
    try:
        if policy.is_noop:
            reward, _ = episode.run_noop()
        else:
            motors, thrusters = policy.sequence(params.horizon, level.static_params)
            reward, _ = episode.run_scripted(motors, thrusters)
        total += reward
    except SimulationDiverged:
        diverged = True
    solved = bool(episode.sim.mani_active[episode._gb_slots].any()) and not diverged
    return RolloutResult(
        level_name=level.name,
        solved=solved,
        steps=episode.timestep,
        episode_return=total,
        state_hash=state_hash(episode.sim, level.static_params),
        diverged=diverged,
    )


def learnability(success_count: int, trials: int) -> float:
    """p(1-p) for the empirical success rate; peaks at p = 1/2."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= success_count <= trials:
        raise ValueError("success_count must lie in [0, trials]")
    p = success_count / trials
    return p * (1.0 - p)


@dataclass
class LevelScore:
    level: object
    successes: int
    trials: int
    score: float


def rank_levels(levels, policy_seed: int, trials: int, params: EnvParams | None = None) -> list[LevelScore]:
    """Score levels by learnability under seeded random rollouts, descending;
    ties broken by level name."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    scored = []
    for level in levels:
        successes = 0
        for t in range(trials):
            result = rollout(level, RandomPolicy(policy_seed + t), params)
            successes += int(result.solved)
        scored.append(LevelScore(level, successes, trials, learnability(successes, trials)))
    scored.sort(key=lambda s: (-s.score, s.level.name))
    return scored
