"""Determinism audits: identical seeded rollouts must produce bit-identical
state hashes across repeats and across serial vs worker-pool execution."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from ..env import EnvParams
from .rollout import RandomPolicy, rollout


@dataclass
class AuditResult:
    level_name: str
    steps: int
    repeats: int
    serial_hashes: list[str]
    pool_hashes: list[str]
    passed: bool


def audit_level(
    level,
    steps: int = 1000,
    repeats: int = 10,
    policy_seed: int = 0,
    params: EnvParams | None = None,
    workers: int | None = None,
) -> AuditResult:
    """Roll the level `steps` env steps under a seeded random policy,
    `repeats` times serially and again on a thread pool; passes iff every
    final state hash is identical."""
    params = params or EnvParams(size_class=level.size_class)
    params = replace(params, horizon=steps)

    def one(_):
        return rollout(level, RandomPolicy(policy_seed), params).state_hash

    serial = [one(i) for i in range(repeats)]
    workers = workers or os.cpu_count() or 1
    with ThreadPoolExecutor(max_workers=max(2, workers)) as pool:
        pooled = list(pool.map(one, range(repeats)))
    passed = len(set(serial) | set(pooled)) == 1
    return AuditResult(level.name, steps, repeats, serial, pooled, passed)
