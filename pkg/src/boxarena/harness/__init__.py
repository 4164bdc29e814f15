from .audit import AuditResult, audit_level
from .bench import BenchRow, bench
from .hashing import level_hash, state_hash
from .rollout import (
    FilePolicy,
    LevelScore,
    NoopPolicy,
    Policy,
    RandomPolicy,
    RolloutResult,
    learnability,
    parse_policy,
    rank_levels,
    rollout,
)
