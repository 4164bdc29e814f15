import json

import numpy as np
import pytest

from boxarena.engine import Role, add_circle, add_thruster, make_arena_state, static_for_class
from boxarena.env import EnvParams
from boxarena.harness import (
    FilePolicy,
    NoopPolicy,
    RandomPolicy,
    audit_level,
    bench,
    learnability,
    parse_policy,
    rank_levels,
    rollout,
    state_hash,
)
from boxarena.harness.cli import main
from boxarena.levelgen import Level, generate
from boxarena.levelio import save_level


class TestLearnability:
    def test_extremes_are_zero(self):
        assert learnability(0, 10) == 0.0
        assert learnability(10, 10) == 0.0

    def test_half_is_quarter(self):
        assert learnability(5, 10) == 0.25

    def test_zero_trials_rejected(self):
        with pytest.raises(ValueError):
            learnability(0, 0)

    def test_bad_count_rejected(self):
        with pytest.raises(ValueError):
            learnability(7, 5)


class TestRollout:
    def test_noop_on_generated_level_not_solved(self):
        level = generate(21, "M")
        result = rollout(level, NoopPolicy())
        assert not result.solved
        assert result.steps == 256

    def test_random_policy_repeatable(self):
        level = generate(22, "M")
        a = rollout(level, RandomPolicy(5))
        b = rollout(level, RandomPolicy(5))
        assert a == b

    def test_different_seeds_differ(self):
        level = generate(22, "M")
        a = rollout(level, RandomPolicy(5))
        b = rollout(level, RandomPolicy(6))
        assert a.state_hash != b.state_hash

    def test_solved_iff_plus_one(self):
        # direct drop: green falls onto blue under any policy
        static = static_for_class("M")
        state = make_arena_state(static)
        g = add_circle(state, static, 0.3, (2.5, 2.0), role=Role.GREEN)
        add_circle(state, static, 0.3, (2.5, 0.3), role=Role.BLUE)
        add_thruster(state, g, (0, 0), np.pi / 2, power=0.01)
        level = Level(static, state, "drop", "M")
        result = rollout(level, NoopPolicy())
        assert result.solved and result.episode_return > 0.9

    def test_file_policy_replay_matches(self, tmp_path):
        level = generate(23, "M")
        static = level.static_params
        rng = np.random.default_rng(0)
        log = {
            "actions": [
                {
                    "motors": rng.integers(-1, 2, static.num_joints).tolist(),
                    "thrusters": rng.integers(0, 2, static.num_thrusters).tolist(),
                }
                for _ in range(64)
            ]
        }
        path = tmp_path / "actions.json"
        path.write_text(json.dumps(log))
        a = rollout(level, FilePolicy(path))
        b = rollout(level, FilePolicy(path))
        assert a.state_hash == b.state_hash

    def test_parse_policy_specs(self):
        assert isinstance(parse_policy("noop"), NoopPolicy)
        assert parse_policy("random:9").seed == 9
        with pytest.raises(ValueError):
            parse_policy("lizard")


class TestRankLevels:
    def test_extreme_levels_score_zero(self):
        static = static_for_class("M")
        always = make_arena_state(static)
        g = add_circle(always, static, 0.3, (2.5, 2.0), role=Role.GREEN)
        add_circle(always, static, 0.3, (2.5, 0.3), role=Role.BLUE)
        add_thruster(always, g, (0, 0), 0.0, power=0.01)
        level_always = Level(static, always, "always", "M")

        never = make_arena_state(static)
        g = add_circle(never, static, 0.3, (1.0, 0.3), role=Role.GREEN)
        add_circle(never, static, 0.3, (4.0, 4.5), role=Role.BLUE, fixated=True)
        add_thruster(never, g, (0, 0), np.pi / 2, power=0.001)
        level_never = Level(static, never, "never", "M")

        params = EnvParams(horizon=32)
        scores = rank_levels([level_always, level_never], policy_seed=0, trials=6, params=params)
        by_name = {s.level.name: s for s in scores}
        assert by_name["always"].successes == 6 and by_name["always"].score == 0.0
        assert by_name["never"].successes == 0 and by_name["never"].score == 0.0
        # ties broken by name
        assert [s.level.name for s in scores] == ["always", "never"]

    def test_scores_match_independent_recount(self):
        levels = [generate(seed, "S") for seed in (31, 32, 33)]
        params = EnvParams(size_class="S", horizon=64)
        scores = rank_levels(levels, policy_seed=4, trials=5, params=params)
        for s in scores:
            successes = sum(
                rollout(s.level, RandomPolicy(4 + t), params).solved for t in range(5)
            )
            assert s.successes == successes
            assert s.score == learnability(successes, 5)
        ranks = [s.score for s in scores]
        assert ranks == sorted(ranks, reverse=True)


class TestStateHash:
    def test_copy_hash_equal(self):
        level = generate(2, "M")
        assert state_hash(level.initial_state, level.static_params) == state_hash(
            level.initial_state.copy(), level.static_params
        )

    def test_inactive_garbage_ignored(self):
        level = generate(2, "M")
        other = level.initial_state.copy()
        junk = np.flatnonzero(~other.body_active)
        assert len(junk)
        other.position[junk[0]] = (9.0, 9.0)
        other.radius[junk[0]] = 77.0
        assert state_hash(other, level.static_params) == state_hash(
            level.initial_state, level.static_params
        )

    def test_any_active_field_changes_hash(self):
        level = generate(2, "M")
        other = level.initial_state.copy()
        body = np.flatnonzero(other.body_active)[4]
        other.friction[body] += np.float32(1e-4)
        assert state_hash(other, level.static_params) != state_hash(
            level.initial_state, level.static_params
        )


class TestAudit:
    def test_generated_level_is_deterministic(self):
        level = generate(40, "S")
        result = audit_level(level, steps=200, repeats=3, policy_seed=1)
        assert result.passed
        assert len(set(result.serial_hashes) | set(result.pool_hashes)) == 1


class TestBench:
    def test_accounting_identity_and_modes(self):
        rows = bench("S", [1, 2], secs=0.25, mode="engine", seed=1)
        for row in rows:
            assert row.total_steps == row.instances * row.steps_per_instance
            assert row.sps > 0
        env_rows = bench("S", [1], secs=0.25, mode="env", observation_mode="pixels", seed=1)
        assert env_rows[0].mode == "env+pixels"
        assert env_rows[0].total_steps > 0


class TestCli:
    def test_gen_rollout_filter_audit(self, tmp_path, capsys):
        out = tmp_path / "levels"
        assert main(["gen", "--size", "S", "--count", "2", "--out", str(out), "--seed", "3"]) == 0
        files = sorted(out.glob("*.json"))
        assert len(files) == 2
        capsys.readouterr()

        assert main(["rollout", "--level", str(files[0]), "--policy", "random:1"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("#")
        assert lines[1] == "level,policy,solved,steps,return,state_hash,diverged"

        assert main(["filter", "--in", str(out), "--policy", "random:2", "--trials", "2", "--top", "2"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[1] == "rank,name,successes,trials,success_rate,learnability"
        assert len(lines) == 4

        assert main(["audit", "--level", str(files[0]), "--steps", "100", "--repeats", "2"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[-1].endswith(",1")

    def test_audit_failure_exits_nonzero(self, tmp_path, capsys, monkeypatch):
        from boxarena.harness import cli
        from boxarena.harness.audit import AuditResult

        level = generate(1, "S")
        path = tmp_path / "l.json"
        save_level(level, path)
        monkeypatch.setattr(
            cli,
            "audit_level",
            lambda *a, **k: AuditResult("x", 1, 1, ["aa"], ["bb"], passed=False),
        )
        assert main(["audit", "--level", str(path)]) == 1

    def test_bench_csv(self, capsys):
        assert main(["bench", "--size", "S", "--instances", "1", "--secs", "0.2", "--mode", "engine"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "# seed=0"
        assert lines[1] == "size,mode,instances,seconds,steps_per_instance,total_steps,sps"
        assert len(lines) == 3
