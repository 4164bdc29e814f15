import json

import numpy as np
import pytest

from boxarena.engine import NUM_WALLS, Role, add_circle, add_thruster, make_arena_state, static_for_class
from boxarena.env import EnvParams
from boxarena.harness import level_hash
from boxarena.levelgen import (
    Level,
    MutationFailed,
    generate,
    mutate,
    noop_filter,
    validate_level,
    validation_errors,
)
from boxarena.levelio import FORMAT_TAG, LevelParseError, deserialize, serialize

SIZES = ("S", "M", "L")


class TestGenerate:
    def test_deterministic(self):
        for size in SIZES:
            assert level_hash(generate(11, size)) == level_hash(generate(11, size))

    def test_seeds_vary(self):
        hashes = {level_hash(generate(seed, "M")) for seed in range(8)}
        assert len(hashes) > 4

    @pytest.mark.parametrize("size", SIZES)
    def test_batch_valid_and_not_noop_solvable(self, size):
        params = EnvParams(size_class=size)
        for seed in range(40):
            level = generate(seed, size, env_params=params)
            assert validation_errors(level) == []
            result = noop_filter(level, params)
            assert not result.solved and not result.diverged

    def test_capacities_respected(self):
        for size in SIZES:
            static = static_for_class(size)
            level = generate(5, size)
            state = level.initial_state
            assert state.body_active[:static.num_polygons].sum() <= static.num_polygons
            assert state.body_active[static.num_polygons:].sum() <= static.num_circles
            assert state.joint_active.sum() <= static.num_joints
            assert state.thruster_active.sum() <= static.num_thrusters


class TestNoopFilter:
    def test_green_falling_onto_blue_is_solved(self):
        static = static_for_class("M")
        state = make_arena_state(static)
        g = add_circle(state, static, 0.3, (2.5, 3.0), role=Role.GREEN)
        add_circle(state, static, 0.3, (2.5, 0.3), role=Role.BLUE)
        add_thruster(state, g, (0, 0), 0.0)
        level = Level(static, state, "drop", "M")
        assert noop_filter(level).solved

    def test_separated_is_not_solved(self):
        static = static_for_class("M")
        state = make_arena_state(static)
        g = add_circle(state, static, 0.3, (1.0, 0.3), role=Role.GREEN)
        add_circle(state, static, 0.3, (4.0, 0.3), role=Role.BLUE)
        add_thruster(state, g, (0, 0), 0.0)
        level = Level(static, state, "apart", "M")
        assert not noop_filter(level).solved

    def test_deterministic(self):
        level = generate(3, "S")
        assert noop_filter(level) == noop_filter(level)


class TestMutate:
    def test_mutations_stay_valid(self):
        level = generate(7, "M")
        for seed, kind in enumerate(("add_shape", "remove_shape", "edit_shape")):
            try:
                out = mutate(level, seed, kind)
            except MutationFailed:
                continue
            assert validation_errors(out) == []
            assert not noop_filter(out).solved

    def test_remove_preserves_roles(self):
        level = generate(7, "M")
        for seed in range(6):
            try:
                out = mutate(level, seed, "remove_shape")
            except MutationFailed:
                continue
            state = out.initial_state
            assert ((state.role == Role.GREEN) & state.body_active).sum() == 1
            assert ((state.role == Role.BLUE) & state.body_active).sum() == 1

    def test_add_then_remove_restores_hash(self):
        level = generate(9, "M")
        before = level_hash(level)
        try:
            added = mutate(level, 1, "add_shape")
        except MutationFailed:
            pytest.skip("no capacity to add on this level")
        new_bodies = np.flatnonzero(
            added.initial_state.body_active & ~level.initial_state.body_active
        )
        assert len(new_bodies) == 1
        reverted = added.copy()
        reverted.initial_state.body_active[new_bodies[0]] = False
        assert level_hash(reverted) == before

    def test_edit_preserves_entity_counts(self):
        level = generate(13, "M")
        out = mutate(level, 2, "edit_shape")
        assert (
            out.initial_state.body_active.sum() == level.initial_state.body_active.sum()
        )
        assert out.initial_state.joint_active.sum() == level.initial_state.joint_active.sum()

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            mutate(generate(0, "S"), 0, "explode")


def minimal_level_doc():
    """Hand-written document: walls, green ball, blue ball, one thruster."""
    t, half, size = 0.5, 2.5, 5.0
    wall = lambda hw, hh: [[-hw, -hh], [hw, -hh], [hw, hh], [-hw, hh]]
    common = dict(
        rotation=0.0, velocity=[0.0, 0.0], angular_velocity=0.0,
        density=1.0, friction=0.7, restitution=0.0,
    )
    bodies = [
        {"slot": 0, "shape": {"kind": "polygon", "vertices": wall(3.5, t)},
         "position": [half, -t], "fixated": True, "role": "none", **common},
        {"slot": 1, "shape": {"kind": "polygon", "vertices": wall(3.5, t)},
         "position": [half, size + t], "fixated": True, "role": "none", **common},
        {"slot": 2, "shape": {"kind": "polygon", "vertices": wall(t, half)},
         "position": [-t, half], "fixated": True, "role": "none", **common},
        {"slot": 3, "shape": {"kind": "polygon", "vertices": wall(t, half)},
         "position": [size + t, half], "fixated": True, "role": "none", **common},
        {"slot": 10, "shape": {"kind": "circle", "radius": 0.3},
         "position": [1.0, 0.3], "role": "green", "fixated": False, **common},
        {"slot": 11, "shape": {"kind": "circle", "radius": 0.3},
         "position": [4.0, 0.3], "role": "blue", "fixated": False, **common},
    ]
    thrusters = [{"slot": 0, "body": 10, "anchor": [0.0, 0.0], "rotation": 0.0, "power": 3.0, "binding": 0}]
    return {
        "format": FORMAT_TAG, "version": 1, "name": "minimal", "size_class": "M",
        "bodies": bodies, "joints": [], "thrusters": thrusters,
    }


class TestSerialization:
    @pytest.mark.parametrize("size", SIZES)
    def test_round_trip_hash_exact(self, size):
        for seed in range(50):
            level = generate(seed, size)
            again = deserialize(serialize(level))
            assert level_hash(again) == level_hash(level)
            assert again.name == level.name and again.size_class == level.size_class

    def test_hand_written_minimal_level_loads(self):
        level = deserialize(json.dumps(minimal_level_doc()))
        validate_level(level)
        assert not noop_filter(level).solved

    def test_two_greens_rejected_with_named_invariant(self):
        doc = minimal_level_doc()
        doc["bodies"][5]["role"] = "green"
        with pytest.raises(LevelParseError, match="exactly one green|exactly one blue"):
            deserialize(json.dumps(doc))

    def test_version_mismatch_rejected(self):
        doc = minimal_level_doc()
        doc["version"] = 99
        with pytest.raises(LevelParseError, match="version"):
            deserialize(json.dumps(doc))

    def test_error_carries_field_path(self):
        doc = minimal_level_doc()
        del doc["bodies"][4]["density"]
        with pytest.raises(LevelParseError, match=r"bodies\[4\].density"):
            deserialize(json.dumps(doc))

    def test_inconsistent_mass_rejected(self):
        doc = minimal_level_doc()
        doc["bodies"][4]["inverse_mass"] = 99.0
        with pytest.raises(LevelParseError, match="inverse_mass"):
            deserialize(json.dumps(doc))

    def test_garbage_json_rejected(self):
        with pytest.raises(LevelParseError):
            deserialize(b"{not json")
