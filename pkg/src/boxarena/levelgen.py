"""Procedural level generation with rejection sampling, plus mutation
operators for curriculum-style level editing.

A level is an initial scene plus role tags: exactly one green and one blue
shape, at least one controllable motor or thruster, and no meaningful
initial overlap.  Generated levels additionally fail the no-op filter
(they are not solved by doing nothing); unsolvable levels are not filtered.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from .engine import (
    ARENA_SIZE,
    CapacityError,
    NUM_WALLS,
    Role,
    SimState,
    StaticSimParams,
    add_circle,
    add_joint,
    add_polygon,
    add_thruster,
    make_arena_state,
    static_for_class,
)
from .engine.step import SimulationDiverged, refresh_manifolds
from .env import Episode, EnvParams, InvalidLevelError, reset

MAX_INITIAL_PENETRATION = 1e-3
PLACEMENT_RETRIES = 20
LEVEL_RETRIES = 40


class GenerationFailed(RuntimeError):
    """Retry budget exhausted while sampling a level."""


class MutationFailed(RuntimeError):
    """No valid mutation found within the retry budget."""


class LevelValidationError(ValueError):
    """Level violates a named invariant."""


@dataclass
class Level:
    static_params: StaticSimParams
    initial_state: SimState
    name: str
    size_class: str

    def copy(self) -> "Level":
        return Level(self.static_params, self.initial_state.copy(), self.name, self.size_class)


@dataclass
class NoopFilterResult:
    solved: bool
    diverged: bool = False


# --- validation ---------------------------------------------------------------


def validation_errors(level: Level) -> list[str]:
    """All violated invariants, each as 'name: detail'."""
    errors = []
    state = level.initial_state
    static = level.static_params
    if static != static_for_class(level.size_class):
        errors.append(f"size class: capacities do not match class {level.size_class!r}")
        return errors

    for w in range(NUM_WALLS):
        if not (state.body_active[w] and state.fixated[w]):
            errors.append(f"walls: polygon slot {w} must be an active fixated wall")

    greens = int(((state.role == Role.GREEN) & state.body_active).sum())
    blues = int(((state.role == Role.BLUE) & state.body_active).sum())
    if greens != 1:
        errors.append(f"exactly one green: found {greens}")
    if blues != 1:
        errors.append(f"exactly one blue: found {blues}")

    controllable = False
    for j in range(static.num_joints):
        if state.joint_active[j] and state.motor_on[j] and not state.joint_is_fixed[j]:
            controllable = True
    for t in range(static.num_thrusters):
        if state.thruster_active[t] and not state.fixated[state.thruster_body[t]]:
            controllable = True
    if not controllable:
        errors.append("controllable: needs at least one motor or thruster")

    for i in range(static.num_bodies):
        if not state.body_active[i]:
            continue
        prefix = f"body {i}"
        fields = [
            state.position[i], state.velocity[i],
            [state.rotation[i], state.angular_velocity[i], state.density[i],
             state.friction[i], state.restitution[i],
             state.inverse_mass[i], state.inverse_inertia[i]],
        ]
        if not all(np.isfinite(np.asarray(f)).all() for f in fields):
            errors.append(f"finite: {prefix} has non-finite fields")
            continue
        if state.fixated[i]:
            if state.inverse_mass[i] != 0 or state.inverse_inertia[i] != 0:
                errors.append(f"fixated: {prefix} must have zero inverse mass and inertia")
        elif state.inverse_mass[i] <= 0 or state.inverse_inertia[i] <= 0:
            errors.append(f"fixated: {prefix} is movable but has non-positive inverse mass")
        if state.density[i] <= 0:
            errors.append(f"density: {prefix} must be positive")
        if static.is_polygon(i):
            n = int(state.vertex_count[i])
            if n not in (3, 4):
                errors.append(f"polygon: {prefix} vertex count {n} not in {{3, 4}}")
            else:
                verts = state.vertices[i, :n].astype(np.float64)
                if not geo.is_convex_ccw(verts):
                    errors.append(f"polygon: {prefix} is not convex counter-clockwise")
                elif np.abs(geo.vertex_centroid(verts)).max() > 1e-4:
                    errors.append(f"polygon: {prefix} vertex centroid is off-origin")
        elif state.radius[i] <= 0:
            errors.append(f"circle: {prefix} radius must be positive")

    for j in range(static.num_joints):
        if not state.joint_active[j]:
            continue
        a, b = int(state.joint_body_a[j]), int(state.joint_body_b[j])
        if a == b:
            errors.append(f"joint {j}: endpoints must differ")
        elif not (state.body_active[a] and state.body_active[b]):
            errors.append(f"joint {j}: endpoints must be active bodies")
        if state.joint_has_limits[j] and state.joint_limit_min[j] > state.joint_limit_max[j]:
            errors.append(f"joint {j}: limit_min exceeds limit_max")

    for t in range(static.num_thrusters):
        if state.thruster_active[t] and not state.body_active[state.thruster_body[t]]:
            errors.append(f"thruster {t}: must attach to an active body")

    probe = state.copy()
    refresh_manifolds(probe, static)
    if probe.mani_active.any():
        worst = float(probe.mani_penetration[probe.mani_active].max())
        if worst > MAX_INITIAL_PENETRATION:
            errors.append(f"initial overlap: penetration {worst:.4f} exceeds {MAX_INITIAL_PENETRATION}")
    return errors


def validate_level(level: Level) -> None:
    errors = validation_errors(level)
    if errors:
        raise LevelValidationError("; ".join(errors))


# --- no-op filter -------------------------------------------------------------


def noop_filter(level: Level, params: EnvParams | None = None) -> NoopFilterResult:
    """Roll the full horizon under the all-zero action; solved means the
    green-blue contact fired."""
    params = params or EnvParams(size_class=level.size_class)
    env_state = reset(level, params)
    episode = Episode(env_state.sim, params)
    try:
        episode.run_noop()
    except SimulationDiverged:
        return NoopFilterResult(solved=False, diverged=True)
    solved = bool(episode.sim.mani_active[episode._gb_slots].any())
    return NoopFilterResult(solved=solved)


# --- generation ---------------------------------------------------------------


@dataclass
class GeneratorConfig:
    """Sampling ranges; tuned to keep scenes inside the arena at sane speeds."""

    half_extent_range: tuple[float, float] = (0.1, 0.6)
    circle_radius_range: tuple[float, float] = (0.1, 0.4)
    density_range: tuple[float, float] = (0.5, 2.0)
    friction_range: tuple[float, float] = (0.0, 1.0)
    restitution_range: tuple[float, float] = (0.0, 0.8)
    # motor power = torque_factor / (inv_inertia_a + inv_inertia_b), keeping
    # the tanh speed feedback in its stable regime for any body masses
    motor_torque_factor_range: tuple[float, float] = (0.2, 1.5)
    motor_speed_range: tuple[float, float] = (0.5, 2.5)
    # thruster power = accel_factor * body mass
    thruster_accel_range: tuple[float, float] = (3.0, 15.0)
    fixate_probability: float = 0.15
    joint_probability: float = 0.5
    first_joint_probability: float = 0.7
    fixed_joint_probability: float = 0.25
    motor_probability: float = 0.8
    always_on_probability: float = 0.1
    limit_probability: float = 0.3
    wall_parent_probability: float = 0.15
    red_probability: float = 0.15


def _loguniform(rng, lo, hi):
    return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))


def _sample_polygon_vertices(rng, cfg):
    kind = rng.random()
    if kind < 0.5:
        return geo.rect_vertices(rng.uniform(*cfg.half_extent_range), rng.uniform(*cfg.half_extent_range))
    n = 3 if kind < 0.7 else 4
    # points on a random ellipse at sorted, well-separated angles are convex
    for _ in range(50):
        angles = np.sort(rng.uniform(0, 2 * np.pi, n))
        if np.min(np.diff(np.concatenate([angles, [angles[0] + 2 * np.pi]]))) < 0.5:
            continue
        rx = rng.uniform(*cfg.half_extent_range)
        ry = rng.uniform(*cfg.half_extent_range)
        verts = np.stack([rx * np.cos(angles), ry * np.sin(angles)], axis=1)
        if geo.is_convex_ccw(verts - geo.vertex_centroid(verts)):
            return verts
    return geo.rect_vertices(0.2, 0.2)


def _point_inside(rng, state, body, static):
    if static.is_polygon(body):
        n = int(state.vertex_count[body])
        w = rng.dirichlet(np.ones(n))
        return (w @ state.vertices[body, :n].astype(np.float64)).astype(np.float64)
    r = float(state.radius[body]) * 0.8 * np.sqrt(rng.random())
    phi = rng.uniform(0, 2 * np.pi)
    return np.array([r * np.cos(phi), r * np.sin(phi)])


def _bounding(state, body, static):
    if static.is_polygon(body):
        n = int(state.vertex_count[body])
        return geo.bounding_radius(state.vertices[body, :n])
    return float(state.radius[body])


def _overlap_clean(state, static) -> bool:
    probe = state.copy()
    refresh_manifolds(probe, static)
    if not probe.mani_active.any():
        return True
    return float(probe.mani_penetration[probe.mani_active].max()) <= MAX_INITIAL_PENETRATION


def _undo_body(state, body, joint_slot=None):
    state.body_active[body] = False
    if joint_slot is not None:
        state.joint_active[joint_slot] = False


def _sample_candidate(rng, static: StaticSimParams, size_class: str, name: str, cfg: GeneratorConfig):
    state = make_arena_state(static)
    free_polys = static.num_polygons - NUM_WALLS
    while True:
        n_poly = int(rng.integers(0, free_polys + 1))
        n_circ = int(rng.integers(0, static.num_circles + 1))
        if n_poly + n_circ >= 2:
            break
    plan = ["p"] * n_poly + ["c"] * n_circ
    rng.shuffle(plan)

    placed: list[int] = []
    joints_used = 0
    for kind in plan:
        p_joint = cfg.first_joint_probability if joints_used == 0 else cfg.joint_probability
        jointed = bool(placed) and joints_used < static.num_joints and rng.random() < p_joint
        for _ in range(PLACEMENT_RETRIES):
            if kind == "p":
                verts = _sample_polygon_vertices(rng, cfg)
                bound = geo.bounding_radius(geo.normalize_polygon(verts))
            else:
                radius = rng.uniform(*cfg.circle_radius_range)
                bound = radius
            rotation = rng.uniform(0, 2 * np.pi)
            density = rng.uniform(*cfg.density_range)
            friction = rng.uniform(*cfg.friction_range)
            restitution = rng.uniform(*cfg.restitution_range)
            fixated = (not jointed) and rng.random() < cfg.fixate_probability

            joint_slot = None
            if jointed:
                pool = placed
                if rng.random() < cfg.wall_parent_probability:
                    pool = list(range(NUM_WALLS))
                parent = int(pool[rng.integers(len(pool))])
                anchor_parent = _point_inside(rng, state, parent, static)
                c, s = np.cos(state.rotation[parent]), np.sin(state.rotation[parent])
                world_anchor = state.position[parent].astype(np.float64) + np.array(
                    [c * anchor_parent[0] - s * anchor_parent[1],
                     s * anchor_parent[0] + c * anchor_parent[1]]
                )
                if kind == "p":
                    nv = geo.normalize_polygon(verts)
                    anchor_child = nv[rng.integers(len(nv))] * rng.uniform(0.2, 0.9)
                else:
                    anchor_child = _sample_child_circle_anchor(rng, radius)
                position = world_anchor - geo.rotate(anchor_child, rotation)
            else:
                margin = bound + 0.05
                lo, hi = margin, ARENA_SIZE - margin
                if lo >= hi:
                    continue
                position = rng.uniform(lo, hi, 2)

            try:
                if kind == "p":
                    body = add_polygon(
                        state, static, verts, position, rotation=rotation, density=density,
                        friction=friction, restitution=restitution, fixated=fixated,
                    )
                else:
                    body = add_circle(
                        state, static, radius, position, rotation=rotation, density=density,
                        friction=friction, restitution=restitution, fixated=fixated,
                    )
            except (CapacityError, ValueError):
                break
            if jointed:
                joint_slot = _attach_joint(rng, state, static, body, parent, anchor_child, anchor_parent, cfg)
                if joint_slot is None:
                    _undo_body(state, body)
                    continue
            if _overlap_clean(state, static):
                placed.append(body)
                if joint_slot is not None:
                    joints_used += 1
                break
            _undo_body(state, body, joint_slot)

    if len(placed) < 2:
        return None

    movable = [b for b in placed if not state.fixated[b]]
    n_thr = int(rng.integers(0, static.num_thrusters + 1))
    for _ in range(n_thr):
        if not movable:
            break
        _attach_thruster(rng, state, static, int(movable[rng.integers(len(movable))]), cfg)

    if not _ensure_controllable(rng, state, static, movable, cfg):
        return None

    green_pool = movable if movable else placed
    green = int(green_pool[rng.integers(len(green_pool))])
    others = [b for b in placed if b != green]
    blue = int(others[rng.integers(len(others))])
    state.role[green] = Role.GREEN
    state.role[blue] = Role.BLUE
    for b in others:
        if b != blue and rng.random() < cfg.red_probability:
            state.role[b] = Role.RED

    return Level(static_params=static, initial_state=state, name=name, size_class=size_class)


def _sample_child_circle_anchor(rng, radius):
    r = radius * 0.8 * np.sqrt(rng.random())
    phi = rng.uniform(0, 2 * np.pi)
    return np.array([r * np.cos(phi), r * np.sin(phi)])


def _attach_joint(rng, state, static, child, parent, anchor_child, anchor_parent, cfg):
    is_fixed = rng.random() < cfg.fixed_joint_probability
    motor = (not is_fixed) and rng.random() < cfg.motor_probability
    has_limits = (not is_fixed) and rng.random() < cfg.limit_probability
    rel = float(state.rotation[child]) - float(state.rotation[parent])
    ii = float(state.inverse_inertia[child]) + float(state.inverse_inertia[parent])
    power = _loguniform(rng, *cfg.motor_torque_factor_range) / max(ii, 1e-6)
    speed = _loguniform(rng, *cfg.motor_speed_range) * (1 if rng.random() < 0.5 else -1)
    try:
        return add_joint(
            state, child, parent, anchor_child, anchor_parent,
            is_fixed=is_fixed,
            fixed_rotation=rel,
            motor_on=motor,
            motor_power=power if motor else 0.0,
            motor_speed=speed if motor else 0.0,
            motor_always_on=motor and rng.random() < cfg.always_on_probability,
            has_limits=has_limits,
            limit_min=rel - rng.uniform(0.3, 2.0) if has_limits else 0.0,
            limit_max=rel + rng.uniform(0.3, 2.0) if has_limits else 0.0,
            binding=int(rng.integers(0, 2)),
        )
    except (CapacityError, ValueError):
        return None


def _attach_thruster(rng, state, static, body, cfg):
    mass = 1.0 / float(state.inverse_mass[body])
    try:
        return add_thruster(
            state, body,
            _point_inside(rng, state, body, static),
            rng.uniform(0, 2 * np.pi),
            power=_loguniform(rng, *cfg.thruster_accel_range) * mass,
            binding=int(rng.integers(0, 2)),
        )
    except (CapacityError, ValueError):
        return None


def _ensure_controllable(rng, state, static, movable, cfg) -> bool:
    for j in range(static.num_joints):
        if state.joint_active[j] and state.motor_on[j] and not state.joint_is_fixed[j]:
            return True
    if state.thruster_active.any() and any(
        not state.fixated[state.thruster_body[t]]
        for t in range(static.num_thrusters) if state.thruster_active[t]
    ):
        return True
    # try to motorize an existing revolute joint
    for j in range(static.num_joints):
        if state.joint_active[j] and not state.joint_is_fixed[j]:
            ii = float(state.inverse_inertia[state.joint_body_a[j]]) + float(
                state.inverse_inertia[state.joint_body_b[j]]
            )
            state.motor_on[j] = True
            state.motor_power[j] = _loguniform(rng, *cfg.motor_torque_factor_range) / max(ii, 1e-6)
            state.motor_speed[j] = _loguniform(rng, *cfg.motor_speed_range)
            return True
    if movable:
        return _attach_thruster(rng, state, static, int(movable[rng.integers(len(movable))]), cfg) is not None
    return False


def generate(
    seed: int,
    size_class: str,
    env_params: EnvParams | None = None,
    config: GeneratorConfig | None = None,
) -> Level:
    """Deterministically sample a valid, non-trivial level from a seed."""
    static = static_for_class(size_class)
    params = env_params or EnvParams(size_class=size_class)
    if params.size_class != size_class:
        raise ValueError("env_params size class must match the requested class")
    cfg = config or GeneratorConfig()
    rng = np.random.default_rng(seed)
    name = f"gen-{size_class}-{seed}"
    for _ in range(LEVEL_RETRIES):
        level = _sample_candidate(rng, static, size_class, name, cfg)
        if level is None:
            continue
        if validation_errors(level):
            continue
        try:
            result = noop_filter(level, params)
        except InvalidLevelError:
            continue
        if result.solved or result.diverged:
            continue
        return level
    raise GenerationFailed(f"no valid level for seed {seed} ({size_class}) in {LEVEL_RETRIES} attempts")


# --- mutation -----------------------------------------------------------------


def mutate(
    level: Level,
    seed: int,
    kind: str,
    env_params: EnvParams | None = None,
    config: GeneratorConfig | None = None,
) -> Level:
    """One-entity edit of a level: 'add_shape', 'remove_shape' or 'edit_shape'.

    The result is re-validated (including the no-op filter); raises
    MutationFailed when no valid mutation is found within the retry budget.
    """
    if kind not in ("add_shape", "remove_shape", "edit_shape"):
        raise ValueError(f"unknown mutation kind {kind!r}")
    params = env_params or EnvParams(size_class=level.size_class)
    cfg = config or GeneratorConfig()
    rng = np.random.default_rng(seed)
    static = level.static_params
    for _ in range(30):
        state = level.initial_state.copy()
        if kind == "add_shape":
            ok = _mutate_add(rng, state, static, cfg)
        elif kind == "remove_shape":
            ok = _mutate_remove(rng, state, static)
        else:
            ok = _mutate_edit(rng, state, static, cfg)
        if not ok:
            continue
        candidate = Level(static, state, f"{level.name}+{kind}", level.size_class)
        if validation_errors(candidate):
            continue
        try:
            result = noop_filter(candidate, params)
        except InvalidLevelError:
            continue
        if result.solved or result.diverged:
            continue
        return candidate
    raise MutationFailed(f"no valid {kind} mutation for level {level.name!r}")


def _mutate_add(rng, state, static, cfg) -> bool:
    poly_free = any(not state.body_active[i] for i in range(NUM_WALLS, static.num_polygons))
    circ_free = any(
        not state.body_active[i] for i in range(static.num_polygons, static.num_bodies)
    )
    if not (poly_free or circ_free):
        return False
    kind = "p" if (poly_free and (not circ_free or rng.random() < 0.6)) else "c"
    for _ in range(PLACEMENT_RETRIES):
        if kind == "p":
            verts = _sample_polygon_vertices(rng, cfg)
            bound = geo.bounding_radius(geo.normalize_polygon(verts))
        else:
            radius = rng.uniform(*cfg.circle_radius_range)
            bound = radius
        margin = bound + 0.05
        if margin >= ARENA_SIZE - margin:
            continue
        position = rng.uniform(margin, ARENA_SIZE - margin, 2)
        common = dict(
            rotation=rng.uniform(0, 2 * np.pi),
            density=rng.uniform(*cfg.density_range),
            friction=rng.uniform(*cfg.friction_range),
            restitution=rng.uniform(*cfg.restitution_range),
            fixated=rng.random() < cfg.fixate_probability,
        )
        try:
            if kind == "p":
                body = add_polygon(state, static, verts, position, **common)
            else:
                body = add_circle(state, static, radius, position, **common)
        except (CapacityError, ValueError):
            return False
        if _overlap_clean(state, static):
            return True
        _undo_body(state, body)
    return False


def _removable(state, static):
    return [
        i for i in range(NUM_WALLS, static.num_bodies)
        if state.body_active[i] and state.role[i] == Role.NONE
    ]


def _mutate_remove(rng, state, static) -> bool:
    candidates = _removable(state, static)
    if not candidates:
        return False
    body = int(candidates[rng.integers(len(candidates))])
    state.body_active[body] = False
    for j in range(static.num_joints):
        if state.joint_active[j] and body in (state.joint_body_a[j], state.joint_body_b[j]):
            state.joint_active[j] = False
    for t in range(static.num_thrusters):
        if state.thruster_active[t] and state.thruster_body[t] == body:
            state.thruster_active[t] = False
    return True


def _mutate_edit(rng, state, static, cfg) -> bool:
    bodies = [i for i in range(NUM_WALLS, static.num_bodies) if state.body_active[i]]
    if not bodies:
        return False
    body = int(bodies[rng.integers(len(bodies))])
    prop = ["position", "rotation", "density", "friction", "restitution"][int(rng.integers(5))]
    if prop == "position":
        bound = _bounding(state, body, static)
        margin = bound + 0.05
        if margin >= ARENA_SIZE - margin:
            return False
        state.position[body] = rng.uniform(margin, ARENA_SIZE - margin, 2).astype(np.float32)
    elif prop == "rotation":
        state.rotation[body] = rng.uniform(0, 2 * np.pi)
    elif prop == "density":
        density = rng.uniform(*cfg.density_range)
        state.density[body] = density
        if not state.fixated[body]:
            if static.is_polygon(body):
                n = int(state.vertex_count[body])
                m, inertia = geo.polygon_mass_properties(state.vertices[body, :n], density)
            else:
                m, inertia = geo.circle_mass_properties(float(state.radius[body]), density)
            state.inverse_mass[body] = 1.0 / m
            state.inverse_inertia[body] = 1.0 / inertia
    elif prop == "friction":
        state.friction[body] = rng.uniform(*cfg.friction_range)
    else:
        state.restitution[body] = rng.uniform(*cfg.restitution_range)
    return _overlap_clean(state, static)
