"""RL environment semantics over the engine.

Episodes: make the green shape touch the blue shape (+1, terminate);
touching green to red terminates with -1; otherwise a dense shaping term
kappa * (d_t - d_{t+1}) on the green-blue center distance.  One env step
advances the engine frame_skip times with the action held constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .engine import Role, SimParams, SimState, StaticSimParams, static_for_class
from .engine.state import F32, slot_bodies
from .engine.step import EVENT_GREEN_BLUE, EVENT_GREEN_RED, EVENT_NONE, SceneStepper

N_ROLES = 4
N_SHAPE_TYPES = 2
N_BINDING_COLOURS = 4
SHAPE_FEATURES = 13 + N_ROLES + N_SHAPE_TYPES + 8 + 2
JOINT_FEATURES = 11 + N_BINDING_COLOURS
THRUSTER_FEATURES = 6


class InvalidLevelError(ValueError):
    """Level violates an environment precondition."""


class InvalidActionError(ValueError):
    """Action outside the bounds of the configured action mode."""


class EpisodeTerminatedError(RuntimeError):
    """env_step called on a terminated episode."""


@dataclass
class EnvParams:
    size_class: str = "M"
    frame_skip: int = 2
    dense_reward_kappa: float = 0.05
    horizon: int = 256
    action_mode: str = "multi_discrete"     # or "continuous"
    observation_mode: str = "entity"        # "entity" | "flat" | "pixels"
    sim: SimParams = field(default_factory=SimParams)

    def __post_init__(self):
        if self.frame_skip < 1 or self.horizon < 1:
            raise ValueError("frame_skip and horizon must be >= 1")
        if self.action_mode not in ("multi_discrete", "continuous"):
            raise ValueError(f"unknown action mode {self.action_mode!r}")
        if self.observation_mode not in ("entity", "flat", "pixels"):
            raise ValueError(f"unknown observation mode {self.observation_mode!r}")

    @property
    def static(self) -> StaticSimParams:
        return static_for_class(self.size_class)


@dataclass
class Action:
    motor_values: np.ndarray
    thruster_values: np.ndarray

    @classmethod
    def noop(cls, static: StaticSimParams) -> "Action":
        return cls(np.zeros(static.num_joints, F32), np.zeros(static.num_thrusters, F32))

    def validate(self, params: EnvParams) -> None:
        m = np.asarray(self.motor_values, np.float64)
        t = np.asarray(self.thruster_values, np.float64)
        static = params.static
        if m.shape != (static.num_joints,) or t.shape != (static.num_thrusters,):
            raise InvalidActionError(
                f"action shapes {m.shape}/{t.shape} do not match capacities "
                f"({static.num_joints},)/({static.num_thrusters},)"
            )
        if params.action_mode == "continuous":
            if (m < -1).any() or (m > 1).any():
                raise InvalidActionError("motor values must lie in [-1, 1]")
            if (t < 0).any() or (t > 1).any():
                raise InvalidActionError("thruster values must lie in [0, 1]")
        else:
            if not np.isin(m, (-1.0, 0.0, 1.0)).all():
                raise InvalidActionError("multi-discrete motor values must be -1, 0 or +1")
            if not np.isin(t, (0.0, 1.0)).all():
                raise InvalidActionError("multi-discrete thruster values must be 0 or 1")


@dataclass
class EnvState:
    sim: SimState
    timestep: int
    terminated: bool
    last_distance: float


def decode_multidiscrete(indices, params: EnvParams) -> Action:
    """Map discrete action indices to an Action.

    Per motor: 0 = off, 1 = backward (-1), 2 = forward (+1); per thruster:
    0 = off, 1 = full power.  The all-zero index vector is the no-op.
    """
    static = params.static
    idx = np.asarray(indices, np.int64)
    want = static.num_joints + static.num_thrusters
    if idx.shape != (want,):
        raise InvalidActionError(f"expected {want} indices, got shape {idx.shape}")
    motor_idx = idx[: static.num_joints]
    thrust_idx = idx[static.num_joints:]
    if ((motor_idx < 0) | (motor_idx > 2)).any():
        raise InvalidActionError("motor indices must be 0 (off), 1 (backward) or 2 (forward)")
    if ((thrust_idx < 0) | (thrust_idx > 1)).any():
        raise InvalidActionError("thruster indices must be 0 or 1")
    motor_map = np.array([0.0, -1.0, 1.0], F32)
    return Action(motor_map[motor_idx], thrust_idx.astype(F32))


def _role_index(sim: SimState, role: Role) -> int:
    hits = np.flatnonzero(sim.body_active & (sim.role == int(role)))
    if len(hits) == 0:
        raise InvalidLevelError(f"level has no {role.name.lower()} shape")
    return int(hits[0])


def green_blue_distance(sim: SimState) -> float:
    g = _role_index(sim, Role.GREEN)
    b = _role_index(sim, Role.BLUE)
    d = sim.position[g].astype(np.float64) - sim.position[b].astype(np.float64)
    return float(np.hypot(d[0], d[1]))


def _role_contacts(sim: SimState, static: StaticSimParams) -> tuple[bool, bool]:
    """(green touches blue, green touches red) from the manifold cache."""
    sa, sb = slot_bodies(static)
    act = sim.mani_active
    if not act.any():
        return False, False
    ra = sim.role[sa[act]]
    rb = sim.role[sb[act]]
    gb = ((ra == Role.GREEN) & (rb == Role.BLUE)) | ((ra == Role.BLUE) & (rb == Role.GREEN))
    gr = ((ra == Role.GREEN) & (rb == Role.RED)) | ((ra == Role.RED) & (rb == Role.GREEN))
    return bool(gb.any()), bool(gr.any())


def reset(level, params: EnvParams) -> EnvState:
    """Fresh episode from a level's initial state.

    The level must match the configured size class, contain a green and a
    blue shape, and not start with them already touching.
    """
    if level.size_class != params.size_class:
        raise InvalidLevelError(
            f"level size class {level.size_class!r} does not match params {params.size_class!r}"
        )
    sim = level.initial_state.copy()
    sim.clear_accumulators()
    _role_index(sim, Role.GREEN)
    _role_index(sim, Role.BLUE)
    from .engine.step import refresh_manifolds

    probe = sim.copy()
    refresh_manifolds(probe, params.static)
    gb, _ = _role_contacts(probe, params.static)
    if gb:
        raise InvalidLevelError("green and blue shapes already touching at reset")
    return EnvState(sim=sim, timestep=0, terminated=False, last_distance=green_blue_distance(sim))


class Episode:
    """Mutable in-place episode over one sim; the engine of env_step.

    Caches the stepping handle and the role-pair manifold slots, so long
    rollouts (filters, benchmarks, audits) avoid per-step recomputation.
    """

    def __init__(self, sim: SimState, params: EnvParams,
                 timestep: int = 0, terminated: bool = False,
                 last_distance: float | None = None):
        self.params = params
        self.static = params.static
        self.sim = sim
        self.timestep = timestep
        self.terminated = terminated
        self.green = _role_index(sim, Role.GREEN)
        self.blue = _role_index(sim, Role.BLUE)
        sa, sb = slot_bodies(self.static)
        ra, rb = sim.role[sa], sim.role[sb]
        self._gb_slots = np.flatnonzero(
            ((ra == Role.GREEN) & (rb == Role.BLUE)) | ((ra == Role.BLUE) & (rb == Role.GREEN))
        )
        self._gr_slots = np.flatnonzero(
            ((ra == Role.GREEN) & (rb == Role.RED)) | ((ra == Role.RED) & (rb == Role.GREEN))
        )
        self._stepper = SceneStepper(
            sim, params.sim, self.static,
            watch_green_blue=self._gb_slots, watch_green_red=self._gr_slots,
        )
        self.last_distance = self.distance() if last_distance is None else last_distance

    def distance(self) -> float:
        d = self.sim.position[self.green].astype(np.float64) - self.sim.position[self.blue].astype(np.float64)
        return float(np.hypot(d[0], d[1]))

    def _finish_step(self, code: int, env_steps: int) -> tuple[float, bool]:
        sparse = 1.0 if code == EVENT_GREEN_BLUE else (-1.0 if code == EVENT_GREEN_RED else 0.0)
        done = code != EVENT_NONE
        self.timestep += env_steps
        if self.timestep >= self.params.horizon:
            done = True
        d_next = self.distance()
        reward = sparse + self.params.dense_reward_kappa * (self.last_distance - d_next)
        self.last_distance = d_next
        self.terminated = done
        return reward, done

    def advance(self, motor_values, thruster_values) -> tuple[float, bool]:
        """One env step (frame_skip engine steps); returns (reward, done).

        The kernel stops on the first engine sub-step with a green-blue or
        green-red contact.  Action bounds are the caller's responsibility
        here; the public env_step validates them.
        """
        if self.terminated:
            raise EpisodeTerminatedError("env_step on a terminated episode")
        self._stepper.motor_actions[:] = motor_values
        self._stepper.thruster_actions[:] = thruster_values
        code, _ = self._stepper.run(self.params.frame_skip)
        return self._finish_step(code, 1)

    def run_noop(self) -> tuple[float, bool]:
        """Roll the rest of the episode under the no-op action in one kernel
        call; returns the summed reward (dense telescopes) and done."""
        if self.terminated:
            raise EpisodeTerminatedError("env_step on a terminated episode")
        self._stepper.motor_actions[:] = 0.0
        self._stepper.thruster_actions[:] = 0.0
        budget = (self.params.horizon - self.timestep) * self.params.frame_skip
        code, steps = self._stepper.run(budget)
        env_steps = -(-steps // self.params.frame_skip)
        return self._finish_step(code, env_steps)

    def run_scripted(self, motor_seq, thruster_seq) -> tuple[float, bool]:
        """Roll the rest of the episode in one kernel call, one action row
        per env step starting at the current timestep.  Returns the summed
        reward (the dense term telescopes to its endpoints) and done."""
        if self.terminated:
            raise EpisodeTerminatedError("env_step on a terminated episode")
        remaining = self.params.horizon - self.timestep
        code, steps = self._stepper.run_sequence(
            motor_seq[self.timestep :], thruster_seq[self.timestep :],
            self.params.frame_skip, remaining * self.params.frame_skip,
        )
        env_steps = -(-steps // self.params.frame_skip)
        return self._finish_step(code, env_steps)

    def env_state(self) -> EnvState:
        return EnvState(self.sim, self.timestep, self.terminated, self.last_distance)


def env_advance(state: EnvState, action: Action, params: EnvParams, copy: bool = True):
    """Advance one environment step without building an observation.

    Returns (next_state, reward, done).  The sparse reward fires on the
    first engine sub-step with a green-blue (+1) or green-red (-1) contact,
    stopping the sub-step loop; green-blue wins if both appear on the same
    engine step.  With copy=False the input state's sim is reused in place.
    """
    action.validate(params)
    ep = Episode(
        state.sim.copy() if copy else state.sim, params,
        state.timestep, state.terminated, state.last_distance,
    )
    reward, done = ep.advance(action.motor_values, action.thruster_values)
    return ep.env_state(), reward, done


def env_step(state: EnvState, action: Action, params: EnvParams):
    """One environment step: (next_state, observation, reward, done)."""
    new_state, reward, done = env_advance(state, action, params)
    return new_state, observe(new_state, params), reward, done


# --- observations -------------------------------------------------------------


@dataclass
class EntityObservation:
    """Per-entity feature rows plus activity masks and attachment indices."""

    shapes: np.ndarray            # (num_bodies, SHAPE_FEATURES)
    shape_active: np.ndarray
    joints: np.ndarray            # (2 * num_joints, JOINT_FEATURES), from/to swapped pairs
    joint_active: np.ndarray
    joint_from: np.ndarray
    joint_to: np.ndarray
    thrusters: np.ndarray         # (num_thrusters, THRUSTER_FEATURES)
    thruster_active: np.ndarray
    thruster_body: np.ndarray


def observe_entity(state: EnvState, params: EnvParams) -> EntityObservation:
    sim = state.sim
    static = params.static
    nb, nj, nt = static.num_bodies, static.num_joints, static.num_thrusters

    shapes = np.zeros((nb, SHAPE_FEATURES), F32)
    for i in range(nb):
        if not sim.body_active[i]:
            continue
        row = shapes[i]
        row[0:2] = sim.position[i]
        row[2:4] = sim.velocity[i]
        row[4] = sim.inverse_mass[i]
        row[5] = sim.inverse_inertia[i]
        row[6] = sim.density[i]
        row[7] = np.tanh(sim.angular_velocity[i] / 10.0)
        row[8 + int(sim.role[i])] = 1.0
        row[12] = np.sin(sim.rotation[i])
        row[13] = np.cos(sim.rotation[i])
        row[14] = sim.friction[i]
        row[15] = sim.restitution[i]
        is_poly = static.is_polygon(i)
        row[16 + (0 if is_poly else 1)] = 1.0
        if is_poly:
            nv = int(sim.vertex_count[i])
            row[19 : 19 + 2 * nv] = sim.vertices[i, :nv].ravel()
            row[27 + (0 if nv == 3 else 1)] = 1.0
        else:
            row[18] = sim.radius[i]

    joints = np.zeros((2 * nj, JOINT_FEATURES), F32)
    joint_from = np.zeros(2 * nj, np.int32)
    joint_to = np.zeros(2 * nj, np.int32)
    joint_active = np.zeros(2 * nj, bool)
    for j in range(nj):
        if not sim.joint_active[j]:
            continue
        ends = (
            (int(sim.joint_body_a[j]), int(sim.joint_body_b[j]),
             sim.joint_anchor_a[j], sim.joint_anchor_b[j]),
            (int(sim.joint_body_b[j]), int(sim.joint_body_a[j]),
             sim.joint_anchor_b[j], sim.joint_anchor_a[j]),
        )
        for k, (frm, to, anchor_frm, anchor_to) in enumerate(ends):
            row = joints[2 * j + k]
            row[0] = 1.0
            row[1] = float(sim.joint_is_fixed[j])
            row[2:4] = anchor_frm
            row[4:6] = anchor_to
            row[6] = sim.motor_power[j] if sim.motor_on[j] else 0.0
            row[7] = sim.motor_speed[j] if sim.motor_on[j] else 0.0
            row[8] = float(sim.motor_always_on[j])
            colour = int(sim.joint_binding[j]) % N_BINDING_COLOURS
            row[9 + colour] = 1.0
            rel = float(sim.rotation[frm]) - float(sim.rotation[to])
            row[9 + N_BINDING_COLOURS] = np.sin(rel)
            row[10 + N_BINDING_COLOURS] = np.cos(rel)
            joint_from[2 * j + k] = frm
            joint_to[2 * j + k] = to
            joint_active[2 * j + k] = True

    thrusters = np.zeros((nt, THRUSTER_FEATURES), F32)
    thruster_active = np.zeros(nt, bool)
    thruster_body = np.zeros(nt, np.int32)
    for t in range(nt):
        if not sim.thruster_active[t]:
            continue
        body = int(sim.thruster_body[t])
        row = thrusters[t]
        row[0] = 1.0
        row[1:3] = sim.thruster_anchor[t]
        row[3] = sim.thruster_power[t]
        world = float(sim.rotation[body]) + float(sim.thruster_rotation[t])
        row[4] = np.sin(world)
        row[5] = np.cos(world)
        thruster_active[t] = True
        thruster_body[t] = body

    return EntityObservation(
        shapes=shapes,
        shape_active=sim.body_active.copy(),
        joints=joints,
        joint_active=joint_active,
        joint_from=joint_from,
        joint_to=joint_to,
        thrusters=thrusters,
        thruster_active=thruster_active,
        thruster_body=thruster_body,
    )


def flat_observation_size(static: StaticSimParams) -> int:
    return (
        static.num_bodies * SHAPE_FEATURES
        + 2 * static.num_joints * JOINT_FEATURES
        + static.num_thrusters * THRUSTER_FEATURES
    )


def observe_flat(state: EnvState, params: EnvParams) -> np.ndarray:
    """All entity rows (inactive ones zero-masked) flattened in slot order."""
    ent = observe_entity(state, params)
    return np.concatenate([ent.shapes.ravel(), ent.joints.ravel(), ent.thrusters.ravel()])


def observe(state: EnvState, params: EnvParams):
    if params.observation_mode == "entity":
        return observe_entity(state, params)
    if params.observation_mode == "flat":
        return observe_flat(state, params)
    from .render import render_pixels

    return render_pixels(state, params)
