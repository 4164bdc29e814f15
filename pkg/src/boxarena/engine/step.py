"""The main engine loop.

Per step: gravity, manifold generation, motors, thrusters, warm-start
impulses, the iterated constraint solver (joints sequentially, contacts in
round-robin batches), and an Euler position/rotation update.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .state import F32, SimParams, SimState, StaticSimParams, pair_tables, slot_bodies


class SimulationDiverged(RuntimeError):
    """A committed state field became NaN or infinite."""


def _as_actions(values, count: int, name: str) -> np.ndarray:
    arr = np.zeros(count, F32) if values is None else np.asarray(values, F32)
    if arr.shape != (count,):
        raise ValueError(f"{name} must have shape ({count},), got {arr.shape}")
    return arr


def _state_args(state: SimState):
    return (
        state.body_active, state.position, state.rotation, state.velocity, state.angular_velocity,
        state.inverse_mass, state.inverse_inertia, state.friction, state.restitution, state.fixated,
        state.vertices, state.vertex_count, state.radius,
        state.joint_active, state.joint_body_a, state.joint_body_b,
        state.joint_anchor_a, state.joint_anchor_b,
        state.joint_is_fixed, state.joint_fixed_rotation,
        state.motor_on, state.motor_power, state.motor_speed, state.motor_always_on,
        state.joint_has_limits, state.joint_limit_min, state.joint_limit_max,
        state.joint_acc_impulse, state.joint_acc_rot_impulse,
        state.thruster_active, state.thruster_body, state.thruster_anchor,
        state.thruster_rotation, state.thruster_power,
        state.mani_active, state.mani_position, state.mani_normal, state.mani_penetration,
        state.mani_rest_target, state.mani_acc_normal, state.mani_acc_tangent,
    )


def _param_args(params: SimParams, static: StaticSimParams):
    pa, pb, ps, pt = pair_tables(static)
    sa, sb = slot_bodies(static)
    return (
        float(params.dt), float(params.gravity[0]), float(params.gravity[1]),
        int(params.num_solver_steps), float(params.velocity_bias_alpha),
        float(params.positional_beta), float(params.rotational_gamma),
        float(params.motor_rho), float(params.penetration_slop),
        bool(params.warm_starting), int(params.solver_batch_size),
        pa, pb, ps, pt, sa, sb,
    )


def _scratch(static: StaticSimParams):
    nb, nm = static.num_bodies, static.num_manifold_slots
    return (
        np.zeros((nb, 4, 2), F32), np.zeros((nb, 4), F32), np.zeros(nm, np.int32),
        np.zeros((nb, 2), F32), np.zeros(nb, F32), np.zeros((nb, 2), F32),
    )


_NO_SLOTS = np.zeros(0, np.int32)

EVENT_NONE = 0
EVENT_GREEN_BLUE = 1
EVENT_GREEN_RED = 2
EVENT_DIVERGED = 3


class SceneStepper:
    """Reusable stepping handle for one scene.

    Caches the kernel argument tuple (including scratch buffers and action
    buffers), so per-step Python overhead stays small in episode loops.
    The scene arrays are advanced in place.  Optional watch_green_blue /
    watch_green_red manifold-slot arrays make the kernel stop stepping as
    soon as one of those contacts becomes active.
    """

    def __init__(self, state: SimState, params: SimParams, static: StaticSimParams,
                 watch_green_blue=None, watch_green_red=None):
        self.state = state
        motor_seq = np.zeros((1, static.num_joints), F32)
        thruster_seq = np.zeros((1, static.num_thrusters), F32)
        self.motor_actions = motor_seq[0]
        self.thruster_actions = thruster_seq[0]
        gb = _NO_SLOTS if watch_green_blue is None else np.asarray(watch_green_blue, np.int32)
        gr = _NO_SLOTS if watch_green_red is None else np.asarray(watch_green_red, np.int32)
        self._head = _state_args(state) + (motor_seq, thruster_seq)
        self._tail = _param_args(params, static) + _scratch(static) + (gb, gr)

    def run(self, n_steps: int = 1) -> tuple[int, int]:
        """Advance up to n_steps with the current fixed action; returns
        (event code, steps executed)."""
        code, done = _kernels.steps_kernel(*self._head, 1, *self._tail, n_steps)
        if code == EVENT_DIVERGED:
            raise SimulationDiverged(f"non-finite state after step {done}")
        return int(code), int(done)

    def run_sequence(self, motor_seq, thruster_seq, steps_per_action: int, n_steps: int) -> tuple[int, int]:
        """Advance up to n_steps, switching action rows every
        steps_per_action engine steps (last row held past the end)."""
        code, done = _kernels.steps_kernel(
            *self._head[:-2],
            np.ascontiguousarray(motor_seq, F32), np.ascontiguousarray(thruster_seq, F32),
            steps_per_action, *self._tail, n_steps,
        )
        if code == EVENT_DIVERGED:
            raise SimulationDiverged(f"non-finite state after step {done}")
        return int(code), int(done)


def step_inplace(
    state: SimState,
    motor_actions,
    thruster_actions,
    params: SimParams,
    static: StaticSimParams,
    n_steps: int = 1,
) -> None:
    """Advance the scene in place; raises SimulationDiverged on NaN."""
    ma = _as_actions(motor_actions, static.num_joints, "motor_actions")
    ta = _as_actions(thruster_actions, static.num_thrusters, "thruster_actions")
    args = (
        _state_args(state) + (ma.reshape(1, -1), ta.reshape(1, -1), 1)
        + _param_args(params, static) + _scratch(static) + (_NO_SLOTS, _NO_SLOTS)
    )
    code, done = _kernels.steps_kernel(*args, n_steps)
    if code == EVENT_DIVERGED:
        raise SimulationDiverged(f"non-finite state after step {done}")


def step(
    state: SimState,
    motor_actions,
    thruster_actions,
    params: SimParams,
    static: StaticSimParams,
) -> SimState:
    """One engine step; returns the new state, leaving the input untouched."""
    new = state.copy()
    step_inplace(new, motor_actions, thruster_actions, params, static)
    return new


def refresh_manifolds(state: SimState, static: StaticSimParams) -> None:
    """Recompute the manifold cache from current positions without stepping.

    Used for initial-state overlap checks; warm-start matching semantics
    are identical to the in-step pass.
    """
    nb = static.num_bodies
    wverts = np.zeros((nb, 4, 2), F32)
    aabb = np.zeros((nb, 4), F32)
    pa, pb, ps, pt = pair_tables(static)
    _kernels._world_geometry(
        state.body_active, state.position, state.rotation,
        state.vertices, state.vertex_count, state.radius, wverts, aabb,
    )
    _kernels._generate_manifolds(
        state.body_active, state.position, state.rotation, state.velocity,
        state.angular_velocity, state.restitution,
        state.vertex_count, state.radius,
        state.joint_active, state.joint_body_a, state.joint_body_b,
        state.mani_active, state.mani_position, state.mani_normal, state.mani_penetration,
        state.mani_rest_target, state.mani_acc_normal, state.mani_acc_tangent,
        pa, pb, ps, pt,
        wverts, aabb,
    )
