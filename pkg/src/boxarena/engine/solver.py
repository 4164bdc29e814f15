"""Public per-constraint operations.

These are the building blocks the step loop composes.  Each returns an
updated copy of the state; the fused kernel in step.py runs the same
underlying routines in place.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .state import F32, CollisionManifold, Joint, SimParams, SimState


def apply_impulse(state: SimState, body_index: int, contact_point, impulse) -> SimState:
    """Velocity change of one body from an impulse at a world-space point."""
    assert state.body_active[body_index], "impulse applied to inactive body"
    new = state.copy()
    p = np.asarray(contact_point, np.float64)
    j = np.asarray(impulse, np.float64)
    _kernels._apply_impulse(
        new.position, new.velocity, new.angular_velocity,
        new.inverse_mass, new.inverse_inertia,
        body_index, p[0], p[1], j[0], j[1],
    )
    return new


def resolve_collision(
    state: SimState,
    manifold: CollisionManifold,
    params: SimParams,
    apply_positional_correction: bool = True,
) -> tuple[SimState, CollisionManifold]:
    """One sequential-impulse resolution of a contact.

    Clamps the accumulated impulses (normal >= 0, tangent to the friction
    cone) and applies only the delta, so repeated calls converge and warm
    starting stays stable.  Inactive manifolds are identity.
    """
    new = state.copy()
    if not manifold.active:
        return new, CollisionManifold(**vars(manifold))
    a, b = manifold.body_a, manifold.body_b
    (
        acc_n, acc_t, dvax, dvay, dwa, dvbx, dvby, dwb, dpax, dpay, dpbx, dpby
    ) = _kernels._contact_deltas(
        new.position, new.velocity, new.angular_velocity,
        new.inverse_mass, new.inverse_inertia, new.friction,
        a, b,
        float(manifold.position[0]), float(manifold.position[1]),
        float(manifold.normal[0]), float(manifold.normal[1]),
        manifold.penetration, manifold.restitution_velocity_target,
        manifold.accumulated_normal_impulse, manifold.accumulated_tangent_impulse,
        params.velocity_bias_alpha, params.positional_beta,
        params.penetration_slop, apply_positional_correction,
    )
    new.velocity[a] += np.array([dvax, dvay], F32)
    new.velocity[b] += np.array([dvbx, dvby], F32)
    new.angular_velocity[a] += F32(dwa)
    new.angular_velocity[b] += F32(dwb)
    new.position[a] += np.array([dpax, dpay], F32)
    new.position[b] += np.array([dpbx, dpby], F32)
    out = CollisionManifold(**vars(manifold))
    out.accumulated_normal_impulse = float(acc_n)
    out.accumulated_tangent_impulse = float(acc_t)
    return new, out


def resolve_revolute_position(
    state: SimState,
    joint_index: int,
    params: SimParams,
    apply_positional_correction: bool = True,
) -> tuple[SimState, Joint]:
    """Impulse zeroing the relative velocity of the two anchor points."""
    new = state.copy()
    if new.joint_active[joint_index]:
        _kernels._solve_revolute(
            new.position, new.rotation, new.velocity, new.angular_velocity,
            new.inverse_mass, new.inverse_inertia,
            new.joint_body_a, new.joint_body_b,
            new.joint_anchor_a, new.joint_anchor_b, new.joint_acc_impulse,
            joint_index, params.velocity_bias_alpha, params.positional_beta,
            apply_positional_correction,
        )
    return new, new.get_joint(joint_index)


def resolve_fixed_rotation(state: SimState, joint_index: int, params: SimParams) -> tuple[SimState, Joint]:
    """Angular impulse locking the relative rotation of a fixed joint."""
    new = state.copy()
    if new.joint_active[joint_index] and new.joint_is_fixed[joint_index]:
        _kernels._solve_fixed_rotation(
            new.rotation, new.angular_velocity, new.inverse_inertia,
            new.joint_body_a, new.joint_body_b,
            new.joint_fixed_rotation, new.joint_acc_rot_impulse,
            joint_index, params.rotational_gamma,
        )
    return new, new.get_joint(joint_index)


def resolve_joint_limit(state: SimState, joint_index: int, params: SimParams) -> tuple[SimState, Joint]:
    """Angular impulse pushing a revolute joint back inside its rotation range.

    Not applied when the relative angular velocity is already restoring the
    limit, and never warm started.
    """
    new = state.copy()
    if (
        new.joint_active[joint_index]
        and new.joint_has_limits[joint_index]
        and not new.joint_is_fixed[joint_index]
    ):
        _kernels._solve_joint_limit(
            new.rotation, new.angular_velocity, new.inverse_inertia,
            new.joint_body_a, new.joint_body_b,
            new.joint_limit_min, new.joint_limit_max,
            joint_index, params.rotational_gamma,
        )
    return new, new.get_joint(joint_index)


def apply_motor(state: SimState, joint_index: int, action: float, params: SimParams) -> SimState:
    """Motor torque impulse; drives the relative angular velocity toward
    motor_speed * action, with the power tapering near the target."""
    new = state.copy()
    if not (new.joint_active[joint_index] and new.motor_on[joint_index]):
        return new
    if new.motor_always_on[joint_index]:
        action = 1.0
    action = min(1.0, max(-1.0, float(action)))
    _kernels._apply_motor(
        new.angular_velocity, new.inverse_inertia,
        new.joint_body_a, new.joint_body_b, new.motor_power, new.motor_speed,
        joint_index, action, params.motor_rho,
    )
    return new


def apply_thruster(state: SimState, thruster_index: int, action: float, params: SimParams) -> SimState:
    """Impulse power * action * dt at the thruster's world anchor, along its
    world-space facing direction."""
    new = state.copy()
    if not new.thruster_active[thruster_index]:
        return new
    action = min(1.0, max(0.0, float(action)))
    _kernels._apply_thruster(
        new.position, new.rotation, new.velocity, new.angular_velocity,
        new.inverse_mass, new.inverse_inertia,
        new.thruster_body, new.thruster_anchor, new.thruster_rotation, new.thruster_power,
        thruster_index, action, params.dt,
    )
    return new
