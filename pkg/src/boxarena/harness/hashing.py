"""Canonical 64-bit digests of scene state for cross-run audits.

Active entities are serialized little-endian (slot index plus every field,
warm-start accumulators included) and fed to BLAKE2b; inactive slots never
contribute, so states differing only in deactivated garbage hash equal.
"""

from __future__ import annotations

import hashlib

import numpy as np

from ..engine import SimState, StaticSimParams


def _le(arr) -> bytes:
    a = np.asarray(arr)
    if a.dtype == np.bool_:
        a = a.astype(np.uint8)
    return a.astype(a.dtype.newbyteorder("<"), copy=False).tobytes()


def state_hash(state: SimState, static: StaticSimParams) -> str:
    """Hex digest over all active bodies, joints, thrusters and manifolds."""
    h = hashlib.blake2b(digest_size=8)
    h.update(
        np.array(
            [static.num_polygons, static.num_circles, static.num_joints, static.num_thrusters],
            "<i4",
        ).tobytes()
    )
    for i in np.flatnonzero(state.body_active):
        h.update(np.int32(i).tobytes())
        h.update(_le(state.position[i]))
        h.update(_le(state.rotation[i]))
        h.update(_le(state.velocity[i]))
        h.update(_le(state.angular_velocity[i]))
        h.update(_le(state.inverse_mass[i]))
        h.update(_le(state.inverse_inertia[i]))
        h.update(_le(state.density[i]))
        h.update(_le(state.friction[i]))
        h.update(_le(state.restitution[i]))
        h.update(_le(state.role[i]))
        h.update(_le(state.fixated[i]))
        n = int(state.vertex_count[i])
        h.update(np.int32(n).tobytes())
        if n:
            h.update(_le(state.vertices[i, :n]))
        else:
            h.update(_le(state.radius[i]))
    for j in np.flatnonzero(state.joint_active):
        h.update(np.int32(j).tobytes())
        h.update(_le(state.joint_body_a[j]))
        h.update(_le(state.joint_body_b[j]))
        h.update(_le(state.joint_anchor_a[j]))
        h.update(_le(state.joint_anchor_b[j]))
        h.update(_le(state.joint_is_fixed[j]))
        h.update(_le(state.joint_fixed_rotation[j]))
        h.update(_le(state.motor_on[j]))
        h.update(_le(state.motor_power[j]))
        h.update(_le(state.motor_speed[j]))
        h.update(_le(state.motor_always_on[j]))
        h.update(_le(state.joint_has_limits[j]))
        h.update(_le(state.joint_limit_min[j]))
        h.update(_le(state.joint_limit_max[j]))
        h.update(_le(state.joint_acc_impulse[j]))
        h.update(_le(state.joint_acc_rot_impulse[j]))
        h.update(_le(state.joint_binding[j]))
    for t in np.flatnonzero(state.thruster_active):
        h.update(np.int32(t).tobytes())
        h.update(_le(state.thruster_body[t]))
        h.update(_le(state.thruster_anchor[t]))
        h.update(_le(state.thruster_rotation[t]))
        h.update(_le(state.thruster_power[t]))
        h.update(_le(state.thruster_binding[t]))
    for s in np.flatnonzero(state.mani_active):
        h.update(np.int32(s).tobytes())
        h.update(_le(state.mani_position[s]))
        h.update(_le(state.mani_normal[s]))
        h.update(_le(state.mani_penetration[s]))
        h.update(_le(state.mani_rest_target[s]))
        h.update(_le(state.mani_acc_normal[s]))
        h.update(_le(state.mani_acc_tangent[s]))
    return h.hexdigest()


def level_hash(level) -> str:
    """Digest of a level's initial state (active entities only)."""
    return state_hash(level.initial_state, level.static_params)
