"""Level edit operations: validated single-entity changes.

Every edit is applied to a copy of the level and re-validated; a rejected
edit names the violated invariant and leaves the level untouched.
"""

from __future__ import annotations

import numpy as np

from .. import geometry as geo
from ..engine import (
    NUM_WALLS,
    CapacityError,
    Role,
    add_circle,
    add_joint,
    add_polygon,
    add_thruster,
)
from ..engine.state import F32
from ..levelgen import Level, validation_errors

_ROLES = {"none": Role.NONE, "green": Role.GREEN, "blue": Role.BLUE, "red": Role.RED}

BODY_FIELDS = {
    "density", "friction", "restitution", "rotation", "angular_velocity",
    "velocity", "fixated", "radius",
}
JOINT_FIELDS = {
    "motor_on", "motor_power", "motor_speed", "motor_always_on",
    "is_fixed", "fixed_rotation", "has_limits", "limit_min", "limit_max", "binding",
}
THRUSTER_FIELDS = {"power", "rotation", "binding", "anchor"}


class EditRejected(ValueError):
    def __init__(self, code: str, detail: str):
        super().__init__(f"{code}: {detail}")
        self.code = code
        self.detail = detail


def _refresh_mass(state, static, slot):
    if state.fixated[slot]:
        state.inverse_mass[slot] = 0.0
        state.inverse_inertia[slot] = 0.0
        return
    density = float(state.density[slot])
    if static.is_polygon(slot):
        n = int(state.vertex_count[slot])
        mass, inertia = geo.polygon_mass_properties(state.vertices[slot, :n], density)
    else:
        mass, inertia = geo.circle_mass_properties(float(state.radius[slot]), density)
    state.inverse_mass[slot] = 1.0 / mass
    state.inverse_inertia[slot] = 1.0 / inertia


def _require(op, key):
    if key not in op:
        raise EditRejected("malformed", f"edit op missing {key!r}")
    return op[key]


def _body_slot(level, op):
    slot = _require(op, "slot")
    static = level.static_params
    if not isinstance(slot, int) or not 0 <= slot < static.num_bodies:
        raise EditRejected("malformed", f"bad body slot {slot!r}")
    if not level.initial_state.body_active[slot]:
        raise EditRejected("missing", f"body slot {slot} is not active")
    return slot


def apply_edit(level: Level, op: dict) -> Level:
    """Return a new validated Level with the edit applied.

    Raises EditRejected naming the violated invariant otherwise.
    """
    name = _require(op, "op")
    new = level.copy()
    state = new.initial_state
    static = new.static_params

    if name == "add_entity":
        kind = _require(op, "kind")
        spec = _require(op, "spec")
        try:
            if kind == "polygon":
                add_polygon(
                    state, static, np.asarray(spec["vertices"], float),
                    spec["position"], rotation=spec.get("rotation", 0.0),
                    density=spec.get("density", 1.0), friction=spec.get("friction", 0.4),
                    restitution=spec.get("restitution", 0.0),
                    role=_ROLES[spec.get("role", "none")],
                    fixated=spec.get("fixated", False),
                )
            elif kind == "circle":
                add_circle(
                    state, static, spec["radius"], spec["position"],
                    rotation=spec.get("rotation", 0.0),
                    density=spec.get("density", 1.0), friction=spec.get("friction", 0.4),
                    restitution=spec.get("restitution", 0.0),
                    role=_ROLES[spec.get("role", "none")],
                    fixated=spec.get("fixated", False),
                )
            elif kind == "joint":
                add_joint(
                    state, spec["body_a"], spec["body_b"],
                    spec["anchor_a"], spec["anchor_b"],
                    is_fixed=spec.get("is_fixed", False),
                    fixed_rotation=spec.get("fixed_rotation", 0.0),
                    motor_on=spec.get("motor_on", False),
                    motor_power=spec.get("motor_power", 1.0),
                    motor_speed=spec.get("motor_speed", 1.0),
                    motor_always_on=spec.get("motor_always_on", False),
                    has_limits=spec.get("has_limits", False),
                    limit_min=spec.get("limit_min", 0.0),
                    limit_max=spec.get("limit_max", 0.0),
                    binding=spec.get("binding", 0),
                )
            elif kind == "thruster":
                add_thruster(
                    state, spec["body"], spec["anchor"], spec.get("rotation", 0.0),
                    power=spec.get("power", 1.0), binding=spec.get("binding", 0),
                )
            else:
                raise EditRejected("malformed", f"unknown entity kind {kind!r}")
        except CapacityError as exc:
            raise EditRejected("capacity", str(exc)) from None
        except (KeyError, ValueError, TypeError, IndexError) as exc:
            raise EditRejected("malformed", str(exc)) from None

    elif name == "delete_entity":
        kind = _require(op, "kind")
        slot = _require(op, "slot")
        if kind == "body":
            if not isinstance(slot, int) or not NUM_WALLS <= slot < static.num_bodies:
                raise EditRejected("malformed", "walls cannot be deleted")
            if not state.body_active[slot]:
                raise EditRejected("missing", f"body slot {slot} is not active")
            state.body_active[slot] = False
            for j in range(static.num_joints):
                if state.joint_active[j] and slot in (
                    int(state.joint_body_a[j]), int(state.joint_body_b[j])
                ):
                    state.joint_active[j] = False
            for t in range(static.num_thrusters):
                if state.thruster_active[t] and int(state.thruster_body[t]) == slot:
                    state.thruster_active[t] = False
        elif kind == "joint":
            if not (isinstance(slot, int) and 0 <= slot < static.num_joints and state.joint_active[slot]):
                raise EditRejected("missing", f"no active joint in slot {slot!r}")
            state.joint_active[slot] = False
        elif kind == "thruster":
            if not (
                isinstance(slot, int)
                and 0 <= slot < static.num_thrusters
                and state.thruster_active[slot]
            ):
                raise EditRejected("missing", f"no active thruster in slot {slot!r}")
            state.thruster_active[slot] = False
        else:
            raise EditRejected("malformed", f"unknown entity kind {kind!r}")

    elif name == "set_role":
        slot = _body_slot(new, op)
        role = _require(op, "role")
        if role not in _ROLES:
            raise EditRejected("malformed", f"unknown role {role!r}")
        state.role[slot] = int(_ROLES[role])

    elif name == "move":
        slot = _body_slot(new, op)
        position = _require(op, "position")
        try:
            state.position[slot] = np.asarray(position, F32)
        except (ValueError, TypeError) as exc:
            raise EditRejected("malformed", str(exc)) from None
        if "rotation" in op:
            state.rotation[slot] = float(op["rotation"])

    elif name == "set_field":
        kind = _require(op, "kind")
        field = _require(op, "field")
        value = _require(op, "value")
        slot = _require(op, "slot")
        try:
            if kind == "body":
                slot = _body_slot(new, op)
                if field not in BODY_FIELDS:
                    raise EditRejected("malformed", f"field {field!r} is not editable")
                if field == "velocity":
                    state.velocity[slot] = np.asarray(value, F32)
                elif field == "fixated":
                    state.fixated[slot] = bool(value)
                    _refresh_mass(state, static, slot)
                elif field == "radius":
                    if static.is_polygon(slot):
                        raise EditRejected("malformed", "radius only applies to circles")
                    if not value > 0:
                        raise EditRejected("malformed", "radius must be positive")
                    state.radius[slot] = float(value)
                    _refresh_mass(state, static, slot)
                else:
                    getattr(state, field)[slot] = float(value)
                    if field == "density":
                        _refresh_mass(state, static, slot)
            elif kind == "joint":
                if not (isinstance(slot, int) and 0 <= slot < static.num_joints and state.joint_active[slot]):
                    raise EditRejected("missing", f"no active joint in slot {slot!r}")
                if field not in JOINT_FIELDS:
                    raise EditRejected("malformed", f"field {field!r} is not editable")
                attr = {
                    "is_fixed": "joint_is_fixed",
                    "fixed_rotation": "joint_fixed_rotation",
                    "has_limits": "joint_has_limits",
                    "limit_min": "joint_limit_min",
                    "limit_max": "joint_limit_max",
                    "binding": "joint_binding",
                }.get(field, field)
                getattr(state, attr)[slot] = value
            elif kind == "thruster":
                if not (
                    isinstance(slot, int)
                    and 0 <= slot < static.num_thrusters
                    and state.thruster_active[slot]
                ):
                    raise EditRejected("missing", f"no active thruster in slot {slot!r}")
                if field not in THRUSTER_FIELDS:
                    raise EditRejected("malformed", f"field {field!r} is not editable")
                if field == "anchor":
                    state.thruster_anchor[slot] = np.asarray(value, F32)
                else:
                    getattr(state, "thruster_" + field)[slot] = value
            else:
                raise EditRejected("malformed", f"unknown entity kind {kind!r}")
        except EditRejected:
            raise
        except (ValueError, TypeError) as exc:
            raise EditRejected("malformed", str(exc)) from None

    else:
        raise EditRejected("malformed", f"unknown edit op {name!r}")

    errors = validation_errors(new)
    if errors:
        raise EditRejected("invariant", errors[0])
    return new
