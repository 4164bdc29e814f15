"""Level file format: one JSON document per level.

Numbers are written through Python floats (shortest round-trip decimal),
which is lossless for the engine's 32-bit values.  Only active entities
are stored, each with its slot; inverse mass/inertia may be omitted and
are then recomputed from density and shape.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import geometry as geo
from .engine import Role, SimState, add_joint, add_thruster, static_for_class
from .engine.state import F32
from .levelgen import Level, validation_errors

FORMAT_TAG = "boxarena-level"
FORMAT_VERSION = 1

_ROLE_NAMES = {Role.NONE: "none", Role.GREEN: "green", Role.BLUE: "blue", Role.RED: "red"}
_ROLE_VALUES = {v: k for k, v in _ROLE_NAMES.items()}


class LevelParseError(ValueError):
    """Malformed or invariant-violating level document."""

    def __init__(self, path: str, detail: str):
        super().__init__(f"{path}: {detail}")
        self.path = path
        self.detail = detail


def _vec(v) -> list[float]:
    return [float(v[0]), float(v[1])]


def serialize(level: Level) -> bytes:
    state = level.initial_state
    static = level.static_params
    bodies = []
    for i in range(static.num_bodies):
        if not state.body_active[i]:
            continue
        entry = {"slot": i}
        if static.is_polygon(i):
            n = int(state.vertex_count[i])
            entry["shape"] = {
                "kind": "polygon",
                "vertices": [_vec(v) for v in state.vertices[i, :n]],
            }
        else:
            entry["shape"] = {"kind": "circle", "radius": float(state.radius[i])}
        entry.update(
            position=_vec(state.position[i]),
            rotation=float(state.rotation[i]),
            velocity=_vec(state.velocity[i]),
            angular_velocity=float(state.angular_velocity[i]),
            inverse_mass=float(state.inverse_mass[i]),
            inverse_inertia=float(state.inverse_inertia[i]),
            density=float(state.density[i]),
            friction=float(state.friction[i]),
            restitution=float(state.restitution[i]),
            role=_ROLE_NAMES[Role(int(state.role[i]))],
            fixated=bool(state.fixated[i]),
        )
        bodies.append(entry)

    joints = []
    for j in range(static.num_joints):
        if not state.joint_active[j]:
            continue
        joints.append(
            {
                "slot": j,
                "body_a": int(state.joint_body_a[j]),
                "body_b": int(state.joint_body_b[j]),
                "anchor_a": _vec(state.joint_anchor_a[j]),
                "anchor_b": _vec(state.joint_anchor_b[j]),
                "is_fixed": bool(state.joint_is_fixed[j]),
                "fixed_rotation": float(state.joint_fixed_rotation[j]),
                "motor_on": bool(state.motor_on[j]),
                "motor_power": float(state.motor_power[j]),
                "motor_speed": float(state.motor_speed[j]),
                "motor_always_on": bool(state.motor_always_on[j]),
                "has_limits": bool(state.joint_has_limits[j]),
                "limit_min": float(state.joint_limit_min[j]),
                "limit_max": float(state.joint_limit_max[j]),
                "binding": int(state.joint_binding[j]),
            }
        )

    thrusters = []
    for t in range(static.num_thrusters):
        if not state.thruster_active[t]:
            continue
        thrusters.append(
            {
                "slot": t,
                "body": int(state.thruster_body[t]),
                "anchor": _vec(state.thruster_anchor[t]),
                "rotation": float(state.thruster_rotation[t]),
                "power": float(state.thruster_power[t]),
                "binding": int(state.thruster_binding[t]),
            }
        )

    doc = {
        "format": FORMAT_TAG,
        "version": FORMAT_VERSION,
        "name": level.name,
        "size_class": level.size_class,
        "bodies": bodies,
        "joints": joints,
        "thrusters": thrusters,
    }
    return (json.dumps(doc, indent=2) + "\n").encode()


def _get(obj, key, kind, path, optional=False, default=None):
    if key not in obj:
        if optional:
            return default
        raise LevelParseError(f"{path}.{key}", "missing field")
    val = obj[key]
    if kind is float and isinstance(val, (int, float)) and not isinstance(val, bool):
        return float(val)
    if kind is int and isinstance(val, int) and not isinstance(val, bool):
        return val
    if kind is bool and isinstance(val, bool):
        return val
    if kind is str and isinstance(val, str):
        return val
    if kind is list and isinstance(val, list):
        return val
    if kind is dict and isinstance(val, dict):
        return val
    raise LevelParseError(f"{path}.{key}", f"expected {kind.__name__}, got {type(val).__name__}")


def _get_vec(obj, key, path):
    raw = _get(obj, key, list, path)
    if len(raw) != 2 or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in raw):
        raise LevelParseError(f"{path}.{key}", "expected a pair of numbers")
    return np.array(raw, F32)


def deserialize(data: bytes | str) -> Level:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise LevelParseError("$", f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise LevelParseError("$", "document must be a JSON object")
    if _get(doc, "format", str, "$") != FORMAT_TAG:
        raise LevelParseError("$.format", f"expected {FORMAT_TAG!r}")
    version = _get(doc, "version", int, "$")
    if version != FORMAT_VERSION:
        raise LevelParseError("$.version", f"unsupported version {version}, expected {FORMAT_VERSION}")
    name = _get(doc, "name", str, "$")
    size_class = _get(doc, "size_class", str, "$")
    try:
        static = static_for_class(size_class)
    except ValueError as exc:
        raise LevelParseError("$.size_class", str(exc)) from None

    state = SimState.zeros(static)
    for n, entry in enumerate(_get(doc, "bodies", list, "$")):
        path = f"$.bodies[{n}]"
        if not isinstance(entry, dict):
            raise LevelParseError(path, "expected an object")
        slot = _get(entry, "slot", int, path)
        if not 0 <= slot < static.num_bodies:
            raise LevelParseError(f"{path}.slot", f"out of range 0..{static.num_bodies - 1}")
        if state.body_active[slot]:
            raise LevelParseError(f"{path}.slot", f"slot {slot} used twice")
        shape = _get(entry, "shape", dict, path)
        kind = _get(shape, "kind", str, f"{path}.shape")
        is_poly_slot = static.is_polygon(slot)
        if kind == "polygon":
            if not is_poly_slot:
                raise LevelParseError(f"{path}.slot", "polygon stored in a circle slot")
            raw = _get(shape, "vertices", list, f"{path}.shape")
            if not 3 <= len(raw) <= 4:
                raise LevelParseError(f"{path}.shape.vertices", "need 3 or 4 vertices")
            try:
                verts = np.array(raw, np.float64)
            except (ValueError, TypeError) as exc:
                raise LevelParseError(f"{path}.shape.vertices", str(exc)) from None
            if verts.shape != (len(raw), 2):
                raise LevelParseError(f"{path}.shape.vertices", "vertices must be [x, y] pairs")
            # rewind clockwise input, but never re-center: stored vertices
            # round-trip bit-exactly
            if geo.signed_area(verts) < 0:
                verts = verts[::-1].copy()
            if not geo.is_convex_ccw(verts):
                raise LevelParseError(f"{path}.shape.vertices", "polygon is concave or degenerate")
            if np.abs(geo.vertex_centroid(verts)).max() > 1e-4:
                raise LevelParseError(
                    f"{path}.shape.vertices", "vertex centroid must be at the body origin"
                )
        elif kind == "circle":
            if is_poly_slot:
                raise LevelParseError(f"{path}.slot", "circle stored in a polygon slot")
            radius = _get(shape, "radius", float, f"{path}.shape")
            if not (np.isfinite(radius) and radius > 0):
                raise LevelParseError(f"{path}.shape.radius", "must be finite and positive")
        else:
            raise LevelParseError(f"{path}.shape.kind", f"unknown shape kind {kind!r}")

        role_name = _get(entry, "role", str, path, optional=True, default="none")
        if role_name not in _ROLE_VALUES:
            raise LevelParseError(f"{path}.role", f"unknown role {role_name!r}")
        density = _get(entry, "density", float, path)
        if density <= 0:
            raise LevelParseError(f"{path}.density", "must be positive")
        fixated = _get(entry, "fixated", bool, path, optional=True, default=False)

        state.body_active[slot] = True
        state.position[slot] = _get_vec(entry, "position", path)
        state.rotation[slot] = _get(entry, "rotation", float, path)
        state.velocity[slot] = _get_vec(entry, "velocity", path)
        state.angular_velocity[slot] = _get(entry, "angular_velocity", float, path)
        state.density[slot] = density
        state.friction[slot] = _get(entry, "friction", float, path)
        state.restitution[slot] = _get(entry, "restitution", float, path)
        state.role[slot] = int(_ROLE_VALUES[role_name])
        state.fixated[slot] = fixated
        if kind == "polygon":
            state.vertex_count[slot] = len(verts)
            state.vertices[slot, : len(verts)] = verts.astype(F32)
        else:
            state.radius[slot] = radius

        if fixated:
            mass_inv, inertia_inv = 0.0, 0.0
        else:
            if kind == "polygon":
                mass, inertia = geo.polygon_mass_properties(
                    state.vertices[slot, : state.vertex_count[slot]], density
                )
            else:
                mass, inertia = geo.circle_mass_properties(radius, density)
            mass_inv, inertia_inv = 1.0 / mass, 1.0 / inertia
        stored_im = _get(entry, "inverse_mass", float, path, optional=True)
        stored_ii = _get(entry, "inverse_inertia", float, path, optional=True)
        state.inverse_mass[slot] = mass_inv if stored_im is None else stored_im
        state.inverse_inertia[slot] = inertia_inv if stored_ii is None else stored_ii
        if stored_im is not None and not fixated:
            if stored_im <= 0 or abs(stored_im - mass_inv) > 0.02 * mass_inv:
                raise LevelParseError(
                    f"{path}.inverse_mass", "inconsistent with density and shape geometry"
                )

    for n, entry in enumerate(_get(doc, "joints", list, "$")):
        path = f"$.joints[{n}]"
        if not isinstance(entry, dict):
            raise LevelParseError(path, "expected an object")
        slot = _get(entry, "slot", int, path)
        if not 0 <= slot < static.num_joints:
            raise LevelParseError(f"{path}.slot", f"out of range 0..{static.num_joints - 1}")
        if state.joint_active[slot]:
            raise LevelParseError(f"{path}.slot", f"slot {slot} used twice")
        try:
            add_joint(
                state,
                _get(entry, "body_a", int, path),
                _get(entry, "body_b", int, path),
                _get_vec(entry, "anchor_a", path),
                _get_vec(entry, "anchor_b", path),
                is_fixed=_get(entry, "is_fixed", bool, path, optional=True, default=False),
                fixed_rotation=_get(entry, "fixed_rotation", float, path, optional=True, default=0.0),
                motor_on=_get(entry, "motor_on", bool, path, optional=True, default=False),
                motor_power=_get(entry, "motor_power", float, path, optional=True, default=0.0),
                motor_speed=_get(entry, "motor_speed", float, path, optional=True, default=0.0),
                motor_always_on=_get(entry, "motor_always_on", bool, path, optional=True, default=False),
                has_limits=_get(entry, "has_limits", bool, path, optional=True, default=False),
                limit_min=_get(entry, "limit_min", float, path, optional=True, default=0.0),
                limit_max=_get(entry, "limit_max", float, path, optional=True, default=0.0),
                binding=_get(entry, "binding", int, path, optional=True, default=0),
                slot=slot,
            )
        except (ValueError, IndexError) as exc:
            raise LevelParseError(path, str(exc)) from None

    for n, entry in enumerate(_get(doc, "thrusters", list, "$")):
        path = f"$.thrusters[{n}]"
        if not isinstance(entry, dict):
            raise LevelParseError(path, "expected an object")
        slot = _get(entry, "slot", int, path)
        if not 0 <= slot < static.num_thrusters:
            raise LevelParseError(f"{path}.slot", f"out of range 0..{static.num_thrusters - 1}")
        if state.thruster_active[slot]:
            raise LevelParseError(f"{path}.slot", f"slot {slot} used twice")
        try:
            add_thruster(
                state,
                _get(entry, "body", int, path),
                _get_vec(entry, "anchor", path),
                _get(entry, "rotation", float, path),
                power=_get(entry, "power", float, path, optional=True, default=1.0),
                binding=_get(entry, "binding", int, path, optional=True, default=0),
                slot=slot,
            )
        except (ValueError, IndexError) as exc:
            raise LevelParseError(path, str(exc)) from None

    level = Level(static_params=static, initial_state=state, name=name, size_class=size_class)
    errors = validation_errors(level)
    if errors:
        raise LevelParseError("$", "invariant violation: " + "; ".join(errors))
    return level


def save_level(level: Level, path) -> None:
    Path(path).write_bytes(serialize(level))


def load_level(path) -> Level:
    return deserialize(Path(path).read_bytes())
