"""Fixed-capacity scene state.

A scene is a set of flat numpy arrays (one per field) with boolean
activity masks, so that every scene of a given size class runs the exact
same computation regardless of which entities exist.  Bodies are laid out
polygons first, then circles; the four fixated arena walls occupy polygon
slots 0..3.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, fields
from functools import lru_cache

import numpy as np

from .. import geometry as geo

F32 = np.float32

ARENA_SIZE = 5.0
WALL_HALF_THICKNESS = 0.5
NUM_WALLS = 4


class Role(enum.IntEnum):
    NONE = 0
    GREEN = 1
    BLUE = 2
    RED = 3


class ShapeKind(enum.IntEnum):
    POLYGON = 0
    CIRCLE = 1


@dataclass(frozen=True)
class StaticSimParams:
    """Arena capacities, fixed for the lifetime of a scene.

    ``num_polygons`` includes the 4 wall slots.
    """

    num_polygons: int = 10
    num_circles: int = 3
    num_joints: int = 2
    num_thrusters: int = 2

    @property
    def num_bodies(self) -> int:
        return self.num_polygons + self.num_circles

    def is_polygon(self, body_index: int) -> bool:
        return body_index < self.num_polygons

    @property
    def num_manifold_slots(self) -> int:
        np_, nc = self.num_polygons, self.num_circles
        return np_ * (np_ - 1) + np_ * nc + nc * (nc - 1) // 2


# Size classes: free polygons beyond the 4 walls are 5/6/12.
SIZE_CLASSES: dict[str, StaticSimParams] = {
    "S": StaticSimParams(5 + NUM_WALLS, 2, 1, 1),
    "M": StaticSimParams(6 + NUM_WALLS, 3, 2, 2),
    "L": StaticSimParams(12 + NUM_WALLS, 4, 6, 2),
}


def static_for_class(size_class: str) -> StaticSimParams:
    try:
        return SIZE_CLASSES[size_class]
    except KeyError:
        raise ValueError(f"unknown size class {size_class!r}; expected one of {sorted(SIZE_CLASSES)}")


@lru_cache(maxsize=None)
def pair_tables(static: StaticSimParams) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Body-pair enumeration backing the manifold cache.

    Returns (pair_a, pair_b, pair_slot, pair_type) int32 arrays, one entry
    per unordered body pair.  Polygon-polygon pairs own two consecutive
    manifold slots starting at pair_slot; other pairs own one.
    pair_type: 0 = poly-poly, 1 = poly-circle, 2 = circle-circle.
    """
    np_, nc = static.num_polygons, static.num_circles
    a, b, slot, kind = [], [], [], []
    s = 0
    for i in range(np_):
        for j in range(i + 1, np_):
            a.append(i); b.append(j); slot.append(s); kind.append(0)
            s += 2
    for i in range(np_):
        for j in range(nc):
            a.append(i); b.append(np_ + j); slot.append(s); kind.append(1)
            s += 1
    for i in range(nc):
        for j in range(i + 1, nc):
            a.append(np_ + i); b.append(np_ + j); slot.append(s); kind.append(2)
            s += 1
    assert s == static.num_manifold_slots
    mk = lambda x: np.asarray(x, dtype=np.int32)
    return mk(a), mk(b), mk(slot), mk(kind)


@lru_cache(maxsize=None)
def slot_bodies(static: StaticSimParams) -> tuple[np.ndarray, np.ndarray]:
    """(slot_a, slot_b) int32 arrays mapping each manifold slot to its bodies."""
    pa, pb, ps, pt = pair_tables(static)
    slot_a = np.zeros(static.num_manifold_slots, np.int32)
    slot_b = np.zeros(static.num_manifold_slots, np.int32)
    for a, b, s, t in zip(pa, pb, ps, pt):
        n = 2 if t == 0 else 1
        slot_a[s : s + n] = a
        slot_b[s : s + n] = b
    return slot_a, slot_b


@dataclass
class SimParams:
    """Tunable solver coefficients; defaults calibrated for dt = 1/60."""

    dt: float = 1.0 / 60.0
    gravity: np.ndarray = field(default_factory=lambda: np.array([0.0, -9.8], F32))
    num_solver_steps: int = 10
    velocity_bias_alpha: float = 12.0      # 0.2 / dt, units 1/s
    positional_beta: float = 0.2           # unitless, in [0, 1]
    rotational_gamma: float = 60.0         # 1.0 / dt, units 1/s
    motor_rho: float = 0.3
    warm_starting: bool = True
    solver_batch_size: int = 16
    penetration_slop: float = 0.002        # world units; corrections act on
                                           # penetration beyond this, letting
                                           # stacks rest without pumping apart

    def __post_init__(self):
        self.gravity = np.asarray(self.gravity, dtype=F32)
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.num_solver_steps < 1:
            raise ValueError("num_solver_steps must be >= 1")
        if not 0.0 <= self.positional_beta <= 1.0:
            raise ValueError("positional_beta must be in [0, 1]")
        if self.solver_batch_size < 1:
            raise ValueError("solver_batch_size must be >= 1")


@dataclass
class RigidBody:
    """Slot-view of a single body; see SimState for the backing arrays."""

    active: bool
    shape_kind: ShapeKind
    position: np.ndarray
    rotation: float
    velocity: np.ndarray
    angular_velocity: float
    inverse_mass: float
    inverse_inertia: float
    density: float
    friction: float
    restitution: float
    role: Role
    fixated: bool
    vertices: np.ndarray | None = None   # (vertex_count, 2), polygons only
    radius: float = 0.0                  # circles only


@dataclass
class Joint:
    active: bool
    body_a: int
    body_b: int
    anchor_a: np.ndarray
    anchor_b: np.ndarray
    is_fixed: bool = False
    fixed_rotation: float = 0.0
    motor_on: bool = False
    motor_power: float = 0.0
    motor_speed: float = 0.0
    motor_always_on: bool = False
    has_limits: bool = False
    limit_min: float = 0.0
    limit_max: float = 0.0
    accumulated_impulse: np.ndarray = field(default_factory=lambda: np.zeros(2, F32))
    accumulated_rotational_impulse: float = 0.0
    binding: int = 0


@dataclass
class Thruster:
    active: bool
    body: int
    anchor: np.ndarray
    rotation: float
    power: float
    binding: int = 0


@dataclass
class CollisionManifold:
    """Contact record; penetration > 0 means an active collision."""

    active: bool
    position: np.ndarray
    normal: np.ndarray
    penetration: float
    body_a: int
    body_b: int
    restitution_velocity_target: float = 0.0
    accumulated_normal_impulse: float = 0.0
    accumulated_tangent_impulse: float = 0.0


_ARRAY_SPECS = [
    # bodies
    ("body_active", "(nb,)", np.bool_),
    ("position", "(nb,2)", F32),
    ("rotation", "(nb,)", F32),
    ("velocity", "(nb,2)", F32),
    ("angular_velocity", "(nb,)", F32),
    ("inverse_mass", "(nb,)", F32),
    ("inverse_inertia", "(nb,)", F32),
    ("density", "(nb,)", F32),
    ("friction", "(nb,)", F32),
    ("restitution", "(nb,)", F32),
    ("role", "(nb,)", np.int32),
    ("fixated", "(nb,)", np.bool_),
    ("vertices", "(nb,4,2)", F32),
    ("vertex_count", "(nb,)", np.int32),
    ("radius", "(nb,)", F32),
    # joints
    ("joint_active", "(nj,)", np.bool_),
    ("joint_body_a", "(nj,)", np.int32),
    ("joint_body_b", "(nj,)", np.int32),
    ("joint_anchor_a", "(nj,2)", F32),
    ("joint_anchor_b", "(nj,2)", F32),
    ("joint_is_fixed", "(nj,)", np.bool_),
    ("joint_fixed_rotation", "(nj,)", F32),
    ("motor_on", "(nj,)", np.bool_),
    ("motor_power", "(nj,)", F32),
    ("motor_speed", "(nj,)", F32),
    ("motor_always_on", "(nj,)", np.bool_),
    ("joint_has_limits", "(nj,)", np.bool_),
    ("joint_limit_min", "(nj,)", F32),
    ("joint_limit_max", "(nj,)", F32),
    ("joint_acc_impulse", "(nj,2)", F32),
    ("joint_acc_rot_impulse", "(nj,)", F32),
    ("joint_binding", "(nj,)", np.int32),
    # thrusters
    ("thruster_active", "(nt,)", np.bool_),
    ("thruster_body", "(nt,)", np.int32),
    ("thruster_anchor", "(nt,2)", F32),
    ("thruster_rotation", "(nt,)", F32),
    ("thruster_power", "(nt,)", F32),
    ("thruster_binding", "(nt,)", np.int32),
    # manifold cache, one row per slot (see pair_tables)
    ("mani_active", "(nm,)", np.bool_),
    ("mani_position", "(nm,2)", F32),
    ("mani_normal", "(nm,2)", F32),
    ("mani_penetration", "(nm,)", F32),
    ("mani_rest_target", "(nm,)", F32),
    ("mani_acc_normal", "(nm,)", F32),
    ("mani_acc_tangent", "(nm,)", F32),
]


def _shape(spec: str, static: StaticSimParams) -> tuple[int, ...]:
    dims = {
        "nb": static.num_bodies,
        "nj": static.num_joints,
        "nt": static.num_thrusters,
        "nm": static.num_manifold_slots,
    }
    parts = spec.strip("()").split(",")
    return tuple(dims[p] if p in dims else int(p) for p in parts if p)


@dataclass
class SimState:
    """Complete dynamical state of one scene, as a bag of flat arrays."""

    # populated programmatically from _ARRAY_SPECS
    body_active: np.ndarray
    position: np.ndarray
    rotation: np.ndarray
    velocity: np.ndarray
    angular_velocity: np.ndarray
    inverse_mass: np.ndarray
    inverse_inertia: np.ndarray
    density: np.ndarray
    friction: np.ndarray
    restitution: np.ndarray
    role: np.ndarray
    fixated: np.ndarray
    vertices: np.ndarray
    vertex_count: np.ndarray
    radius: np.ndarray
    joint_active: np.ndarray
    joint_body_a: np.ndarray
    joint_body_b: np.ndarray
    joint_anchor_a: np.ndarray
    joint_anchor_b: np.ndarray
    joint_is_fixed: np.ndarray
    joint_fixed_rotation: np.ndarray
    motor_on: np.ndarray
    motor_power: np.ndarray
    motor_speed: np.ndarray
    motor_always_on: np.ndarray
    joint_has_limits: np.ndarray
    joint_limit_min: np.ndarray
    joint_limit_max: np.ndarray
    joint_acc_impulse: np.ndarray
    joint_acc_rot_impulse: np.ndarray
    joint_binding: np.ndarray
    thruster_active: np.ndarray
    thruster_body: np.ndarray
    thruster_anchor: np.ndarray
    thruster_rotation: np.ndarray
    thruster_power: np.ndarray
    thruster_binding: np.ndarray
    mani_active: np.ndarray
    mani_position: np.ndarray
    mani_normal: np.ndarray
    mani_penetration: np.ndarray
    mani_rest_target: np.ndarray
    mani_acc_normal: np.ndarray
    mani_acc_tangent: np.ndarray

    @classmethod
    def zeros(cls, static: StaticSimParams) -> "SimState":
        return cls(**{name: np.zeros(_shape(spec, static), dtype) for name, spec, dtype in _ARRAY_SPECS})

    def copy(self) -> "SimState":
        return SimState(**{f.name: getattr(self, f.name).copy() for f in fields(self)})

    def equals(self, other: "SimState") -> bool:
        return all(np.array_equal(getattr(self, f.name), getattr(other, f.name)) for f in fields(self))

    @property
    def num_bodies(self) -> int:
        return len(self.body_active)

    def clear_accumulators(self) -> None:
        """Wipe every warm-start cache (fresh, unstepped scene)."""
        self.mani_active[:] = False
        self.mani_position[:] = 0
        self.mani_normal[:] = 0
        self.mani_penetration[:] = 0
        self.mani_rest_target[:] = 0
        self.mani_acc_normal[:] = 0
        self.mani_acc_tangent[:] = 0
        self.joint_acc_impulse[:] = 0
        self.joint_acc_rot_impulse[:] = 0

    # slot views -----------------------------------------------------------

    def get_body(self, i: int, static: StaticSimParams) -> RigidBody:
        is_poly = static.is_polygon(i)
        return RigidBody(
            active=bool(self.body_active[i]),
            shape_kind=ShapeKind.POLYGON if is_poly else ShapeKind.CIRCLE,
            position=self.position[i].copy(),
            rotation=float(self.rotation[i]),
            velocity=self.velocity[i].copy(),
            angular_velocity=float(self.angular_velocity[i]),
            inverse_mass=float(self.inverse_mass[i]),
            inverse_inertia=float(self.inverse_inertia[i]),
            density=float(self.density[i]),
            friction=float(self.friction[i]),
            restitution=float(self.restitution[i]),
            role=Role(int(self.role[i])),
            fixated=bool(self.fixated[i]),
            vertices=self.vertices[i, : self.vertex_count[i]].copy() if is_poly else None,
            radius=float(self.radius[i]),
        )

    def get_joint(self, j: int) -> Joint:
        return Joint(
            active=bool(self.joint_active[j]),
            body_a=int(self.joint_body_a[j]),
            body_b=int(self.joint_body_b[j]),
            anchor_a=self.joint_anchor_a[j].copy(),
            anchor_b=self.joint_anchor_b[j].copy(),
            is_fixed=bool(self.joint_is_fixed[j]),
            fixed_rotation=float(self.joint_fixed_rotation[j]),
            motor_on=bool(self.motor_on[j]),
            motor_power=float(self.motor_power[j]),
            motor_speed=float(self.motor_speed[j]),
            motor_always_on=bool(self.motor_always_on[j]),
            has_limits=bool(self.joint_has_limits[j]),
            limit_min=float(self.joint_limit_min[j]),
            limit_max=float(self.joint_limit_max[j]),
            accumulated_impulse=self.joint_acc_impulse[j].copy(),
            accumulated_rotational_impulse=float(self.joint_acc_rot_impulse[j]),
            binding=int(self.joint_binding[j]),
        )

    def get_thruster(self, t: int) -> Thruster:
        return Thruster(
            active=bool(self.thruster_active[t]),
            body=int(self.thruster_body[t]),
            anchor=self.thruster_anchor[t].copy(),
            rotation=float(self.thruster_rotation[t]),
            power=float(self.thruster_power[t]),
            binding=int(self.thruster_binding[t]),
        )

    def get_manifold(self, slot: int, static: StaticSimParams) -> CollisionManifold:
        sa, sb = slot_bodies(static)
        return CollisionManifold(
            active=bool(self.mani_active[slot]),
            position=self.mani_position[slot].copy(),
            normal=self.mani_normal[slot].copy(),
            penetration=float(self.mani_penetration[slot]),
            body_a=int(sa[slot]),
            body_b=int(sb[slot]),
            restitution_velocity_target=float(self.mani_rest_target[slot]),
            accumulated_normal_impulse=float(self.mani_acc_normal[slot]),
            accumulated_tangent_impulse=float(self.mani_acc_tangent[slot]),
        )


# scene building -------------------------------------------------------------


def _place_body(
    state: SimState,
    index: int,
    position,
    rotation: float,
    mass: float,
    inertia: float,
    density: float,
    friction: float,
    restitution: float,
    role: Role,
    fixated: bool,
    velocity,
    angular_velocity: float,
) -> None:
    state.body_active[index] = True
    state.position[index] = np.asarray(position, F32)
    state.rotation[index] = rotation
    state.velocity[index] = np.asarray(velocity, F32)
    state.angular_velocity[index] = angular_velocity
    if fixated:
        state.inverse_mass[index] = 0.0
        state.inverse_inertia[index] = 0.0
    else:
        state.inverse_mass[index] = 1.0 / mass
        state.inverse_inertia[index] = 1.0 / inertia
    state.density[index] = density
    state.friction[index] = friction
    state.restitution[index] = restitution
    state.role[index] = int(role)
    state.fixated[index] = fixated


def add_polygon(
    state: SimState,
    static: StaticSimParams,
    vertices,
    position,
    rotation: float = 0.0,
    density: float = 1.0,
    friction: float = 0.4,
    restitution: float = 0.0,
    role: Role = Role.NONE,
    fixated: bool = False,
    velocity=(0.0, 0.0),
    angular_velocity: float = 0.0,
    slot: int | None = None,
) -> int:
    """Activate a polygon in the first free polygon slot; returns the index."""
    if slot is None:
        free = [i for i in range(static.num_polygons) if not state.body_active[i]]
        if not free:
            raise CapacityError("no free polygon slot")
        slot = free[0]
    elif state.body_active[slot]:
        raise CapacityError(f"polygon slot {slot} already active")
    verts = geo.normalize_polygon(vertices)
    mass, inertia = geo.polygon_mass_properties(verts, density)
    _place_body(
        state, slot, position, rotation, mass, inertia, density, friction,
        restitution, role, fixated, velocity, angular_velocity,
    )
    state.vertex_count[slot] = len(verts)
    state.vertices[slot] = 0
    state.vertices[slot, : len(verts)] = verts.astype(F32)
    state.radius[slot] = 0.0
    return slot


def add_circle(
    state: SimState,
    static: StaticSimParams,
    radius: float,
    position,
    rotation: float = 0.0,
    density: float = 1.0,
    friction: float = 0.4,
    restitution: float = 0.0,
    role: Role = Role.NONE,
    fixated: bool = False,
    velocity=(0.0, 0.0),
    angular_velocity: float = 0.0,
    slot: int | None = None,
) -> int:
    """Activate a circle in the first free circle slot; returns the body index."""
    if not (np.isfinite(radius) and radius > 0):
        raise ValueError("circle radius must be finite and positive")
    if slot is None:
        free = [
            i for i in range(static.num_polygons, static.num_bodies)
            if not state.body_active[i]
        ]
        if not free:
            raise CapacityError("no free circle slot")
        slot = free[0]
    elif state.body_active[slot]:
        raise CapacityError(f"circle slot {slot} already active")
    mass, inertia = geo.circle_mass_properties(radius, density)
    _place_body(
        state, slot, position, rotation, mass, inertia, density, friction,
        restitution, role, fixated, velocity, angular_velocity,
    )
    state.radius[slot] = radius
    state.vertex_count[slot] = 0
    return slot


def add_joint(
    state: SimState,
    body_a: int,
    body_b: int,
    anchor_a,
    anchor_b,
    is_fixed: bool = False,
    fixed_rotation: float = 0.0,
    motor_on: bool = False,
    motor_power: float = 1.0,
    motor_speed: float = 1.0,
    motor_always_on: bool = False,
    has_limits: bool = False,
    limit_min: float = 0.0,
    limit_max: float = 0.0,
    binding: int = 0,
    slot: int | None = None,
) -> int:
    if body_a == body_b:
        raise ValueError("joint must connect two distinct bodies")
    if not (state.body_active[body_a] and state.body_active[body_b]):
        raise ValueError("joint endpoints must be active bodies")
    if has_limits and limit_min > limit_max:
        raise ValueError("limit_min must not exceed limit_max")
    if slot is None:
        free = np.flatnonzero(~state.joint_active)
        if len(free) == 0:
            raise CapacityError("no free joint slot")
        slot = int(free[0])
    elif state.joint_active[slot]:
        raise CapacityError(f"joint slot {slot} already active")
    state.joint_active[slot] = True
    state.joint_body_a[slot] = body_a
    state.joint_body_b[slot] = body_b
    state.joint_anchor_a[slot] = np.asarray(anchor_a, F32)
    state.joint_anchor_b[slot] = np.asarray(anchor_b, F32)
    state.joint_is_fixed[slot] = is_fixed
    state.joint_fixed_rotation[slot] = fixed_rotation
    state.motor_on[slot] = motor_on
    state.motor_power[slot] = motor_power
    state.motor_speed[slot] = motor_speed
    state.motor_always_on[slot] = motor_always_on
    state.joint_has_limits[slot] = has_limits
    state.joint_limit_min[slot] = limit_min
    state.joint_limit_max[slot] = limit_max
    state.joint_acc_impulse[slot] = 0
    state.joint_acc_rot_impulse[slot] = 0
    state.joint_binding[slot] = binding
    return slot


def add_thruster(
    state: SimState,
    body: int,
    anchor,
    rotation: float,
    power: float = 1.0,
    binding: int = 0,
    slot: int | None = None,
) -> int:
    if not state.body_active[body]:
        raise ValueError("thruster must attach to an active body")
    if slot is None:
        free = np.flatnonzero(~state.thruster_active)
        if len(free) == 0:
            raise CapacityError("no free thruster slot")
        slot = int(free[0])
    elif state.thruster_active[slot]:
        raise CapacityError(f"thruster slot {slot} already active")
    state.thruster_active[slot] = True
    state.thruster_body[slot] = body
    state.thruster_anchor[slot] = np.asarray(anchor, F32)
    state.thruster_rotation[slot] = rotation
    state.thruster_power[slot] = power
    state.thruster_binding[slot] = binding
    return slot


class CapacityError(RuntimeError):
    """Requested entity does not fit in the scene's fixed capacities."""


def make_arena_state(static: StaticSimParams) -> SimState:
    """Empty scene bounded by 4 fixated walls around the 5x5 arena.

    Walls sit flush against the arena edges and meet edge-on (touching,
    never overlapping) so the initial state has no active contacts.
    """
    state = SimState.zeros(static)
    half = ARENA_SIZE / 2
    t = WALL_HALF_THICKNESS
    horizontal = geo.rect_vertices(half + 2 * t, t)
    vertical = geo.rect_vertices(t, half)
    walls = [
        (horizontal, (half, -t)),              # floor
        (horizontal, (half, ARENA_SIZE + t)),  # ceiling
        (vertical, (-t, half)),                # left
        (vertical, (ARENA_SIZE + t, half)),    # right
    ]
    for slot, (verts, pos) in enumerate(walls):
        add_polygon(state, static, verts, pos, fixated=True, friction=0.7, slot=slot)
    return state
