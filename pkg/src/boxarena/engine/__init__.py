from .state import (
    ARENA_SIZE,
    NUM_WALLS,
    CapacityError,
    CollisionManifold,
    Joint,
    RigidBody,
    Role,
    ShapeKind,
    SimParams,
    SimState,
    StaticSimParams,
    Thruster,
    SIZE_CLASSES,
    add_circle,
    add_joint,
    add_polygon,
    add_thruster,
    make_arena_state,
    pair_tables,
    slot_bodies,
    static_for_class,
)
from .manifolds import (
    manifold_circle_circle,
    manifold_polygon_circle,
    manifold_polygon_polygon,
)
from .solver import (
    apply_impulse,
    apply_motor,
    apply_thruster,
    resolve_collision,
    resolve_fixed_rotation,
    resolve_joint_limit,
    resolve_revolute_position,
)
from .step import SimulationDiverged, refresh_manifolds, step, step_inplace
