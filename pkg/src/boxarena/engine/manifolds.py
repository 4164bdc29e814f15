"""Contact manifold generation between shape pairs.

Normals always point from body a to body b; swapping the argument order
negates the normal and preserves the penetration.
"""

from __future__ import annotations

import numpy as np

from .. import geometry as geo
from . import _kernels
from .state import F32, CollisionManifold, RigidBody, ShapeKind


def _world_verts(body: RigidBody) -> np.ndarray:
    w = np.zeros((4, 2), F32)
    n = len(body.vertices)
    for k in range(n):
        w[k] = geo.transform_point(body.vertices[k], body.position, body.rotation)
    return w


def _pair_arrays(a: RigidBody, b: RigidBody):
    position = np.array([a.position, b.position], F32)
    velocity = np.array([a.velocity, b.velocity], F32)
    angular = np.array([a.angular_velocity, b.angular_velocity], F32)
    restitution = np.array([a.restitution, b.restitution], F32)
    return position, velocity, angular, restitution


def _finish(a, b, index_a, index_b, active, px, py, nx, ny, pen) -> CollisionManifold:
    target = 0.0
    if active:
        position, velocity, angular, restitution = _pair_arrays(a, b)
        target = float(
            _kernels._restitution_target(position, velocity, angular, restitution, 0, 1, px, py, nx, ny)
        )
    return CollisionManifold(
        active=bool(active),
        position=np.array([px, py], F32),
        normal=np.array([nx, ny], F32),
        penetration=float(pen),
        body_a=index_a,
        body_b=index_b,
        restitution_velocity_target=target,
    )


def manifold_circle_circle(a: RigidBody, b: RigidBody, index_a: int = 0, index_b: int = 1) -> CollisionManifold:
    assert a.shape_kind == ShapeKind.CIRCLE and b.shape_kind == ShapeKind.CIRCLE
    out = _kernels._manifold_cc(
        float(a.position[0]), float(a.position[1]), a.radius,
        float(b.position[0]), float(b.position[1]), b.radius,
    )
    return _finish(a, b, index_a, index_b, *out)


def manifold_polygon_circle(poly: RigidBody, circ: RigidBody, index_a: int = 0, index_b: int = 1) -> CollisionManifold:
    assert poly.shape_kind == ShapeKind.POLYGON and circ.shape_kind == ShapeKind.CIRCLE
    out = _kernels._manifold_pc(
        _world_verts(poly), len(poly.vertices),
        float(circ.position[0]), float(circ.position[1]), circ.radius,
    )
    return _finish(poly, circ, index_a, index_b, *out)


def manifold_polygon_polygon(
    a: RigidBody, b: RigidBody, index_a: int = 0, index_b: int = 1
) -> tuple[CollisionManifold, CollisionManifold]:
    """Up to two contact points along the axis of least penetration."""
    assert a.shape_kind == ShapeKind.POLYGON and b.shape_kind == ShapeKind.POLYGON
    nx, ny, act1, p1x, p1y, pen1, act2, p2x, p2y, pen2 = _kernels._manifold_pp(
        _world_verts(a), len(a.vertices), _world_verts(b), len(b.vertices)
    )
    m1 = _finish(a, b, index_a, index_b, act1, p1x, p1y, nx, ny, pen1)
    m2 = _finish(a, b, index_a, index_b, act2, p2x, p2y, nx, ny, pen2)
    return m1, m2
