"""Minimal 2D vector/rotation algebra and convex polygon primitives.

Angles are radians, vectors are length-2 numpy arrays.  The engine stores
everything in float32; these helpers accept any float input and return
float64 for scalar math, which callers truncate on assignment.

Polygon conventions: at most 4 vertices, listed counter-clockwise in
body-local coordinates, with the vertex centroid at the local origin.
"""

from __future__ import annotations

import numpy as np
from numba import njit


def cross_vv(a: np.ndarray, b: np.ndarray) -> float:
    """Scalar (z) component of the 2D vector-vector cross product."""
    return float(a[0] * b[1] - a[1] * b[0])


def cross_sv(s: float, v: np.ndarray) -> np.ndarray:
    """Scalar-vector cross product: rotates v by 90 degrees and scales by s."""
    return np.array([-s * v[1], s * v[0]], dtype=np.asarray(v).dtype)


def rotate(v: np.ndarray, angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])


def transform_point(p_local: np.ndarray, body_position: np.ndarray, body_rotation: float) -> np.ndarray:
    """Body-local point to world space."""
    return np.asarray(body_position) + rotate(p_local, body_rotation)


def inverse_transform_point(p_world: np.ndarray, body_position: np.ndarray, body_rotation: float) -> np.ndarray:
    """World-space point to body-local space."""
    return rotate(np.asarray(p_world) - np.asarray(body_position), -body_rotation)


@njit(cache=True, inline="always")
def _clip_halfplane(x1, y1, x2, y2, nx, ny, off):
    """Clip segment (x1,y1)-(x2,y2) to the halfplane n.p <= off.

    Returns (count, ax, ay, bx, by) with the surviving endpoints first.
    Points exactly on the plane are retained.
    """
    d1 = nx * x1 + ny * y1 - off
    d2 = nx * x2 + ny * y2 - off
    if d1 <= 0.0 and d2 <= 0.0:
        return 2, x1, y1, x2, y2
    if d1 > 0.0 and d2 > 0.0:
        return 0, 0.0, 0.0, 0.0, 0.0
    # one endpoint survives; replace the other with the plane crossing
    t = d1 / (d1 - d2)
    cx = x1 + t * (x2 - x1)
    cy = y1 + t * (y2 - y1)
    if d1 <= 0.0:
        return 2, x1, y1, cx, cy
    return 2, cx, cy, x2, y2


def clip_segment_to_halfplane(seg: np.ndarray, plane_normal: np.ndarray, plane_offset: float) -> np.ndarray:
    """Portion of a segment on the non-positive side of a plane.

    Returns a (k, 2) array with k in {0, 2}; an empty array means the
    segment was fully clipped away.
    """
    seg = np.asarray(seg, dtype=np.float64)
    n = np.asarray(plane_normal, dtype=np.float64)
    count, ax, ay, bx, by = _clip_halfplane(
        seg[0, 0], seg[0, 1], seg[1, 0], seg[1, 1], n[0], n[1], float(plane_offset)
    )
    if count == 0:
        return np.empty((0, 2))
    return np.array([[ax, ay], [bx, by]])


def vertex_centroid(vertices: np.ndarray) -> np.ndarray:
    return np.asarray(vertices, dtype=np.float64).mean(axis=0)


def signed_area(vertices: np.ndarray) -> float:
    """Shoelace area; positive for counter-clockwise winding."""
    v = np.asarray(vertices, dtype=np.float64)
    rolled = np.roll(v, -1, axis=0)
    return float(0.5 * np.sum(v[:, 0] * rolled[:, 1] - v[:, 1] * rolled[:, 0]))


def is_convex_ccw(vertices: np.ndarray) -> bool:
    """True if vertices form a convex counter-clockwise polygon.

    Every cross product of consecutive edge vectors must be >= 0, and the
    polygon must have positive area (no degenerate slivers).
    """
    v = np.asarray(vertices, dtype=np.float64)
    n = len(v)
    if n < 3:
        return False
    for i in range(n):
        e1 = v[(i + 1) % n] - v[i]
        e2 = v[(i + 2) % n] - v[(i + 1) % n]
        if e1[0] * e2[1] - e1[1] * e2[0] < 0.0:
            return False
    return signed_area(v) > 1e-10


def normalize_polygon(vertices: np.ndarray) -> np.ndarray:
    """Canonical polygon: CCW winding, vertex centroid at the origin.

    Raises ValueError for concave or degenerate input.
    """
    v = np.asarray(vertices, dtype=np.float64).copy()
    if len(v) < 3 or len(v) > 4:
        raise ValueError(f"polygon must have 3 or 4 vertices, got {len(v)}")
    if signed_area(v) < 0.0:
        v = v[::-1].copy()
    v -= vertex_centroid(v)
    if not is_convex_ccw(v):
        raise ValueError("polygon is concave or degenerate")
    return v


def polygon_mass_properties(vertices: np.ndarray, density: float) -> tuple[float, float]:
    """(mass, rotational inertia about the local origin) of a solid polygon.

    Standard triangle-fan decomposition about the origin.
    """
    v = np.asarray(vertices, dtype=np.float64)
    rolled = np.roll(v, -1, axis=0)
    cr = v[:, 0] * rolled[:, 1] - v[:, 1] * rolled[:, 0]
    area = 0.5 * np.sum(cr)
    quad = np.sum(v * v, axis=1) + np.sum(v * rolled, axis=1) + np.sum(rolled * rolled, axis=1)
    inertia_per_density = np.sum(cr * quad) / 12.0
    return float(density * area), float(density * inertia_per_density)


def circle_mass_properties(radius: float, density: float) -> tuple[float, float]:
    """(mass, rotational inertia about the center) of a solid disc."""
    mass = density * np.pi * radius * radius
    return float(mass), float(mass * radius * radius / 2.0)


def bounding_radius(vertices: np.ndarray) -> float:
    """Radius of the origin-centered circle enclosing all vertices."""
    v = np.asarray(vertices, dtype=np.float64)
    return float(np.sqrt(np.max(np.sum(v * v, axis=1))))


def rect_vertices(half_width: float, half_height: float) -> np.ndarray:
    """CCW rectangle centered at the origin."""
    return np.array(
        [
            [-half_width, -half_height],
            [half_width, -half_height],
            [half_width, half_height],
            [-half_width, half_height],
        ]
    )
