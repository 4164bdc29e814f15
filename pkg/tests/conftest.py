import numpy as np
import pytest

from boxarena import geometry as geo
from boxarena.engine import RigidBody, Role, ShapeKind


def circle_body(
    radius, position, velocity=(0.0, 0.0), angular_velocity=0.0, density=1.0,
    friction=0.0, restitution=0.0, rotation=0.0, fixated=False,
):
    m, i = geo.circle_mass_properties(radius, density)
    return RigidBody(
        active=True,
        shape_kind=ShapeKind.CIRCLE,
        position=np.asarray(position, np.float32),
        rotation=rotation,
        velocity=np.asarray(velocity, np.float32),
        angular_velocity=angular_velocity,
        inverse_mass=0.0 if fixated else 1.0 / m,
        inverse_inertia=0.0 if fixated else 1.0 / i,
        density=density,
        friction=friction,
        restitution=restitution,
        role=Role.NONE,
        fixated=fixated,
        radius=radius,
    )


def polygon_body(
    vertices, position, rotation=0.0, velocity=(0.0, 0.0), angular_velocity=0.0,
    density=1.0, friction=0.0, restitution=0.0, fixated=False,
):
    verts = geo.normalize_polygon(vertices)
    m, i = geo.polygon_mass_properties(verts, density)
    return RigidBody(
        active=True,
        shape_kind=ShapeKind.POLYGON,
        position=np.asarray(position, np.float32),
        rotation=rotation,
        velocity=np.asarray(velocity, np.float32),
        angular_velocity=angular_velocity,
        inverse_mass=0.0 if fixated else 1.0 / m,
        inverse_inertia=0.0 if fixated else 1.0 / i,
        density=density,
        friction=friction,
        restitution=restitution,
        role=Role.NONE,
        fixated=fixated,
        vertices=verts.astype(np.float32),
    )


# --- independent float64 oracles ---------------------------------------------


def _shoelace(pts):
    a = 0.0
    n = len(pts)
    for i in range(n):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % n]
        a += x1 * y2 - y1 * x2
    return 0.5 * a


def sutherland_hodgman(subject, clip):
    """Clip polygon `subject` by convex CCW polygon `clip` (float64 lists)."""
    output = [tuple(map(float, p)) for p in subject]
    n = len(clip)
    for i in range(n):
        ax, ay = clip[i]
        bx, by = clip[(i + 1) % n]
        ex, ey = bx - ax, by - ay
        inp = output
        output = []
        if not inp:
            break
        px, py = inp[-1]
        # interior of a CCW polygon lies left of each edge
        prev_in = ex * (py - ay) >= ey * (px - ax)
        for cx, cy in inp:
            cur_in = ex * (cy - ay) >= ey * (cx - ax)
            if cur_in != prev_in:
                d1 = ex * (py - ay) - ey * (px - ax)
                d2 = ex * (cy - ay) - ey * (cx - ax)
                t = d1 / (d1 - d2)
                output.append((px + t * (cx - px), py + t * (cy - py)))
            if cur_in:
                output.append((cx, cy))
            px, py, prev_in = cx, cy, cur_in
    return output


def convex_overlap_area(poly_a, poly_b) -> float:
    """Intersection area of two convex CCW polygons (exact up to float64)."""
    inter = sutherland_hodgman(poly_a, poly_b)
    if len(inter) < 3:
        return 0.0
    return abs(_shoelace(inter))


def sat_depth(poly_a, poly_b) -> float:
    """Signed least-penetration depth in float64: positive means overlap.

    Max over all face axes of both polygons of the min vertex separation,
    negated.  Matches the separating-axis construction but shares no code
    with the engine.
    """
    best = -np.inf
    for poly, other in ((poly_a, poly_b), (poly_b, poly_a)):
        n = len(poly)
        for i in range(n):
            ax, ay = poly[i]
            bx, by = poly[(i + 1) % n]
            ex, ey = bx - ax, by - ay
            ln = np.hypot(ex, ey)
            nx, ny = ey / ln, -ex / ln
            sep = min(nx * (px - ax) + ny * (py - ay) for px, py in other)
            best = max(best, sep)
    return -best


def random_convex_quad(rng, scale=1.0):
    """Random convex quadrilateral via the hull of 4+ random points."""
    from scipy.spatial import ConvexHull

    while True:
        pts = rng.uniform(-scale, scale, size=(6, 2))
        hull = ConvexHull(pts)
        if len(hull.vertices) >= 4:
            # any CCW-ordered subsequence of hull vertices is still convex
            quad = pts[hull.vertices][:4]
            if abs(_shoelace(quad)) > 0.05:
                return quad
