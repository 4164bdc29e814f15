"""Rasterized pixel observation: the arena as a 125x125x3 uint8 image.

Role colours green/blue/red, neutral gray otherwise; fixated shapes are
drawn darker; joints and thrusters get small markers.  Row 0 is the top of
the arena.
"""

from __future__ import annotations

import numpy as np

from .engine import ARENA_SIZE
from .env import EnvParams, EnvState

PIXELS = 125
VIEW_MARGIN = 0.25  # world units beyond the arena so the wall band shows

BACKGROUND = np.array([250, 250, 250], np.uint8)
ROLE_COLOURS = {
    0: np.array([160, 160, 160], np.uint8),
    1: np.array([60, 190, 70], np.uint8),    # green
    2: np.array([60, 110, 235], np.uint8),   # blue
    3: np.array([230, 65, 55], np.uint8),    # red
}
FIXATED_DARKEN = 0.55
JOINT_COLOUR = np.array([235, 205, 55], np.uint8)
THRUSTER_COLOUR = np.array([240, 140, 40], np.uint8)
MARKER_RADIUS = 0.07  # world units


def _grid():
    lo = -VIEW_MARGIN
    hi = ARENA_SIZE + VIEW_MARGIN
    scale = (hi - lo) / PIXELS
    centers = lo + (np.arange(PIXELS) + 0.5) * scale
    xs = np.broadcast_to(centers[None, :], (PIXELS, PIXELS))
    ys = np.broadcast_to(centers[::-1][:, None], (PIXELS, PIXELS))
    return xs, ys


_XS, _YS = _grid()


def _world_anchor(sim, body, anchor):
    c = np.cos(float(sim.rotation[body]))
    s = np.sin(float(sim.rotation[body]))
    ax, ay = float(anchor[0]), float(anchor[1])
    return (
        float(sim.position[body, 0]) + c * ax - s * ay,
        float(sim.position[body, 1]) + s * ax + c * ay,
    )


def render_pixels(state: EnvState, params: EnvParams) -> np.ndarray:
    sim = state.sim
    static = params.static
    img = np.empty((PIXELS, PIXELS, 3), np.uint8)
    img[:] = BACKGROUND

    for i in range(static.num_bodies):
        if not sim.body_active[i]:
            continue
        colour = ROLE_COLOURS[int(sim.role[i])]
        if sim.fixated[i]:
            colour = (colour * FIXATED_DARKEN).astype(np.uint8)
        if static.is_polygon(i):
            n = int(sim.vertex_count[i])
            c = np.cos(float(sim.rotation[i]))
            s = np.sin(float(sim.rotation[i]))
            local = sim.vertices[i, :n].astype(np.float64)
            wx = float(sim.position[i, 0]) + c * local[:, 0] - s * local[:, 1]
            wy = float(sim.position[i, 1]) + s * local[:, 0] + c * local[:, 1]
            mask = np.ones((PIXELS, PIXELS), bool)
            for k in range(n):
                k2 = (k + 1) % n
                ex, ey = wx[k2] - wx[k], wy[k2] - wy[k]
                # interior of a CCW polygon is left of each edge
                mask &= ex * (_YS - wy[k]) - ey * (_XS - wx[k]) >= 0.0
        else:
            dx = _XS - float(sim.position[i, 0])
            dy = _YS - float(sim.position[i, 1])
            mask = dx * dx + dy * dy <= float(sim.radius[i]) ** 2
        img[mask] = colour

    r2 = MARKER_RADIUS * MARKER_RADIUS
    for t in range(static.num_thrusters):
        if sim.thruster_active[t]:
            px, py = _world_anchor(sim, int(sim.thruster_body[t]), sim.thruster_anchor[t])
            mask = (_XS - px) ** 2 + (_YS - py) ** 2 <= r2
            img[mask] = THRUSTER_COLOUR
    for j in range(static.num_joints):
        if sim.joint_active[j]:
            px, py = _world_anchor(sim, int(sim.joint_body_a[j]), sim.joint_anchor_a[j])
            mask = (_XS - px) ** 2 + (_YS - py) ** 2 <= r2
            img[mask] = JOINT_COLOUR
    return img
