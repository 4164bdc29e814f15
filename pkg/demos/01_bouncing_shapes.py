"""
Stepping the raw engine
=======================

Build a walled arena, drop a few shapes into it, and advance the
simulation step by step.  Everything lives in flat fixed-capacity arrays,
so the same code runs for any scene of a given size class.
"""

import numpy as np

from boxarena import geometry as geo
from boxarena.engine import (
    SimParams, add_circle, add_polygon, make_arena_state, static_for_class, step,
)

static = static_for_class("M")
state = make_arena_state(static)   # 4 fixated walls around the 5x5 arena

# a bouncy ball, a tumbling box and a resting ramp
ball = add_circle(state, static, 0.3, (1.0, 3.5), restitution=0.8, friction=0.2)
box = add_polygon(state, static, geo.rect_vertices(0.3, 0.2), (3.5, 2.5),
                  rotation=0.4, angular_velocity=3.0, restitution=0.3, friction=0.5)
add_polygon(state, static, geo.rect_vertices(1.0, 0.12), (2.5, 0.8),
            rotation=-0.25, fixated=True, friction=0.6)

params = SimParams()   # dt = 1/60, gravity (0, -9.8), 10 solver iterations

print("step   ball position      ball velocity       box rotation")
for i in range(240):
    state = step(state, None, None, params, static)
    if i % 30 == 29:
        p, v = state.position[ball], state.velocity[ball]
        print(f"{i + 1:4d}   ({p[0]:5.2f}, {p[1]:5.2f})    ({v[0]:6.2f}, {v[1]:6.2f})    {state.rotation[box]:6.2f}")

# the manifold cache holds the current contacts with warm-start impulses
active = np.flatnonzero(state.mani_active)
print(f"\nactive contacts after 4 s: {len(active)}")
for s in active[:5]:
    print(
        f"  slot {s}: point ({state.mani_position[s, 0]:.2f}, {state.mani_position[s, 1]:.2f})"
        f" normal ({state.mani_normal[s, 0]:+.2f}, {state.mani_normal[s, 1]:+.2f})"
        f" penetration {state.mani_penetration[s]:.4f}"
    )
