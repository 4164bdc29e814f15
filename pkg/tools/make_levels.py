"""Build the hand-designed fixture levels into levels/{S,M,L}/.

Each archetype is a small parametric construction; every emitted level is
validated and checked against the no-op filter before it is written.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

from boxarena import geometry as geo
from boxarena.engine import Role, add_circle, add_joint, add_polygon, add_thruster, make_arena_state, static_for_class
from boxarena.levelgen import Level, noop_filter, validation_errors
from boxarena.levelio import save_level

ROOT = Path(__file__).resolve().parent.parent


def base(size):
    static = static_for_class(size)
    return static, make_arena_state(static)


def finish(name, size, static, state):
    level = Level(static, state, name, size)
    errors = validation_errors(level)
    if errors:
        raise SystemExit(f"{name} ({size}): invalid: {errors}")
    result = noop_filter(level)
    if result.solved:
        raise SystemExit(f"{name} ({size}): solved by the no-op policy")
    if result.diverged:
        raise SystemExit(f"{name} ({size}): diverged under no-op")
    return level


def chase_ball(size):
    static, state = base(size)
    g = add_circle(state, static, 0.3, (0.8, 0.3), role=Role.GREEN, friction=0.3, density=1.0)
    add_polygon(state, static, geo.rect_vertices(0.25, 0.4), (4.4, 0.4),
                role=Role.BLUE, fixated=True)
    add_thruster(state, g, (0.0, 0.0), 0.0, power=6.0, binding=0)
    if size in ("M", "L"):
        add_polygon(state, static, geo.rect_vertices(0.3, 0.25), (2.6, 0.25), friction=0.5)
    if size == "L":
        add_circle(state, static, 0.2, (3.4, 0.2), friction=0.5)
    return finish("chase-ball", size, static, state)


def ceiling_touch(size):
    static, state = base(size)
    g = add_circle(state, static, 0.25, (2.5, 0.25), role=Role.GREEN, density=0.8)
    add_polygon(state, static, geo.rect_vertices(0.5, 0.2), (2.5, 4.8),
                role=Role.BLUE, fixated=True)
    add_thruster(state, g, (0.0, 0.0), np.pi / 2, power=8.0, binding=0)
    if size in ("M", "L"):
        add_polygon(state, static, geo.rect_vertices(0.6, 0.1), (1.2, 2.5), fixated=True)
    if size == "L":
        add_polygon(state, static, geo.rect_vertices(0.6, 0.1), (3.8, 3.2), fixated=True)
    return finish("ceiling-touch", size, static, state)


def red_corridor(size):
    static, state = base(size)
    g = add_circle(state, static, 0.25, (0.7, 0.25), role=Role.GREEN, density=0.8)
    add_polygon(state, static, geo.rect_vertices(0.2, 0.8), (2.5, 0.8),
                role=Role.RED, fixated=True)
    add_polygon(state, static, geo.rect_vertices(0.3, 0.3), (4.4, 0.3),
                role=Role.BLUE, fixated=True)
    add_thruster(state, g, (0.0, 0.0), np.pi / 4, power=9.0, binding=0)
    if size in ("M", "L"):
        add_thruster(state, g, (0.0, 0.0), np.pi / 2, power=6.0, binding=1)
    if size == "L":
        add_polygon(state, static, geo.rect_vertices(0.2, 0.5), (3.5, 3.0),
                    role=Role.RED, fixated=True)
    return finish("red-corridor", size, static, state)


def pendulum_strike(size):
    static, state = base(size)
    pivot = add_polygon(state, static, geo.rect_vertices(0.12, 0.12), (2.5, 3.5), fixated=True)
    bar = add_polygon(
        state, static, geo.rect_vertices(0.45, 0.06), (2.5, 3.05),
        rotation=-np.pi / 2, role=Role.GREEN, density=2.0,
    )
    ii = float(state.inverse_inertia[bar])
    add_joint(state, bar, pivot, (-0.45, 0.0), (0.0, 0.0), motor_on=True,
              motor_power=1.2 / ii, motor_speed=2.0, binding=0)
    add_polygon(state, static, geo.rect_vertices(0.12, 0.25), (3.6, 3.5),
                role=Role.BLUE, fixated=True)
    if size in ("M", "L"):
        add_circle(state, static, 0.25, (1.2, 0.25), friction=0.4)
    if size == "L":
        add_polygon(state, static, geo.rect_vertices(0.4, 0.1), (1.2, 2.0), fixated=True)
    return finish("pendulum-strike", size, static, state)


def unicycle_push(size):
    static, state = base(size)
    wheel = add_circle(state, static, 0.35, (1.0, 0.35), role=Role.GREEN,
                       friction=1.0, density=4.0)
    rider = add_polygon(state, static, geo.rect_vertices(0.18, 0.14), (1.0, 0.95),
                        friction=0.4, density=1.0)
    ii = float(state.inverse_inertia[wheel]) + float(state.inverse_inertia[rider])
    add_joint(state, wheel, rider, (0.0, 0.0), (0.0, -0.6), motor_on=True,
              motor_power=1.0 / ii, motor_speed=-4.0, binding=0)
    add_polygon(state, static, geo.rect_vertices(0.25, 0.35), (4.5, 0.35),
                role=Role.BLUE, fixated=True)
    if size in ("M", "L"):
        add_polygon(state, static, geo.rect_vertices(0.45, 0.06), (3.0, 0.06),
                    friction=0.8, fixated=True)
    if size == "L":
        add_circle(state, static, 0.18, (3.95, 0.18), friction=0.6)
    return finish("unicycle-push", size, static, state)


def seesaw_roll(size):
    static, state = base(size)
    fulcrum = add_polygon(state, static, geo.rect_vertices(0.12, 0.3), (2.5, 0.3), fixated=True)
    plank = add_polygon(state, static, geo.rect_vertices(1.1, 0.06), (2.5, 0.7),
                        friction=0.6, density=1.5)
    ii = float(state.inverse_inertia[plank])
    add_joint(state, plank, fulcrum, (0.0, -0.1), (0.0, 0.3), motor_on=True,
              motor_power=0.8 / ii, motor_speed=1.5, has_limits=True,
              limit_min=-0.5, limit_max=0.5, binding=0)
    add_circle(state, static, 0.22, (1.7, 0.98), role=Role.GREEN, friction=0.4)
    add_polygon(state, static, geo.rect_vertices(0.25, 0.3), (4.6, 0.3),
                role=Role.BLUE, fixated=True)
    if size == "L":
        add_polygon(state, static, geo.rect_vertices(0.3, 0.08), (0.8, 1.6), fixated=True)
    return finish("seesaw-roll", size, static, state)


def spinner_gate(size):
    static, state = base(size)
    hub = add_polygon(state, static, geo.rect_vertices(0.1, 0.1), (2.5, 1.2), fixated=True)
    blade = add_polygon(state, static, geo.rect_vertices(0.8, 0.07), (2.5, 1.2), density=2.0)
    ii = float(state.inverse_inertia[blade])
    add_joint(state, blade, hub, (0.0, 0.0), (0.0, 0.0), motor_on=True,
              motor_always_on=True, motor_power=0.9 / ii, motor_speed=3.0, binding=0)
    g = add_circle(state, static, 0.2, (0.6, 0.2), role=Role.GREEN, density=0.8)
    add_polygon(state, static, geo.rect_vertices(0.25, 0.25), (4.5, 0.25),
                role=Role.BLUE, fixated=True)
    add_thruster(state, g, (0.0, 0.0), 0.0, power=6.0, binding=0)
    if size == "L":
        add_polygon(state, static, geo.rect_vertices(0.2, 0.2), (3.6, 2.8),
                    role=Role.RED, fixated=True)
    return finish("spinner-gate", size, static, state)


def catapult(size):
    static, state = base(size)
    pivot = add_polygon(state, static, geo.rect_vertices(0.1, 0.25), (1.4, 0.25), fixated=True)
    arm = add_polygon(state, static, geo.rect_vertices(0.8, 0.06), (2.2, 0.6),
                      friction=0.8, density=1.2)
    ii = float(state.inverse_inertia[arm])
    add_joint(state, arm, pivot, (-0.8, 0.0), (0.0, 0.25), motor_on=True,
              motor_power=1.4 / ii, motor_speed=4.0, has_limits=True,
              limit_min=-0.15, limit_max=1.1, binding=0)
    add_circle(state, static, 0.18, (2.8, 0.88), role=Role.GREEN, friction=0.5, density=0.6)
    add_polygon(state, static, geo.rect_vertices(0.5, 0.15), (4.0, 3.2),
                role=Role.BLUE, fixated=True)
    if size == "L":
        add_circle(state, static, 0.15, (0.6, 0.15), friction=0.4)
    return finish("catapult", size, static, state)


def wall_hop(size):
    static, state = base(size)
    add_polygon(state, static, geo.rect_vertices(0.15, 0.6), (2.5, 0.6), fixated=True)
    g = add_circle(state, static, 0.22, (1.0, 0.22), role=Role.GREEN, density=0.7)
    add_polygon(state, static, geo.rect_vertices(0.3, 0.25), (4.3, 0.25),
                role=Role.BLUE, fixated=True)
    add_thruster(state, g, (0.0, 0.0), np.pi / 3, power=10.0, binding=0)
    if size in ("M", "L"):
        add_thruster(state, g, (0.0, 0.0), 0.0, power=5.0, binding=1)
    if size == "L":
        add_polygon(state, static, geo.rect_vertices(0.15, 0.4), (3.4, 2.6), fixated=True)
    return finish("wall-hop", size, static, state)


def pusher_arm(size):
    static, state = base(size)
    mount = add_polygon(state, static, geo.rect_vertices(0.1, 0.1), (0.5, 1.6), fixated=True)
    arm = add_polygon(state, static, geo.rect_vertices(0.55, 0.07), (1.05, 1.6),
                      friction=0.6, density=1.5)
    ii = float(state.inverse_inertia[arm])
    add_joint(state, arm, mount, (-0.55, 0.0), (0.0, 0.0), motor_on=True,
              motor_power=1.1 / ii, motor_speed=-2.5, has_limits=True,
              limit_min=-1.4, limit_max=0.3, binding=0)
    add_circle(state, static, 0.24, (1.9, 0.24), role=Role.GREEN, friction=0.3)
    add_polygon(state, static, geo.rect_vertices(0.22, 0.3), (4.5, 0.3),
                role=Role.BLUE, fixated=True)
    if size in ("M", "L"):
        add_circle(state, static, 0.18, (3.2, 0.18), friction=0.3)
    return finish("pusher-arm", size, static, state)


def arm_reach(size):
    """Multi-link arm; the L class exclusive, needs several joints."""
    static, state = base(size)
    mount = add_polygon(state, static, geo.rect_vertices(0.12, 0.12), (2.5, 4.2), fixated=True)
    prev = mount
    anchor_prev = (0.0, 0.0)
    tip = None
    for k in range(3):
        link = add_polygon(
            state, static, geo.rect_vertices(0.35, 0.05),
            (2.5, 4.2 - 0.35 - 0.7 * k), rotation=-np.pi / 2, density=1.5,
        )
        ii = float(state.inverse_inertia[link]) + float(state.inverse_inertia[prev])
        add_joint(state, link, prev, (-0.35, 0.0), anchor_prev, motor_on=True,
                  motor_power=1.0 / ii, motor_speed=1.5, binding=k % 2)
        prev = link
        anchor_prev = (0.35, 0.0)
        tip = link
    state.role[tip] = Role.GREEN
    add_polygon(state, static, geo.rect_vertices(0.3, 0.15), (4.2, 2.4),
                role=Role.BLUE, fixated=True)
    add_circle(state, static, 0.2, (1.0, 0.2), friction=0.4)
    return finish("arm-reach", size, static, state)


ARCHETYPES = {
    "S": [chase_ball, ceiling_touch, red_corridor, pendulum_strike, unicycle_push,
          seesaw_roll, spinner_gate, catapult, wall_hop, pusher_arm],
    "M": [chase_ball, ceiling_touch, red_corridor, pendulum_strike, unicycle_push,
          seesaw_roll, spinner_gate, catapult, wall_hop, pusher_arm],
    "L": [chase_ball, ceiling_touch, red_corridor, pendulum_strike, unicycle_push,
          seesaw_roll, spinner_gate, catapult, wall_hop, arm_reach],
}


def main():
    out_root = ROOT / "levels"
    for size, builders in ARCHETYPES.items():
        out = out_root / size
        out.mkdir(parents=True, exist_ok=True)
        for build in builders:
            level = build(size)
            path = out / f"{level.name}.json"
            save_level(level, path)
            print(f"wrote {path}")
    print("done")


if __name__ == "__main__":
    sys.exit(main())
