"""
Joints, limits, motors and thrusters
====================================

A motorized pendulum with rotation limits, plus a thruster-driven ball.
Motors apply torque through revolute joints once per engine step; the
constraint solver then keeps the jointed anchor points together.
"""

import numpy as np

from boxarena import geometry as geo
from boxarena.engine import (
    SimParams, StaticSimParams, SimState,
    add_circle, add_joint, add_polygon, add_thruster, step,
)

static = StaticSimParams(num_polygons=4, num_circles=1, num_joints=1, num_thrusters=1)
state = SimState.zeros(static)

# a floor, and a fixated mount with a bar pinned to it
add_polygon(state, static, geo.rect_vertices(4.0, 0.2), (1.0, -1.2), fixated=True, friction=0.6)
mount = add_polygon(state, static, geo.rect_vertices(0.1, 0.1), (0.0, 0.0), fixated=True)
bar = add_polygon(state, static, geo.rect_vertices(0.5, 0.06), (0.5, 0.0), density=2.0)
ii = state.inverse_inertia[bar]
joint = add_joint(
    state, bar, mount, (-0.5, 0.0), (0.0, 0.0),
    motor_on=True,
    motor_power=1.0 / ii,      # torque budget scaled to the bar's inertia
    motor_speed=2.0,           # target relative angular velocity, rad/s
    has_limits=True, limit_min=-1.2, limit_max=1.2,
)

# and a free ball carrying a thruster that fires along its facing direction
ball = add_circle(state, static, 0.2, (2.0, 0.0), density=0.5)
add_thruster(state, ball, (0.0, 0.0), np.pi / 2, power=1.0)

params = SimParams(gravity=(0.0, -9.8))

print("driving the motor forward; the limit stops the swing at 1.2 rad")
motors = np.array([1.0], np.float32)
thrusters = np.array([0.0], np.float32)
for i in range(180):
    state = step(state, motors, thrusters, params, static)
    if i % 30 == 29:
        print(f"  t={i + 1:3d}  bar angle {state.rotation[bar]:+.2f} rad, "
              f"angular velocity {state.angular_velocity[bar]:+.2f}")

print("\nreversing the motor and firing the ball's thruster")
motors[0] = -1.0
thrusters[0] = 1.0
for i in range(120):
    state = step(state, motors, thrusters, params, static)
    if i % 40 == 39:
        print(f"  t={i + 1:3d}  bar angle {state.rotation[bar]:+.2f} rad, "
              f"ball height {state.position[ball, 1]:+.2f}")
