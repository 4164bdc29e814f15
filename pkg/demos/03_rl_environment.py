"""
The RL environment
==================

Tasks share one goal: drive the green shape into the blue shape (+1);
touching red ends the episode at -1, and a small dense term rewards
closing the green-blue distance.  Observations come in three forms:
per-entity feature rows, a flat vector, or a 125x125 pixel raster.
"""

import numpy as np

from boxarena.env import Action, EnvParams, decode_multidiscrete, env_step, observe_flat, reset
from boxarena.levelgen import generate
from boxarena.render import render_pixels

level = generate(seed=8, size_class="M")
params = EnvParams(size_class="M", observation_mode="entity")
state = reset(level, params)
print(f"level {level.name}: green-blue distance at reset {state.last_distance:.2f}")

# entity observation: one row per shape / joint / thruster, plus masks
obs = None
rng = np.random.default_rng(0)
total = 0.0
for t in range(40):
    # multi-discrete controls: per motor 0 = off, 1 = backward, 2 = forward;
    # per thruster 0/1.  The all-zero vector is the no-op.
    idx = rng.integers(0, 3, params.static.num_joints + params.static.num_thrusters)
    idx[params.static.num_joints:] %= 2
    action = decode_multidiscrete(idx, params)
    state, obs, reward, done = env_step(state, action, params)
    total += reward
    if done:
        print(f"episode ended at env step {state.timestep} with reward {reward:+.2f}")
        break

print(f"return so far {total:+.3f}")
print(f"shape rows {obs.shapes.shape}, joint rows {obs.joints.shape}, "
      f"thruster rows {obs.thrusters.shape}")
print(f"active shapes: {obs.shape_active.sum()} of {len(obs.shape_active)} slots")

# the flat observation is the same data concatenated in slot order
flat = observe_flat(state, params)
print(f"flat observation length {len(flat)} (fixed per size class)")

# and the pixel observation rasterizes the arena
img = render_pixels(state, params)
print(f"pixel observation {img.shape} {img.dtype}, "
      f"{len(np.unique(img.reshape(-1, 3), axis=0))} distinct colours")
