"""Wire protocol for live play/edit sessions.

Text-encoded JSON messages over a persistent bidirectional channel.

client -> server:
  {"type": "load_level", "doc": {...}}            inline level document
  {"type": "load_level", "path": "M/name.json"}   relative to the levels root
  {"type": "reset"}
  {"type": "action", "motors": [...], "thrusters": [...]}
  {"type": "set_mode", "mode": "play" | "edit" | "paused"}
  {"type": "tick"}                                single step while paused
  {"type": "edit", "op": {...}}                   see editor.apply_edit
  {"type": "save"}

server -> client:
  {"type": "hello", "protocol": 1, "session": id, "tick_rate": n}
  {"type": "frame", "protocol": 1, "tick": n, "timestep": n, "mode": m,
   "reward": r, "done": b, "state_hash": h,
   "bodies": [...], "joints": [...], "thrusters": [...]}
  {"type": "level_doc", "doc": {...}}
  {"type": "error", "code": c, "detail": d}

Frames carry the full entity state every tick; ticks are monotonic per
session.  One env step runs per play-mode tick with the latest received
action (latest-action-wins), so a session's action log replayed through
the library reproduces the frame state-hash sequence exactly.
"""

from __future__ import annotations

import numpy as np

PROTOCOL_VERSION = 1

ROLE_NAMES = {0: "none", 1: "green", 2: "blue", 3: "red"}


def body_entries(sim, static) -> list[dict]:
    out = []
    for i in range(static.num_bodies):
        if not sim.body_active[i]:
            continue
        entry = {
            "slot": i,
            "kind": "polygon" if static.is_polygon(i) else "circle",
            "position": [float(sim.position[i, 0]), float(sim.position[i, 1])],
            "rotation": float(sim.rotation[i]),
            "velocity": [float(sim.velocity[i, 0]), float(sim.velocity[i, 1])],
            "angular_velocity": float(sim.angular_velocity[i]),
            "role": ROLE_NAMES[int(sim.role[i])],
            "fixated": bool(sim.fixated[i]),
        }
        if static.is_polygon(i):
            n = int(sim.vertex_count[i])
            entry["vertices"] = [[float(x), float(y)] for x, y in sim.vertices[i, :n]]
        else:
            entry["radius"] = float(sim.radius[i])
        out.append(entry)
    return out


def _world_point(sim, body, anchor):
    c = np.cos(float(sim.rotation[body]))
    s = np.sin(float(sim.rotation[body]))
    ax, ay = float(anchor[0]), float(anchor[1])
    return [
        float(sim.position[body, 0]) + c * ax - s * ay,
        float(sim.position[body, 1]) + s * ax + c * ay,
    ]


def joint_entries(sim, static) -> list[dict]:
    out = []
    for j in range(static.num_joints):
        if not sim.joint_active[j]:
            continue
        out.append(
            {
                "slot": j,
                "body_a": int(sim.joint_body_a[j]),
                "body_b": int(sim.joint_body_b[j]),
                "world_anchor": _world_point(sim, int(sim.joint_body_a[j]), sim.joint_anchor_a[j]),
                "is_fixed": bool(sim.joint_is_fixed[j]),
                "motor_on": bool(sim.motor_on[j]),
                "binding": int(sim.joint_binding[j]),
            }
        )
    return out


def thruster_entries(sim, static) -> list[dict]:
    out = []
    for t in range(static.num_thrusters):
        if not sim.thruster_active[t]:
            continue
        body = int(sim.thruster_body[t])
        out.append(
            {
                "slot": t,
                "body": body,
                "world_anchor": _world_point(sim, body, sim.thruster_anchor[t]),
                "world_angle": float(sim.rotation[body]) + float(sim.thruster_rotation[t]),
                "power": float(sim.thruster_power[t]),
                "binding": int(sim.thruster_binding[t]),
            }
        )
    return out


def frame_message(tick, mode, episode, static, reward, done, state_hash) -> dict:
    sim = episode.sim
    return {
        "type": "frame",
        "protocol": PROTOCOL_VERSION,
        "tick": tick,
        "timestep": episode.timestep,
        "mode": mode,
        "reward": reward,
        "done": done,
        "state_hash": state_hash,
        "bodies": body_entries(sim, static),
        "joints": joint_entries(sim, static),
        "thrusters": thruster_entries(sim, static),
    }


def error_message(code: str, detail: str) -> dict:
    return {"type": "error", "code": code, "detail": detail}
