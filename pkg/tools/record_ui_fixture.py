"""Record a scripted play/edit session into a fixture for the client tests.

Drives a real server session (paused, tick-stepped, so no wall clock is
involved), capturing every client message, every frame (tagged with how
many client messages preceded it), editor rejections, and a save/load
round trip.  The client test suite replays its protocol logic against
this transcript; the backend test suite replays the action log through
the library and matches the streamed hashes.
"""

import json
from pathlib import Path

import numpy as np
from fastapi.testclient import TestClient

from boxarena.levelio import load_level, serialize
from boxarena.service import create_app

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "frontend" / "tests" / "fixtures" / "session.json"


def main():
    level = load_level(ROOT / "levels" / "M" / "chase-ball.json")
    level_doc = json.loads(serialize(level))
    rng = np.random.default_rng(11)

    sent = []
    frames = []
    errors = []
    saved_doc = None

    app = create_app()
    with TestClient(app) as client, client.websocket_connect("/ws") as ws:
        def send(msg):
            sent.append(msg)
            ws.send_json(msg)

        def recv(wanted):
            for _ in range(50):
                msg = ws.receive_json()
                if msg["type"] == "frame":
                    msg["sentBefore"] = len(sent)
                    frames.append(msg)
                if msg["type"] == "error":
                    errors.append(msg)
                if msg["type"] == wanted:
                    return msg
            raise RuntimeError(f"no {wanted} message")

        hello = recv("hello")
        send({"type": "load_level", "doc": level_doc})
        recv("frame")
        send({"type": "set_mode", "mode": "paused"})
        recv("frame")
        send({"type": "reset"})
        recv("frame")
        start = len(frames)

        for _ in range(30):
            if rng.random() < 0.7:
                send({
                    "type": "action",
                    "motors": rng.integers(-1, 2, 2).astype(float).tolist(),
                    "thrusters": rng.integers(0, 2, 2).astype(float).tolist(),
                })
            send({"type": "tick"})
            recv("frame")

        # editor rejection catalogue
        send({"type": "set_mode", "mode": "edit"})
        recv("frame")
        rejections = {}
        probes = {
            "second_green": {"op": "set_role", "slot": 4, "role": "green"},
            "overlap": {
                "op": "add_entity",
                "kind": "polygon",
                "spec": {
                    "vertices": [[-0.3, -0.3], [0.3, -0.3], [0.3, 0.3], [-0.3, 0.3]],
                    "position": [4.4, 0.4],
                },
            },
            "last_controllable": {"op": "delete_entity", "kind": "thruster", "slot": 0},
        }
        for name, op in probes.items():
            send({"type": "edit", "op": op})
            rejections[name] = recv("error")

        send({"type": "save"})
        saved_doc = recv("level_doc")["doc"]

    # the documented reconstruction rule: one entry per stepped frame after
    # the reset, holding the latest action message sent before that frame
    expected_log = []
    current = {"motors": [0.0, 0.0], "thrusters": [0.0, 0.0]}
    cursor = 0
    last_timestep = 0
    for frame in frames[start:]:
        while cursor < frame["sentBefore"]:
            msg = sent[cursor]
            if msg["type"] == "action":
                current = {"motors": list(msg["motors"]), "thrusters": list(msg["thrusters"])}
            cursor += 1
        if frame["timestep"] > last_timestep:
            expected_log.append({k: list(v) for k, v in current.items()})
            last_timestep = frame["timestep"]

    fixture = {
        "hello": hello,
        "level_doc": level_doc,
        "saved_doc": saved_doc,
        "sent": sent,
        "frames": frames,
        "play_frames_start": start,
        "expected_action_log": expected_log,
        "rejections": rejections,
        "motor_count": 2,
        "thruster_count": 2,
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(fixture, indent=1))
    print(f"wrote {OUT} ({len(frames)} frames, {len(sent)} sent messages)")


if __name__ == "__main__":
    main()
