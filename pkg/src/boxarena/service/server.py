"""Session server: live play and level editing over a websocket.

One session per connected controller; play mode runs a fixed-rate tick
loop (latest-action-wins), edit mode never advances physics.  Sessions
survive a disconnect for a grace period so a client can reattach.
"""

from __future__ import annotations

import asyncio
import json
import time
import uuid
from pathlib import Path

import numpy as np
from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..engine.state import F32
from ..engine.step import SimulationDiverged
from ..env import Episode, EnvParams, reset
from ..harness.hashing import state_hash
from ..levelgen import Level
from ..levelio import LevelParseError, deserialize, serialize
from .editor import EditRejected, apply_edit
from .protocol import PROTOCOL_VERSION, error_message, frame_message

DEFAULT_TICK_RATE = 30
SESSION_GRACE_SECONDS = 60.0
MODES = ("play", "edit", "paused")


class Session:
    def __init__(self, session_id: str, tick_rate: int):
        self.id = session_id
        self.tick_rate = tick_rate
        self.level: Level | None = None
        self.params: EnvParams | None = None
        self.episode: Episode | None = None
        self.mode = "paused"
        self.tick = 0
        self.last_reward = 0.0
        self.ws: WebSocket | None = None
        self.disconnected_at: float | None = None
        self.motor_actions = None
        self.thruster_actions = None
        self.action_log: list[dict] = []

    def load(self, level: Level) -> None:
        self.level = level
        self.params = EnvParams(size_class=level.size_class, action_mode="continuous")
        self.reset_episode()
        self.mode = "play"

    def reset_episode(self) -> None:
        env_state = reset(self.level, self.params)
        self.episode = Episode(env_state.sim, self.params)
        static = self.level.static_params
        self.motor_actions = np.zeros(static.num_joints, F32)
        self.thruster_actions = np.zeros(static.num_thrusters, F32)
        self.action_log = []
        self.last_reward = 0.0

    def frame(self) -> dict:
        static = self.level.static_params
        return frame_message(
            self.tick, self.mode, self.episode, static,
            self.last_reward, self.episode.terminated,
            state_hash(self.episode.sim, static),
        )

    def step_once(self) -> None:
        """One env step with the latest action; records it for replay."""
        if self.episode.terminated:
            return
        self.action_log.append(
            {
                "motors": [float(v) for v in self.motor_actions],
                "thrusters": [float(v) for v in self.thruster_actions],
            }
        )
        try:
            reward, _ = self.episode.advance(self.motor_actions, self.thruster_actions)
            self.last_reward = reward
        except SimulationDiverged:
            self.reset_episode()


def create_app(
    levels_root: str | Path | None = None,
    static_dir: str | Path | None = None,
    tick_rate: int = DEFAULT_TICK_RATE,
) -> FastAPI:
    app = FastAPI(title="boxarena play service")
    sessions: dict[str, Session] = {}
    app.state.sessions = sessions
    levels_root = Path(levels_root) if levels_root else None

    def prune():
        now = time.monotonic()
        for sid in list(sessions):
            s = sessions[sid]
            if s.ws is None and s.disconnected_at and now - s.disconnected_at > SESSION_GRACE_SECONDS:
                del sessions[sid]

    @app.get("/healthz")
    async def health():
        return JSONResponse({"ok": True, "protocol": PROTOCOL_VERSION, "sessions": len(sessions)})

    @app.websocket("/ws")
    async def ws_endpoint(websocket: WebSocket, session: str | None = None):
        await websocket.accept()
        prune()
        sess = sessions.get(session) if session else None
        if sess is not None and sess.ws is not None:
            # one connected controller per session; a live one keeps it
            await websocket.send_json(
                error_message("session_busy", "session already has a connected controller")
            )
            sess = None
        if sess is None:
            sess = Session(uuid.uuid4().hex, tick_rate)
            sessions[sess.id] = sess
        sess.ws = websocket
        sess.disconnected_at = None
        await websocket.send_json(
            {
                "type": "hello",
                "protocol": PROTOCOL_VERSION,
                "session": sess.id,
                "tick_rate": sess.tick_rate,
            }
        )
        loop_task = asyncio.create_task(_tick_loop(sess))
        try:
            while True:
                text = await websocket.receive_text()
                reply = _handle(sess, text, levels_root)
                for msg in reply:
                    await websocket.send_json(msg)
        except WebSocketDisconnect:
            pass
        finally:
            loop_task.cancel()
            sess.ws = None
            sess.disconnected_at = time.monotonic()

    if static_dir and Path(static_dir).is_dir():
        app.mount("/app", StaticFiles(directory=str(static_dir), html=True), name="app")

    return app


async def _tick_loop(sess: Session):
    while True:
        await asyncio.sleep(1.0 / sess.tick_rate)
        if sess.mode != "play" or sess.episode is None or sess.ws is None:
            continue
        sess.step_once()
        sess.tick += 1
        try:
            await sess.ws.send_json(sess.frame())
        except Exception:
            return


def _handle(sess: Session, text: str, levels_root) -> list[dict]:
    """Process one client message; returns the messages to send back."""
    try:
        msg = json.loads(text)
        if not isinstance(msg, dict) or not isinstance(msg.get("type"), str):
            raise ValueError("message must be an object with a string 'type'")
    except ValueError as exc:
        return [error_message("malformed", str(exc))]
    kind = msg["type"]

    if kind == "load_level":
        try:
            if "doc" in msg:
                level = deserialize(json.dumps(msg["doc"]))
            elif "path" in msg:
                if levels_root is None:
                    return [error_message("no_levels_root", "server has no levels directory")]
                target = (levels_root / msg["path"]).resolve()
                if not str(target).startswith(str(levels_root.resolve())):
                    return [error_message("bad_path", "path escapes the levels directory")]
                level = deserialize(target.read_bytes())
            else:
                return [error_message("malformed", "load_level needs 'doc' or 'path'")]
        except (LevelParseError, OSError) as exc:
            return [error_message("bad_level", str(exc))]
        sess.load(level)
        sess.tick += 1
        return [sess.frame()]

    if sess.level is None:
        return [error_message("no_level", "load a level first")]

    if kind == "reset":
        sess.reset_episode()
        sess.tick += 1
        return [sess.frame()]

    if kind == "action":
        static = sess.level.static_params
        try:
            motors = np.asarray(msg.get("motors", []), F32)
            thrusters = np.asarray(msg.get("thrusters", []), F32)
            if motors.shape != (static.num_joints,) or thrusters.shape != (static.num_thrusters,):
                raise ValueError(
                    f"need {static.num_joints} motor and {static.num_thrusters} thruster values"
                )
            if np.abs(motors).max(initial=0) > 1 or thrusters.min(initial=0) < 0 or thrusters.max(initial=0) > 1:
                raise ValueError("motor values lie in [-1, 1], thruster values in [0, 1]")
        except (ValueError, TypeError) as exc:
            return [error_message("bad_action", str(exc))]
        sess.motor_actions[:] = motors
        sess.thruster_actions[:] = thrusters
        return []

    if kind == "set_mode":
        mode = msg.get("mode")
        if mode not in MODES:
            return [error_message("bad_mode", f"mode must be one of {MODES}")]
        sess.mode = mode
        sess.tick += 1
        return [sess.frame()]

    if kind == "tick":
        if sess.mode != "paused":
            return [error_message("bad_mode", "manual tick only applies while paused")]
        sess.step_once()
        sess.tick += 1
        return [sess.frame()]

    if kind == "edit":
        if sess.mode != "edit":
            return [error_message("bad_mode", "edits only apply in edit mode")]
        try:
            sess.level = apply_edit(sess.level, msg.get("op", {}))
        except EditRejected as exc:
            return [error_message(exc.code, exc.detail)]
        sess.reset_episode()
        sess.tick += 1
        return [sess.frame()]

    if kind == "save":
        return [{"type": "level_doc", "doc": json.loads(serialize(sess.level))}]

    return [error_message("unknown_type", f"unknown message type {kind!r}")]


def serve(bind_address: str = "127.0.0.1:8000", levels_root=None, static_dir=None):
    """Run the service until interrupted."""
    import uvicorn

    host, _, port = bind_address.partition(":")
    app = create_app(levels_root=levels_root, static_dir=static_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000), log_level="warning")


def main(argv=None):
    import argparse

    parser = argparse.ArgumentParser(description="boxarena play/edit session server")
    parser.add_argument("--bind", default="127.0.0.1:8000")
    parser.add_argument("--levels", default="levels", help="levels directory to serve")
    parser.add_argument("--frontend", default="frontend/dist", help="static client bundle")
    args = parser.parse_args(argv)
    serve(args.bind, levels_root=args.levels, static_dir=args.frontend)


if __name__ == "__main__":
    main()
