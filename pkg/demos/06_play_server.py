"""
The live play/edit server
=========================

Serves websocket sessions so a human can drive scenes in real time and
edit levels.  In play mode each session ticks at 30 env steps per second,
applying the latest received action; edit mode freezes physics and applies
validated level edits.  The browser client in frontend/ connects to this.

Run it:

    python demos/06_play_server.py --bind 127.0.0.1:8000

then open http://127.0.0.1:8000/app/ (after building the frontend) or
talk to ws://127.0.0.1:8000/ws directly with the documented protocol.
"""

import argparse
from pathlib import Path

from boxarena.service import serve

ROOT = Path(__file__).resolve().parent.parent

parser = argparse.ArgumentParser()
parser.add_argument("--bind", default="127.0.0.1:8000")
args = parser.parse_args()

print(f"serving on {args.bind}; levels from {ROOT / 'levels'}")
serve(
    args.bind,
    levels_root=ROOT / "levels",
    static_dir=ROOT / "frontend" / "dist",
)
