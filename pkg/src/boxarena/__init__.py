"""boxarena: a deterministic 2D impulse-physics arena with procedurally
generated control tasks, a benchmark harness, and a live play/edit server."""

from . import engine, env, geometry, harness, levelgen, levelio, render

__version__ = "0.1.0"
