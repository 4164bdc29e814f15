from .editor import EditRejected, apply_edit
from .protocol import PROTOCOL_VERSION
from .server import create_app, serve
