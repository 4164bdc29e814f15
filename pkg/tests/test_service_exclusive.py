import pytest
from fastapi.testclient import TestClient

from boxarena.service import create_app


@pytest.fixture()
def client():
    with TestClient(create_app()) as c:
        yield c


def test_live_session_cannot_be_hijacked(client):
    with client.websocket_connect("/ws") as first:
        sid = first.receive_json()["session"]
        with client.websocket_connect(f"/ws?session={sid}") as second:
            busy = second.receive_json()
            assert busy["type"] == "error" and busy["code"] == "session_busy"
            hello = second.receive_json()
            assert hello["type"] == "hello"
            assert hello["session"] != sid  # got a fresh session instead
