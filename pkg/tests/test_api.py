import pytest
from fastapi.testclient import TestClient

from graphtsp.config import settings
from graphtsp.main import VERSION, app, serve


DIAMOND = "4 5\n0 1\n1 2\n2 3\n0 3\n0 2\n"


@pytest.fixture
def client():
    with TestClient(app) as c:
        yield c


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {
        "status": "healthy",
        "service": "Graph-TSP Approximation Server",
        "version": VERSION,
    }


def test_solve(client):
    response = client.post("/api/v1/solve", json={"graph": DIAMOND})
    assert response.status_code == 200
    body = response.json()
    assert body["kind"] == "tour"
    assert body["edge_count"] == 4
    assert len(body["walk"]) == 4
    assert body["walk"][0][0] == 0 and body["walk"][-1][1] == 0
    assert body["certificate"]["olp"] == "4/1"
    assert body["certificate"]["cost_bound"] is None


def test_path(client):
    response = client.post("/api/v1/path", json={"graph": DIAMOND, "s": 1, "t": 3})
    assert response.status_code == 200
    body = response.json()
    assert (body["kind"], body["s"], body["t"], body["edge_count"]) == ("path", 1, 3, 3)
    assert body["walk"][0][0] == 1 and body["walk"][-1][1] == 3


def test_lp(client):
    body = client.post("/api/v1/lp", json={"graph": DIAMOND}).json()
    assert body["olp"] == "4/1"
    assert body["support"] == [[0, 1], [1, 2], [2, 3], [0, 3]]
    assert body["x"] == ["1/1"] * 4

    body = client.post("/api/v1/lp", json={"graph": "3 2\n0 1\n1 2\n", "s": 0, "t": 2}).json()
    assert body["olp"] == "2/1"


def test_oracle(client):
    assert client.post("/api/v1/oracle", json={"graph": DIAMOND}).json() == {"optimum": 4}
    body = client.post("/api/v1/oracle", json={"graph": DIAMOND, "s": 1, "t": 3}).json()
    assert body == {"optimum": 3}


@pytest.mark.parametrize(
    "url, payload",
    [
        ("/api/v1/solve", {"graph": "3 3\n0 1\n"}),
        ("/api/v1/solve", {"graph": ""}),
        ("/api/v1/path", {"graph": DIAMOND, "s": 0, "t": 7}),
        ("/api/v1/path", {"graph": DIAMOND, "s": -1, "t": 2}),
        ("/api/v1/lp", {"graph": DIAMOND, "s": 0}),
        ("/api/v1/oracle", {"graph": DIAMOND, "cutoff": 3}),
    ],
)
def test_client_errors(client, url, payload):
    assert client.post(url, json=payload).status_code == 422


def test_solver_errors_are_server_errors(client):
    response = client.post("/api/v1/solve", json={"graph": "4 2\n0 1\n2 3\n"})
    assert response.status_code == 500
    assert response.json()["detail"].startswith("DisconnectedGraphError")


def test_bench_stream(client):
    with client.websocket_connect("/api/ws/bench") as ws:
        ws.send_json({"specs": [{"family": "gap_tour", "k": 1}, {"family": "grid", "a": 2, "b": 2}]})
        first = ws.receive_json()
        second = ws.receive_json()
        done = ws.receive_json()
    assert first["type"] == "row" and first["row"]["instance"] == "gap_tour(1)"
    assert second["row"]["best_edges"] == 4
    assert done == {"type": "complete", "rows": 2}


def test_bench_stream_rejects_bad_requests(client):
    with client.websocket_connect("/api/ws/bench") as ws:
        ws.send_text("not json")
        message = ws.receive_json()
    assert message["type"] == "error"
    assert message["message"].startswith("Invalid request")

    with client.websocket_connect("/api/ws/bench") as ws:
        ws.send_json({"specs": [{"family": "tsplib"}]})
        assert ws.receive_json()["type"] == "error"


def test_serve_follows_the_settings(monkeypatch):
    calls = []
    monkeypatch.setattr("uvicorn.run", lambda target, **kwargs: calls.append((target, kwargs)))
    monkeypatch.setattr(settings, "LOG_LEVEL", "WARNING")
    serve(port=9000)
    ((target, kwargs),) = calls
    assert target == "graphtsp.main:app"
    assert kwargs == {"host": settings.HOST, "port": 9000, "reload": settings.RELOAD, "log_level": "warning"}
