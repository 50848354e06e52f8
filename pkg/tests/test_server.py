"""Streamable HTTP MCP 서버 테스트"""

import pytest
from fastapi.testclient import TestClient

from recollement_verifier.server import app
from recollement_verifier.utils.fixtures import job_spec_text


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def rpc(method, params=None, msg_id=1):
    body = {"jsonrpc": "2.0", "id": msg_id, "method": method}
    if params is not None:
        body["params"] = params
    return body


def test_root_and_health(client):
    assert client.get("/health").json() == {"status": "healthy"}
    assert client.get("/").json()["mcp_endpoint"] == "/mcp"
    manifest = client.get("/.well-known/mcp.json").json()
    assert len(manifest["tools"]) == 3


def test_initialize(client):
    response = client.post("/mcp", json=rpc("initialize"))
    assert response.status_code == 200
    assert response.json()["result"]["serverInfo"]["name"] == "recollement-verifier"


def test_notification_is_accepted(client):
    response = client.post("/mcp", json={"jsonrpc": "2.0", "method": "notifications/initialized"})
    assert response.status_code == 202


def test_tools_list(client):
    tools = client.post("/mcp", json=rpc("tools/list")).json()["result"]["tools"]
    assert tools[0]["inputSchema"]["required"] == ["spec_text"]


def test_tools_call_verification(client):
    params = {"name": "run_verification", "arguments": {"spec_text": job_spec_text("A2", "check_axioms", E=["2"])}}
    result = client.post("/mcp", json=rpc("tools/call", params)).json()["result"]
    assert result["isError"] is False
    text = result["content"][0]["text"]
    assert text.startswith("# ✅ check_axioms: OK")
    assert "```json" in text


def test_tools_call_refused_is_not_an_error(client):
    spec = job_spec_text("A2", "glue_weak_tau", E=["1"], Z_A="all", Z_C="all")
    params = {"name": "run_verification", "arguments": {"spec_text": spec}}
    result = client.post("/mcp", json=rpc("tools/call", params)).json()["result"]
    assert result["isError"] is False
    assert "REFUSED" in result["content"][0]["text"]


def test_tools_call_errors(client):
    body = client.post("/mcp", json=rpc("tools/call", {"name": "nope", "arguments": {}})).json()
    assert "not found" in body["error"]

    body = client.post("/mcp", json=rpc("tools/call", {"name": "run_verification", "arguments": {}})).json()
    assert "spec_text" in body["error"]

    params = {"name": "run_verification", "arguments": {"spec_text": "[task]\nname = x\n"}}
    result = client.post("/mcp", json=rpc("tools/call", params)).json()["result"]
    assert result["isError"] is True


def test_fixture_tools(client):
    result = client.post("/mcp", json=rpc("tools/call", {"name": "list_fixtures", "arguments": {}})).json()["result"]
    assert "A2" in result["content"][0]["text"]

    params = {"name": "get_fixture", "arguments": {"name": "MISSING"}}
    result = client.post("/mcp", json=rpc("tools/call", params)).json()["result"]
    assert result["isError"] is True


def test_batch_and_unknown_method(client):
    body = client.post("/mcp", json=[rpc("ping", msg_id=1), rpc("bogus", msg_id=2)]).json()
    assert body[0]["result"] == {}
    assert "Method not found" in body[1]["error"]


def test_parse_error(client):
    response = client.post("/mcp", content=b"{not json", headers={"Content-Type": "application/json"})
    assert response.status_code == 400


def test_get_requires_event_stream(client):
    assert client.get("/mcp").status_code == 406
