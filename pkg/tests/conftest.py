"""Shared fixtures: throwaway servers, SOAP helpers, criterion reporting."""

import json
from pathlib import Path

import pytest
import requests

from healthwise import wire
from healthwise.config import ServerConfig, load_config
from healthwise.server import NutritionServer

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"

TABLE1_PROFILE = {
    "name": "Arun",
    "gender": "male",
    "age": "20",
    "heightCm": "170",
    "weightKg": "60",
    "activity": "high",
    "email": "arun@example.com",
}


def soap_post(base_url: str, body: bytes) -> bytes:
    resp = requests.post(
        base_url + "/soap",
        data=body,
        headers={"Content-Type": wire.CONTENT_TYPE},
        timeout=30,
    )
    assert resp.status_code == 200, resp.status_code
    return resp.content


def soap_call(base_url: str, op_name: str, fields: dict) -> wire.ParsedEnvelope:
    return wire.parse_envelope(soap_post(base_url, wire.render_request(op_name, fields)))


def api_call(base_url: str, method: str, path: str, body=None):
    """REST helper; returns (status, decoded json)."""
    data = json.dumps(body).encode() if body is not None else None
    resp = requests.request(
        method,
        base_url + path,
        data=data,
        headers={"Content-Type": "application/json"} if data else {},
        timeout=30,
    )
    return resp.status_code, resp.json()


@pytest.fixture
def make_server(tmp_path):
    """Factory for started servers on ephemeral ports; all stopped at teardown."""
    servers = []
    counter = 0

    def factory(data_dir: Path | None = None, config: ServerConfig | None = None) -> NutritionServer:
        nonlocal counter
        if config is None:
            if data_dir is None:
                counter += 1
                data_dir = tmp_path / f"srv{counter}"
            config = load_config(port=0, data_dir=data_dir, env={})
        server = NutritionServer(config).start()
        servers.append(server)
        return server

    yield factory
    for server in servers:
        server.shutdown()


@pytest.fixture
def server(make_server) -> NutritionServer:
    return make_server()


@pytest.fixture
def seeded_user(server) -> tuple[NutritionServer, str]:
    """A started server plus the reference profile's id."""
    parsed = soap_call(server.url, "CreateProfile", TABLE1_PROFILE)
    assert parsed.kind == "response", parsed.fields
    return server, parsed.fields["userId"]


# -- acceptance criterion reporting ---------------------------------------


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None and report.when == "call":
        report._criterion = (marker.args[0], marker.args[1] if len(marker.args) > 1 else "")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = {}
    for reports in terminalreporter.stats.values():
        for report in reports:
            criterion = getattr(report, "_criterion", None)
            if criterion is not None:
                rows[criterion] = report.outcome
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), outcome in sorted(rows.items()):
        word = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {word} - {title}")
