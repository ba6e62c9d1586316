"""Command-line client: exit codes, output formats, and the serve loop."""

import json
import subprocess
import sys

import pytest
import requests

from conftest import FIXTURES, REPO_ROOT

DAY = "2024-03-01"
MIX = "4006381333931"

CREATE_ARGS = [
    "profile", "create",
    "--name", "Arun",
    "--gender", "male",
    "--age", "20",
    "--height", "170",
    "--weight", "60",
    "--activity", "high",
    "--email", "arun@example.com",
]


def run_cli(url, *args, **kwargs):
    return subprocess.run(
        [sys.executable, "-m", "healthwise", "--server", url, *args],
        capture_output=True,
        text=True,
        timeout=60,
        cwd=REPO_ROOT,
        **kwargs,
    )


def spawn_server(data_dir):
    proc = subprocess.Popen(
        [
            sys.executable, "-m", "healthwise",
            "serve", "--port", "0", "--data-dir", str(data_dir),
        ],
        stdout=subprocess.PIPE,
        stderr=subprocess.STDOUT,
        text=True,
        bufsize=1,
        cwd=REPO_ROOT,
    )
    line = proc.stdout.readline().strip()
    assert line.startswith("listening on http://127.0.0.1:"), line
    return proc, line.removeprefix("listening on ")


@pytest.fixture(scope="module")
def cli_server(tmp_path_factory):
    """A served data dir with the reference profile already created."""
    proc, url = spawn_server(tmp_path_factory.mktemp("cli-data"))
    result = run_cli(url, *CREATE_ARGS)
    assert result.returncode == 0, result.stderr
    assert result.stdout == "created u1\n"
    yield url
    proc.terminate()
    proc.wait(timeout=10)


def test_gate_blocks_barcode_features_until_profile_exists(tmp_path):
    proc, url = spawn_server(tmp_path / "empty")
    try:
        result = run_cli(
            url, "check",
            "--user", "u1", "--code", MIX, "--qty", "100", "--meal", "lunch",
            "--date", DAY,
        )
        assert result.returncode == 1
        assert "NoSuchUser: create a profile first" in result.stderr
        result = run_cli(url, "scan", str(FIXTURES / "stabilo_3px.pgm"))
        assert result.returncode == 1 and "create a profile first" in result.stderr
    finally:
        proc.terminate()
        proc.wait(timeout=10)


def test_scan_prints_decoded_digits(cli_server):
    result = run_cli(cli_server, "scan", str(FIXTURES / "stabilo_3px.pgm"))
    assert result.returncode == 0, result.stderr
    assert result.stdout == MIX + "\n"


def test_scan_json_output(cli_server):
    result = run_cli(cli_server, "--output", "json", "scan", str(FIXTURES / "stabilo_3px.pgm"))
    assert result.returncode == 0
    assert result.stdout == '{"gtin":"%s"}\n' % MIX


def test_scan_unreadable_file(cli_server):
    result = run_cli(cli_server, "scan", "no-such.pgm")
    assert result.returncode == 1
    assert "ValidationError" in result.stderr


def test_lookup_human_output(cli_server):
    result = run_cli(cli_server, "lookup", MIX)
    assert result.returncode == 0
    assert result.stdout.splitlines() == [
        f"{MIX}  Crunchy Trail Mix",
        "  per 100 g: 500 kCal, protein 8 g, fat 25 g, carb 60 g",
    ]


def test_lookup_unknown_product_exits_1(cli_server):
    result = run_cli(cli_server, "lookup", "1234567890128")
    assert result.returncode == 1
    assert result.stderr.startswith("ProductNotFound:")


def test_check_json_matches_rest_facade_bytes(cli_server):
    result = subprocess.run(
        [
            sys.executable, "-m", "healthwise",
            "--server", cli_server, "--output", "json",
            "check",
            "--user", "u1", "--code", MIX, "--qty", "300", "--meal", "breakfast",
            "--date", DAY,
        ],
        capture_output=True,
        timeout=60,
        cwd=REPO_ROOT,
    )
    assert result.returncode == 0, result.stderr
    rest = requests.post(
        cli_server + "/api/check",
        json={"userId": "u1", "date": DAY, "barcode": MIX, "quantityG": 300, "meal": "breakfast"},
        timeout=30,
    )
    assert result.stdout == rest.content + b"\n"
    payload = json.loads(result.stdout)
    assert (payload["standardKcal"], payload["requiredKcal"]) == (2200, 2750)


def test_consume_and_red_verdict_sequence(cli_server):
    result = run_cli(
        cli_server, "consume",
        "--user", "u1", "--code", MIX, "--qty", "300", "--meal", "breakfast", "--date", DAY,
    )
    assert result.returncode == 0
    assert result.stdout.rstrip().endswith("1500 kCal")
    result = run_cli(
        cli_server, "consume",
        "--user", "u1", "--code", MIX, "--qty", "200", "--meal", "lunch", "--date", DAY,
    )
    assert result.returncode == 0
    assert result.stdout.startswith("recorded e")
    assert result.stdout.rstrip().endswith("1000 kCal")

    check = run_cli(
        cli_server, "check",
        "--user", "u1", "--code", MIX, "--qty", "100", "--meal", "dinner", "--date", DAY,
    )
    assert check.returncode == 0
    lines = check.stdout.splitlines()
    assert lines[0] == "required 2750 kCal, consumed 2500 kCal, this item 500 kCal"
    assert lines[1] == "balance -250 kCal  RED"  # no ANSI codes when piped
    assert lines[2] == "exceeded by 250 kCal; to burn it off:"
    assert "  skipping: 21 min" in lines
    assert "  walking: 63 min" in lines


def test_green_verdict_plain(cli_server):
    check = run_cli(
        cli_server, "check",
        "--user", "u1", "--code", MIX, "--qty", "40", "--meal", "lunch",
        "--date", "2030-06-01",
    )
    assert check.returncode == 0
    lines = check.stdout.splitlines()
    assert lines[0] == "required 2750 kCal, consumed 0 kCal, this item 200 kCal"
    assert lines[1] == "balance 2550 kCal  GREEN"
    assert len(lines) == 2


def test_scan_chain_into_check(cli_server):
    result = run_cli(
        cli_server, "scan", str(FIXTURES / "stabilo_3px.pgm"),
        "--user", "u1", "--qty", "40", "--meal", "lunch", "--date", "2030-06-02",
    )
    assert result.returncode == 0
    lines = result.stdout.splitlines()
    assert lines[0] == MIX
    assert lines[1].startswith("required 2750 kCal")

    result = run_cli(
        cli_server, "scan", str(FIXTURES / "stabilo_3px.pgm"), "--user", "u1"
    )
    assert result.returncode == 1
    assert "requires --qty and --meal" in result.stderr


def test_exercises_listing(cli_server):
    result = run_cli(cli_server, "exercises", "--excess", "250")
    assert result.returncode == 0
    assert result.stdout.splitlines() == [
        "skipping: 21 min",
        "jogging: 25 min",
        "cycling: 36 min",
        "walking: 63 min",
    ]
    result = run_cli(cli_server, "exercises", "--excess", "0")
    assert result.stdout == "nothing to burn\n"


def test_profile_list_output(cli_server):
    result = run_cli(cli_server, "profile", "list")
    assert result.returncode == 0
    assert "u1  Arun  male, 20 y, 170 cm, 60 kg, high  <arun@example.com>" in result.stdout


def test_validation_error_exits_1(cli_server):
    bad = [a if a != "20" else "0" for a in CREATE_ARGS]
    result = run_cli(cli_server, *bad)
    assert result.returncode == 1
    assert result.stderr.startswith("ValidationError:")
    assert "age" in result.stderr


def test_missing_required_flag_exits_2(cli_server):
    result = run_cli(cli_server, "check", "--user", "u1")
    assert result.returncode == 2
    assert "usage" in result.stderr


def test_unreachable_server_exits_1(tmp_path):
    result = run_cli("http://127.0.0.1:9", "lookup", MIX)
    assert result.returncode == 1
    assert result.stderr.startswith("TransportError:")


def test_catalog_import_offline(tmp_path):
    data_dir = tmp_path / "cat-data"
    source = tmp_path / "extra.jsonl"
    source.write_text(
        json.dumps({
            "gtin13": "1234567890128",
            "name": "Imported Biscuits",
            "energy_kcal_per_100g": 450,
        }) + "\n"
    )
    result = subprocess.run(
        [
            sys.executable, "-m", "healthwise",
            "catalog", "import", str(source), "--data-dir", str(data_dir),
        ],
        capture_output=True,
        text=True,
        timeout=60,
        cwd=REPO_ROOT,
    )
    assert result.returncode == 0, result.stderr
    assert result.stdout.startswith("imported 1 products into ")

    proc, url = spawn_server(data_dir)
    try:
        lookup = run_cli(url, "lookup", "1234567890128")
        assert lookup.returncode == 0
        assert "Imported Biscuits" in lookup.stdout
    finally:
        proc.terminate()
        proc.wait(timeout=10)

    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"gtin13": "123"}\n')
    result = subprocess.run(
        [
            sys.executable, "-m", "healthwise",
            "catalog", "import", str(bad), "--data-dir", str(data_dir),
        ],
        capture_output=True,
        text=True,
        timeout=60,
        cwd=REPO_ROOT,
    )
    assert result.returncode == 1
