"""HTTP server: golden pair, SOAP/REST twin equivalence, durability, faults."""

import json
import os
import threading

import requests

from healthwise import wire
from healthwise.errors import fault_code

from conftest import FIXTURES, GOLDEN, TABLE1_PROFILE, api_call, soap_call, soap_post

DAY = "2024-03-01"
MIX = "4006381333931"


def consume_fields(user_id, qty, meal, barcode=MIX, date=DAY):
    return {
        "userId": user_id,
        "date": date,
        "barcode": barcode,
        "quantityG": str(qty),
        "meal": meal,
    }


def test_golden_pair_end_to_end(server):
    request = (GOLDEN / "get_product_request.xml").read_bytes()
    resp = requests.post(
        server.url + "/soap",
        data=request,
        headers={"Content-Type": wire.CONTENT_TYPE},
        timeout=30,
    )
    assert resp.status_code == 200
    assert resp.headers["Content-Type"] == wire.CONTENT_TYPE
    assert resp.content == (GOLDEN / "get_product_response.xml").read_bytes()


def test_product_not_found_fault_bytes(server):
    body = wire.render_request("GetProduct", {"barcode": "1234567890128"})
    assert soap_post(server.url, body) == (GOLDEN / "product_not_found_fault.xml").read_bytes()


def test_malformed_and_unknown_bodies_become_faults(server):
    for body in (b"not xml at all", b"<Envelope><Body></Body></Envelope>"):
        parsed = wire.parse_envelope(soap_post(server.url, body))
        assert parsed.is_fault and parsed.fields["code"] == "MalformedXml"
    parsed = wire.parse_envelope(
        soap_post(server.url, b"<Envelope><Body><Mystery/></Body></Envelope>")
    )
    assert parsed.is_fault and parsed.fields["code"] == "UnknownOperation"
    # responses are not requests; sending one back is an unknown operation
    parsed = wire.parse_envelope(
        soap_post(server.url, (GOLDEN / "get_product_response.xml").read_bytes())
    )
    assert parsed.is_fault and parsed.fields["code"] == "UnknownOperation"


def test_soap_rejects_non_post(server):
    resp = requests.get(server.url + "/soap", timeout=30)
    assert resp.status_code == 405


def test_twin_protocols_observationally_equal(make_server):
    """The same operation sequence through XML and JSON yields equal payloads."""
    soap_server = make_server()
    rest_server = make_server()

    def soap_step(op, fields):
        parsed = soap_call(soap_server.url, op, fields)
        assert parsed.kind == "response", parsed.fields
        return wire.typed_payload(parsed.name, parsed.fields)

    def rest_step(method, path, body=None):
        status, payload = api_call(rest_server.url, method, path, body)
        assert status == 200, payload
        return payload

    profile_json = {**TABLE1_PROFILE, "age": 20, "heightCm": 170, "weightKg": 60}

    steps = [
        (
            ("CreateProfile", TABLE1_PROFILE),
            ("POST", "/api/users", profile_json),
        ),
        (("GetProduct", {"barcode": MIX}), ("GET", f"/api/products/{MIX}", None)),
        (
            ("CheckEnergy", consume_fields("u1", 0, "breakfast")),
            ("POST", "/api/check", {**consume_fields("u1", 0, "breakfast"), "quantityG": 0}),
        ),
        (
            ("AddConsumption", consume_fields("u1", 300, "breakfast")),
            ("POST", "/api/consume", {**consume_fields("u1", 300, "breakfast"), "quantityG": 300}),
        ),
        (
            ("CheckEnergy", consume_fields("u1", 200, "lunch")),
            ("POST", "/api/check", {**consume_fields("u1", 200, "lunch"), "quantityG": 200}),
        ),
        (
            ("AddConsumption", consume_fields("u1", 200, "lunch")),
            ("POST", "/api/consume", {**consume_fields("u1", 200, "lunch"), "quantityG": 200}),
        ),
        (
            ("CheckEnergy", consume_fields("u1", 100, "dinner")),
            ("POST", "/api/check", {**consume_fields("u1", 100, "dinner"), "quantityG": 100}),
        ),
        (
            ("GetExercises", {"excessKcal": "250"}),
            ("GET", "/api/exercises?excess=250", None),
        ),
        (
            ("UpdateProfile", {**TABLE1_PROFILE, "userId": "u1", "weightKg": "65"}),
            ("PUT", "/api/users/u1", {**profile_json, "weightKg": 65}),
        ),
        (("GetProfiles", {}), ("GET", "/api/users", None)),
        (("DeleteProfile", {"userId": "u1"}), ("DELETE", "/api/users/u1", None)),
        (("GetProfiles", {}), ("GET", "/api/users", None)),
    ]
    for (op, fields), (method, path, body) in steps:
        assert soap_step(op, fields) == rest_step(method, path, body), op


def test_check_sequence_values(seeded_user):
    server, user_id = seeded_user
    first = soap_call(server.url, "CheckEnergy", consume_fields(user_id, 300, "breakfast"))
    typed = wire.typed_payload("CheckEnergyResponse", first.fields)
    assert typed == {
        "standardKcal": 2200,
        "requiredKcal": 2750,
        "consumedKcal": 0,
        "candidateKcal": 1500,
        "balanceKcal": 1250,
        "status": "green",
        "excessKcal": 0,
        "suggestions": [],
    }


def test_check_with_zero_quantity_skips_catalog(seeded_user):
    server, user_id = seeded_user
    fields = consume_fields(user_id, 0, "lunch", barcode="9999999999990")  # not in catalog
    parsed = soap_call(server.url, "CheckEnergy", fields)
    assert parsed.kind == "response"
    assert parsed.fields["candidateKcal"] == "0"
    # consuming zero grams is still an error
    parsed = soap_call(server.url, "AddConsumption", consume_fields(user_id, 0, "lunch"))
    assert parsed.is_fault and parsed.fields["code"] == "NonPositiveQuantity"


def test_delete_then_check_is_no_such_user(seeded_user):
    server, user_id = seeded_user
    assert soap_call(server.url, "DeleteProfile", {"userId": user_id}).kind == "response"
    parsed = soap_call(server.url, "CheckEnergy", consume_fields(user_id, 100, "lunch"))
    assert parsed.is_fault and parsed.fields["code"] == "NoSuchUser"


def test_rest_status_mapping(server, make_server):
    status, payload = api_call(server.url, "GET", "/api/products/1234567890128")
    assert status == 404 and payload["error"]["code"] == "ProductNotFound"
    status, payload = api_call(server.url, "DELETE", "/api/users/u99")
    assert status == 404 and payload["error"]["code"] == "NoSuchUser"
    status, payload = api_call(server.url, "GET", "/api/products/123")
    assert status == 400 and payload["error"]["code"] == "UnsupportedLength"
    status, payload = api_call(server.url, "POST", "/api/users", {"name": "x"})
    assert status == 400 and payload["error"]["code"] == "MissingField"
    status, payload = api_call(server.url, "GET", "/api/nope")
    assert status == 404 and payload["error"]["code"] == "UnknownOperation"
    resp = requests.post(server.url + "/api/check", data=b"{not json", timeout=30)
    assert resp.status_code == 400
    resp = requests.get(server.url + "/completely/elsewhere", timeout=30)
    assert resp.status_code == 404


def test_rest_storage_failure_maps_to_500(make_server, tmp_path):
    data_dir = tmp_path / "data500"
    server = make_server(data_dir=data_dir)
    api_call(server.url, "POST", "/api/users", {**TABLE1_PROFILE, "age": 20, "heightCm": 170, "weightKg": 60})
    log_path = data_dir / "log.jsonl"
    os.mkdir(log_path)  # append will fail: path is a directory
    body = {**consume_fields("u1", 100, "lunch"), "quantityG": 100}
    status, payload = api_call(server.url, "POST", "/api/consume", body)
    assert status == 500 and payload["error"]["code"] == "StorageFailure"
    os.rmdir(log_path)
    status, payload = api_call(server.url, "POST", "/api/consume", body)
    assert status == 200 and payload["entryId"] == "e1"


def test_cors_preflight_and_headers(server):
    resp = requests.options(server.url + "/api/check", timeout=30)
    assert resp.status_code == 204
    assert resp.headers["Access-Control-Allow-Origin"] == "*"
    assert "POST" in resp.headers["Access-Control-Allow-Methods"]
    status_resp = requests.get(server.url + "/api/users", timeout=30)
    assert status_resp.headers["Access-Control-Allow-Origin"] == "*"


def test_outbox_appends_one_notification_per_consume(make_server, tmp_path):
    data_dir = tmp_path / "databox"
    server = make_server(data_dir=data_dir)
    soap_call(server.url, "CreateProfile", TABLE1_PROFILE)
    soap_call(server.url, "CheckEnergy", consume_fields("u1", 300, "breakfast"))
    outbox_path = data_dir / "outbox.jsonl"
    assert not outbox_path.exists() or outbox_path.read_bytes() == b""

    parsed = soap_call(server.url, "AddConsumption", consume_fields("u1", 300, "breakfast"))
    assert parsed.kind == "response" and "warning" not in parsed.fields
    parsed = soap_call(server.url, "AddConsumption", consume_fields("u1", 200, "lunch"))
    assert parsed.kind == "response"

    records = [json.loads(l) for l in outbox_path.read_text().splitlines() if l.strip()]
    assert len(records) == 2
    for record, meal in zip(records, ("breakfast", "lunch")):
        assert record["to"] == TABLE1_PROFILE["email"]
        assert "Crunchy Trail Mix" in record["subject"]
        assert "Crunchy Trail Mix" in record["body"]
        assert meal in record["body"]


def test_outbox_failure_warns_but_entry_stands(make_server, tmp_path):
    data_dir = tmp_path / "datawarn"
    server = make_server(data_dir=data_dir)
    soap_call(server.url, "CreateProfile", TABLE1_PROFILE)
    os.mkdir(data_dir / "outbox.jsonl")  # appends now fail

    parsed = soap_call(server.url, "AddConsumption", consume_fields("u1", 300, "breakfast"))
    assert parsed.kind == "response"
    assert "notification could not be written" in parsed.fields["warning"]
    status, payload = api_call(server.url, "GET", "/api/users/u1/log?date=" + DAY)
    assert status == 200 and len(payload["entries"]) == 1

    os.rmdir(data_dir / "outbox.jsonl")
    parsed = soap_call(server.url, "AddConsumption", consume_fields("u1", 100, "lunch"))
    assert parsed.kind == "response" and "warning" not in parsed.fields


def test_restart_preserves_all_state(make_server, tmp_path):
    data_dir = tmp_path / "datadur"
    first = make_server(data_dir=data_dir)
    soap_call(first.url, "CreateProfile", TABLE1_PROFILE)
    soap_call(first.url, "AddConsumption", consume_fields("u1", 300, "breakfast"))
    soap_call(first.url, "AddConsumption", consume_fields("u1", 200, "lunch"))
    profiles_before = soap_call(first.url, "GetProfiles", {}).fields
    _, log_before = api_call(first.url, "GET", "/api/users/u1/log?date=" + DAY)
    files_before = {
        name: (data_dir / name).read_bytes()
        for name in ("catalog.jsonl", "log.jsonl", "profiles.jsonl", "outbox.jsonl")
    }
    first.shutdown()

    second = make_server(data_dir=data_dir)
    files_after = {
        name: (data_dir / name).read_bytes()
        for name in ("catalog.jsonl", "log.jsonl", "profiles.jsonl", "outbox.jsonl")
    }
    assert files_after == files_before
    assert soap_call(second.url, "GetProfiles", {}).fields == profiles_before
    _, log_after = api_call(second.url, "GET", "/api/users/u1/log?date=" + DAY)
    assert log_after == log_before
    assert soap_call(second.url, "GetProduct", {"barcode": MIX}).kind == "response"
    # id sequences continue where they left off
    parsed = soap_call(second.url, "AddConsumption", consume_fields("u1", 100, "dinner"))
    assert parsed.fields["entryId"] == "e3"
    parsed = soap_call(second.url, "CreateProfile", {**TABLE1_PROFILE, "name": "Meera"})
    assert parsed.fields["userId"] == "u2"


def test_rest_log_listing_shape(seeded_user):
    server, user_id = seeded_user
    soap_call(server.url, "AddConsumption", consume_fields(user_id, 300, "breakfast"))
    status, payload = api_call(server.url, "GET", f"/api/users/{user_id}/log?date={DAY}")
    assert status == 200
    (entry,) = payload["entries"]
    assert entry["entryId"] == "e1"
    assert entry["date"] == DAY
    assert entry["meal"] == "breakfast"
    assert entry["gtin"] == MIX
    assert entry["quantityG"] == 300
    assert entry["energyKcal"] == 1500
    assert entry["timestamp"]
    status, payload = api_call(server.url, "GET", f"/api/users/{user_id}/log?date=2030-01-01")
    assert status == 200 and payload == {"entries": []}
    status, payload = api_call(server.url, "GET", f"/api/users/{user_id}/log")
    assert status == 400 and payload["error"]["code"] == "MissingField"


def test_api_decode_round_trip(server):
    data = (FIXTURES / "stabilo_3px.pgm").read_bytes()
    resp = requests.post(server.url + "/api/decode", data=data, timeout=30)
    assert resp.status_code == 200
    assert resp.json() == {"gtin": MIX}
    resp = requests.post(server.url + "/api/decode", data=b"not a pgm", timeout=30)
    assert resp.status_code == 400
    assert resp.json()["error"]["code"] == "MalformedImage"


def test_concurrent_consumes_stay_consistent(seeded_user):
    server, user_id = seeded_user
    results = []
    lock = threading.Lock()

    def worker():
        for _ in range(5):
            status, payload = api_call(
                server.url,
                "POST",
                "/api/consume",
                {**consume_fields(user_id, 10, "lunch"), "quantityG": 10},
            )
            with lock:
                results.append((status, payload["entryId"], payload["energyKcal"]))

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()

    assert len(results) == 40
    assert all(status == 200 for status, _, _ in results)
    assert len({entry_id for _, entry_id, _ in results}) == 40
    status, payload = api_call(server.url, "GET", f"/api/users/{user_id}/log?date={DAY}")
    assert len(payload["entries"]) == 40
    assert sum(e["energyKcal"] for e in payload["entries"]) == 40 * 50


def test_fuzz_sample_all_faults(server):
    import random

    rng = random.Random(13)
    for _ in range(100):
        blob = bytes(rng.randrange(256) for _ in range(rng.randint(0, 200)))
        parsed = wire.parse_envelope(soap_post(server.url, blob))
        assert parsed.is_fault
    # the server is still fully functional afterwards
    assert soap_call(server.url, "GetProduct", {"barcode": MIX}).kind == "response"
