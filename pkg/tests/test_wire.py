"""Envelope rendering and parsing: golden bytes, identities, error shape."""

import random

import pytest

from healthwise import wire
from healthwise.errors import (
    HealthwiseError,
    MalformedXml,
    MissingField,
    UnknownOperation,
    all_error_classes,
    fault_code,
)

from conftest import GOLDEN

PRODUCT_PAYLOAD = {
    "product": {
        "gtin": "4006381333931",
        "name": "Crunchy Trail Mix",
        "energyPer100g": 500,
        "proteinPer100g": 8,
        "fatPer100g": 25,
        "carbPer100g": 60,
    }
}


def test_golden_request_bytes():
    rendered = wire.render_request("GetProduct", {"barcode": "4006381333931"})
    assert rendered == (GOLDEN / "get_product_request.xml").read_bytes()
    parsed = wire.parse_envelope(rendered)
    assert (parsed.kind, parsed.name) == ("request", "GetProduct")
    assert parsed.fields == {"barcode": "4006381333931"}


def test_golden_response_bytes():
    rendered = wire.render_response("GetProductResponse", PRODUCT_PAYLOAD)
    assert rendered == (GOLDEN / "get_product_response.xml").read_bytes()
    parsed = wire.parse_envelope(rendered)
    assert parsed.kind == "response"
    assert parsed.fields["product"]["name"] == "Crunchy Trail Mix"
    assert parsed.fields["product"]["energyPer100g"] == "500"  # strings on the wire


def test_golden_fault_bytes():
    rendered = wire.render_fault("ProductNotFound", "no catalog entry for 1234567890128")
    assert rendered == (GOLDEN / "product_not_found_fault.xml").read_bytes()
    parsed = wire.parse_envelope(rendered)
    assert parsed.is_fault
    assert parsed.fields["code"] == "ProductNotFound"


WILD_STRINGS = (
    "plain",
    "A&B",
    "less<than",
    "two >> one",
    'quo"ted',
    "apostro'phe",
    "ünïcode dal",
    "tabs\tand  spaces",
    "",
)


def _random_scalar(spec: wire.FieldSpec, rng: random.Random):
    if spec.value == "num":
        if rng.random() < 0.5:
            return rng.randint(0, 99999)
        return round(rng.uniform(-50, 4000), 2)
    return rng.choice(WILD_STRINGS)


def _random_payload(shape, rng):
    payload = {}
    for spec in shape:
        if spec.optional and rng.random() < 0.5:
            continue
        if spec.kind == "scalar":
            payload[spec.name] = _random_scalar(spec, rng)
        elif spec.kind == "object":
            payload[spec.name] = _random_payload(spec.fields, rng)
        else:
            payload[spec.name] = [
                _random_payload(spec.fields, rng) for _ in range(rng.randint(0, 3))
            ]
    return payload


def test_parse_render_identity_randomized():
    rng = random.Random(41)
    ops = sorted(wire.REQUEST_FIELDS)
    responses = sorted(wire.RESPONSE_SHAPES)
    for i in range(1000):
        if i % 2 == 0:
            op = ops[i // 2 % len(ops)]
            fields = {name: rng.choice(WILD_STRINGS) for name in wire.REQUEST_FIELDS[op]}
            rendered = wire.render_request(op, fields)
            parsed = wire.parse_envelope(rendered)
            assert (parsed.kind, parsed.name) == ("request", op)
            assert parsed.fields == fields
            assert wire.render_request(op, parsed.fields) == rendered
        else:
            name = responses[i // 2 % len(responses)]
            payload = _random_payload(wire.RESPONSE_SHAPES[name], rng)
            rendered = wire.render_response(name, payload)
            parsed = wire.parse_envelope(rendered)
            assert (parsed.kind, parsed.name) == ("response", name)
            assert wire.render_response(name, parsed.fields) == rendered


def test_fault_round_trip_with_escapes():
    rendered = wire.render_fault("ValidationError", 'bad <name> "A&B"')
    assert b"&lt;name&gt;" in rendered and b"A&amp;B" in rendered
    parsed = wire.parse_envelope(rendered)
    assert parsed.fields == {"code": "ValidationError", "message": 'bad <name> "A&B"'}


def test_escaped_ampersand_in_request():
    rendered = wire.render_request("CreateProfile", {
        "name": "A&B", "gender": "male", "age": "30", "heightCm": "170",
        "weightKg": "70", "activity": "high", "email": "a@b.example",
    })
    assert b"<name>A&amp;B</name>" in rendered
    assert wire.parse_envelope(rendered).fields["name"] == "A&B"


def test_unknown_children_are_ignored():
    data = (
        b'<?xml version="1.0" encoding="UTF-8"?>\n<Envelope><Body>'
        b"<GetProduct><barcode>4006381333931</barcode><hint>ignore me</hint>"
        b"</GetProduct></Body></Envelope>"
    )
    parsed = wire.parse_envelope(data)
    assert parsed.fields == {"barcode": "4006381333931"}

    data = (
        b"<Envelope><Body><AddConsumptionResponse><entryId>e1</entryId>"
        b"<energyKcal>500</energyKcal><traceId>xyz</traceId>"
        b"</AddConsumptionResponse></Body></Envelope>"
    )
    parsed = wire.parse_envelope(data)
    assert parsed.fields == {"entryId": "e1", "energyKcal": "500"}


def test_optional_warning_field():
    with_warning = {"entryId": "e1", "energyKcal": 500, "warning": "outbox offline"}
    rendered = wire.render_response("AddConsumptionResponse", with_warning)
    assert wire.parse_envelope(rendered).fields["warning"] == "outbox offline"
    without = wire.render_response("AddConsumptionResponse", {"entryId": "e1", "energyKcal": 500})
    assert "warning" not in wire.parse_envelope(without).fields


def test_malformed_envelopes_rejected():
    golden = (GOLDEN / "get_product_request.xml").read_bytes()
    for data in (
        b"not xml at all",
        b"",
        golden[:-10],  # truncated
        b"<Foo><Body><GetProduct/></Body></Foo>",
        b"<Envelope><GetProduct/></Envelope>",  # no Body
        b"<Envelope><Body/></Envelope>",  # empty Body
        b"<Envelope><Body><GetProduct/><GetProduct/></Body></Envelope>",
        b"<Envelope><Body><GetProduct/></Body><Body/></Envelope>",
    ):
        with pytest.raises(MalformedXml):
            wire.parse_envelope(data)


def test_unknown_operation_rejected():
    with pytest.raises(UnknownOperation):
        wire.parse_envelope(b"<Envelope><Body><FooBar/></Body></Envelope>")
    with pytest.raises(UnknownOperation):
        wire.render_request("FooBar", {})
    with pytest.raises(UnknownOperation):
        wire.render_response("FooBarResponse", {})


def test_missing_fields_rejected():
    with pytest.raises(MissingField):
        wire.parse_envelope(b"<Envelope><Body><GetProduct/></Body></Envelope>")
    with pytest.raises(MissingField):
        wire.render_request("GetProduct", {})
    with pytest.raises(MissingField):
        wire.render_response("GetProductResponse", {})
    with pytest.raises(MissingField):
        wire.parse_envelope(b"<Envelope><Body><Fault><code>X</code></Fault></Body></Envelope>")


def test_scalar_text_forms():
    assert wire.scalar_text(500) == "500"
    assert wire.scalar_text(500.0) == "500"
    assert wire.scalar_text(52.5) == "52.5"
    assert wire.scalar_text(-250) == "-250"
    assert wire.scalar_text("x") == "x"
    with pytest.raises(TypeError):
        wire.scalar_text(True)


def test_typed_payload_and_facade_bytes():
    rendered = wire.render_response("GetProductResponse", PRODUCT_PAYLOAD)
    strings = wire.parse_envelope(rendered).fields
    typed = wire.typed_payload("GetProductResponse", strings)
    assert typed == PRODUCT_PAYLOAD
    assert isinstance(typed["product"]["energyPer100g"], int)
    assert wire.facade_json_bytes("GetProductResponse", typed) == (
        b'{"product":{"gtin":"4006381333931","name":"Crunchy Trail Mix",'
        b'"energyPer100g":500,"proteinPer100g":8,"fatPer100g":25,"carbPer100g":60}}'
    )


def test_fault_vocabulary_is_total():
    classes = all_error_classes()
    assert len(classes) >= 20
    codes = [cls.code for cls in classes]
    assert len(set(codes)) == len(codes), "fault codes must be distinct"
    for cls in classes:
        exc = cls("boom")
        assert fault_code(exc) == cls.code
        rendered = wire.render_fault(fault_code(exc), exc.message)
        parsed = wire.parse_envelope(rendered)
        assert parsed.fields["code"] == cls.code
    assert fault_code(RuntimeError("x")) == "InternalError"


def test_every_request_has_a_response_shape():
    for op, response_name in wire.RESPONSE_FOR_REQUEST.items():
        assert response_name in wire.RESPONSE_SHAPES
        assert op in wire.REQUEST_FIELDS
