"""SOAP-style XML envelopes and the matching JSON facade.

The envelope is deliberately namespace- and header-free: an ``Envelope``
root holding one ``Body`` holding one operation element whose children are
the operation's fields, in the fixed order given by the protocol tables.
All values travel as strings; typing happens at the edges, driven by the
same tables, so the XML protocol and the JSON facade stay field-for-field
identical.
"""

import json
from dataclasses import dataclass
from xml.etree import ElementTree
from xml.sax.saxutils import escape

from .errors import MalformedXml, MissingField, UnknownOperation

XML_DECLARATION = '<?xml version="1.0" encoding="UTF-8"?>\n'
CONTENT_TYPE = "text/xml; charset=utf-8"


@dataclass(frozen=True)
class FieldSpec:
    """One response field: a scalar, a nested object, or a list of items."""

    name: str
    kind: str = "scalar"  # scalar | object | list
    value: str = "str"  # scalar typing for the JSON facade: str | num
    item: str = ""  # element name of list items
    fields: tuple["FieldSpec", ...] = ()
    optional: bool = False


def _num(name: str) -> FieldSpec:
    return FieldSpec(name, value="num")


PRODUCT_FIELDS = (
    FieldSpec("gtin"),
    FieldSpec("name"),
    _num("energyPer100g"),
    _num("proteinPer100g"),
    _num("fatPer100g"),
    _num("carbPer100g"),
)

SUGGESTION_FIELDS = (FieldSpec("name"), _num("minutes"))

PROFILE_FIELDS = (
    FieldSpec("userId"),
    FieldSpec("name"),
    FieldSpec("gender"),
    _num("age"),
    _num("heightCm"),
    _num("weightKg"),
    FieldSpec("activity"),
    FieldSpec("email"),
)

REQUEST_FIELDS: dict[str, tuple[str, ...]] = {
    "GetProduct": ("barcode",),
    "CheckEnergy": ("userId", "date", "barcode", "quantityG", "meal"),
    "AddConsumption": ("userId", "date", "barcode", "quantityG", "meal"),
    "GetExercises": ("excessKcal",),
    "CreateProfile": ("name", "gender", "age", "heightCm", "weightKg", "activity", "email"),
    "UpdateProfile": ("userId", "name", "gender", "age", "heightCm", "weightKg", "activity", "email"),
    "DeleteProfile": ("userId",),
    "GetProfiles": (),
}

RESPONSE_SHAPES: dict[str, tuple[FieldSpec, ...]] = {
    "GetProductResponse": (
        FieldSpec("product", kind="object", fields=PRODUCT_FIELDS),
    ),
    "CheckEnergyResponse": (
        _num("standardKcal"),
        _num("requiredKcal"),
        _num("consumedKcal"),
        _num("candidateKcal"),
        _num("balanceKcal"),
        FieldSpec("status"),
        _num("excessKcal"),
        FieldSpec("suggestions", kind="list", item="suggestion", fields=SUGGESTION_FIELDS),
    ),
    "AddConsumptionResponse": (
        FieldSpec("entryId"),
        _num("energyKcal"),
        FieldSpec("warning", optional=True),
    ),
    "GetExercisesResponse": (
        FieldSpec("suggestions", kind="list", item="suggestion", fields=SUGGESTION_FIELDS),
    ),
    "CreateProfileResponse": (FieldSpec("userId"),),
    "UpdateProfileResponse": (FieldSpec("userId"),),
    "DeleteProfileResponse": (FieldSpec("userId"),),
    "GetProfilesResponse": (
        FieldSpec("profiles", kind="list", item="profile", fields=PROFILE_FIELDS),
    ),
}

RESPONSE_FOR_REQUEST = {op: op + "Response" for op in REQUEST_FIELDS}


@dataclass(frozen=True)
class ParsedEnvelope:
    kind: str  # request | response | fault
    name: str
    fields: dict

    @property
    def is_fault(self) -> bool:
        return self.kind == "fault"


def scalar_text(value) -> str:
    """Wire text for a scalar: integers plain, floats via repr, strings as-is."""
    if isinstance(value, bool):
        raise TypeError("booleans have no wire form")
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    if isinstance(value, (int, float)):
        return repr(value) if isinstance(value, float) else str(value)
    return str(value)


def render_request(op_name: str, fields: dict) -> bytes:
    """Serialize one request envelope; field order is fixed by the table.

    Raises:
        UnknownOperation, MissingField
    """
    table = REQUEST_FIELDS.get(op_name)
    if table is None:
        raise UnknownOperation(f"unknown operation {op_name!r}")
    parts = [f"<{op_name}>"]
    for name in table:
        if name not in fields:
            raise MissingField(f"{op_name} requires field {name!r}")
        parts.append(f"<{name}>{escape(scalar_text(fields[name]))}</{name}>")
    parts.append(f"</{op_name}>")
    return _wrap("".join(parts))


def render_response(response_name: str, payload: dict) -> bytes:
    """Serialize one response envelope per its shape table.

    Raises:
        UnknownOperation, MissingField
    """
    shape = RESPONSE_SHAPES.get(response_name)
    if shape is None:
        raise UnknownOperation(f"unknown response {response_name!r}")
    body = _render_fields(shape, payload, response_name)
    return _wrap(f"<{response_name}>{body}</{response_name}>")


def render_fault(code: str, message: str) -> bytes:
    return _wrap(
        f"<Fault><code>{escape(code)}</code><message>{escape(message)}</message></Fault>"
    )


def _wrap(body: str) -> bytes:
    return (XML_DECLARATION + f"<Envelope><Body>{body}</Body></Envelope>").encode("utf-8")


def _render_fields(shape: tuple[FieldSpec, ...], payload: dict, context: str) -> str:
    parts = []
    for spec in shape:
        if spec.name not in payload:
            if spec.optional:
                continue
            raise MissingField(f"{context} requires field {spec.name!r}")
        value = payload[spec.name]
        if spec.kind == "scalar":
            parts.append(f"<{spec.name}>{escape(scalar_text(value))}</{spec.name}>")
        elif spec.kind == "object":
            inner = _render_fields(spec.fields, value, f"{context}.{spec.name}")
            parts.append(f"<{spec.name}>{inner}</{spec.name}>")
        else:  # list
            items = []
            for item in value:
                inner = _render_fields(spec.fields, item, f"{context}.{spec.item}")
                items.append(f"<{spec.item}>{inner}</{spec.item}>")
            parts.append(f"<{spec.name}>{''.join(items)}</{spec.name}>")
    return "".join(parts)


def parse_envelope(data: bytes) -> ParsedEnvelope:
    """Parse an envelope back into (kind, name, string fields).

    Unknown child elements are ignored for forward compatibility; unknown
    operations and missing fields are errors.

    Raises:
        MalformedXml, UnknownOperation, MissingField
    """
    try:
        root = ElementTree.fromstring(data)
    except ElementTree.ParseError as exc:
        raise MalformedXml(f"not well-formed XML: {exc}") from exc
    if root.tag != "Envelope":
        raise MalformedXml(f"root element must be Envelope, got {root.tag!r}")
    bodies = list(root)
    if len(bodies) != 1 or bodies[0].tag != "Body":
        raise MalformedXml("Envelope must contain exactly one Body")
    ops = list(bodies[0])
    if len(ops) != 1:
        raise MalformedXml("Body must contain exactly one operation element")
    op = ops[0]

    if op.tag == "Fault":
        return ParsedEnvelope(
            kind="fault",
            name="Fault",
            fields={
                "code": _child_text(op, "code", "Fault"),
                "message": _child_text(op, "message", "Fault"),
            },
        )
    if op.tag in RESPONSE_SHAPES:
        fields = _parse_fields(op, RESPONSE_SHAPES[op.tag], op.tag)
        return ParsedEnvelope(kind="response", name=op.tag, fields=fields)
    if op.tag in REQUEST_FIELDS:
        fields = {}
        for name in REQUEST_FIELDS[op.tag]:
            fields[name] = _child_text(op, name, op.tag)
        return ParsedEnvelope(kind="request", name=op.tag, fields=fields)
    raise UnknownOperation(f"unknown operation {op.tag!r}")


def _child_text(element, name: str, context: str) -> str:
    child = element.find(name)
    if child is None:
        raise MissingField(f"{context} requires field {name!r}")
    return child.text or ""


def _parse_fields(element, shape: tuple[FieldSpec, ...], context: str) -> dict:
    fields = {}
    for spec in shape:
        child = element.find(spec.name)
        if child is None:
            if spec.optional:
                continue
            raise MissingField(f"{context} requires field {spec.name!r}")
        if spec.kind == "scalar":
            fields[spec.name] = child.text or ""
        elif spec.kind == "object":
            fields[spec.name] = _parse_fields(child, spec.fields, f"{context}.{spec.name}")
        else:
            fields[spec.name] = [
                _parse_fields(item, spec.fields, f"{context}.{spec.item}")
                for item in child
                if item.tag == spec.item
            ]
    return fields


def _typed_scalar(spec: FieldSpec, text: str):
    if spec.value != "num":
        return text
    number = float(text)
    return int(number) if number.is_integer() else number


def typed_payload(response_name: str, string_fields: dict) -> dict:
    """Convert parsed string fields into the JSON facade's typed payload."""
    shape = RESPONSE_SHAPES[response_name]
    return _typed_fields(shape, string_fields)


def _typed_fields(shape: tuple[FieldSpec, ...], fields: dict) -> dict:
    typed = {}
    for spec in shape:
        if spec.name not in fields:
            continue
        value = fields[spec.name]
        if spec.kind == "scalar":
            typed[spec.name] = _typed_scalar(spec, value) if isinstance(value, str) else value
        elif spec.kind == "object":
            typed[spec.name] = _typed_fields(spec.fields, value)
        else:
            typed[spec.name] = [_typed_fields(spec.fields, item) for item in value]
    return typed


def facade_json_bytes(response_name: str, payload: dict) -> bytes:
    """Deterministic JSON rendering of a response payload.

    The field order matches the XML shape, so the facade and any client
    reconstructing it from the XML protocol agree byte for byte.
    """
    ordered = _ordered(RESPONSE_SHAPES[response_name], payload)
    return json.dumps(ordered, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


def _ordered(shape: tuple[FieldSpec, ...], payload: dict) -> dict:
    out = {}
    for spec in shape:
        if spec.name not in payload:
            continue
        value = payload[spec.name]
        if spec.kind == "scalar":
            out[spec.name] = value
        elif spec.kind == "object":
            out[spec.name] = _ordered(spec.fields, value)
        else:
            out[spec.name] = [_ordered(spec.fields, item) for item in value]
    return out
