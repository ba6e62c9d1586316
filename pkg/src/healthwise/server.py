"""HTTP process binding the wire protocol to catalog, ledger, energy,
exercise, profiles, and the notification outbox.

Two endpoints speak the same operations: POST /soap carries XML envelopes
(the canonical protocol) and /api/* carries the JSON facade. Both funnel
into one handler per operation, so the twins cannot drift apart.
"""

import datetime as dt
import json
import logging
import math
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, unquote, urlparse

from . import ledger, wire
from .barcode import decode_image, validate_code
from .catalog import Catalog, energy_for_quantity
from .config import ServerConfig
from .errors import (
    HealthwiseError,
    MissingField,
    NonPositiveQuantity,
    StorageFailure,
    UnknownOperation,
    ValidationError,
    fault_code,
)
from .exercise import suggest
from .ledger import ConsumptionLog, parse_date, parse_meal
from .outbox import NotificationRecord, Outbox
from .profiles import ProfileStore, parse_activity, parse_gender
from .seed import seed_catalog_if_missing

logger = logging.getLogger(__name__)

JSON_CONTENT_TYPE = "application/json; charset=utf-8"

# REST status by fault code; anything else is a 400.
_STATUS_BY_CODE = {
    "ProductNotFound": 404,
    "NoSuchUser": 404,
    "UnknownOperation": 404,  # unknown /api route
    "InternalError": 500,
    "StorageFailure": 500,
}


def _field(fields: dict, name: str) -> str:
    if name not in fields:
        raise MissingField(f"missing field {name!r}")
    return fields[name]


def _int_field(fields: dict, name: str) -> int:
    text = _field(fields, name).strip()
    try:
        return int(text)
    except ValueError:
        raise ValidationError(f"{name} must be an integer, got {text!r}") from None


def _number_field(fields: dict, name: str) -> float:
    text = _field(fields, name).strip()
    try:
        value = float(text)
    except ValueError:
        raise ValidationError(f"{name} must be a number, got {text!r}") from None
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {text!r}")
    return value


def _plain(value: float) -> float | int:
    return int(value) if float(value).is_integer() else value


def _product_payload(product) -> dict:
    return {
        "gtin": product.gtin13,
        "name": product.name,
        "energyPer100g": product.energy_kcal_per_100g,
        "proteinPer100g": product.protein_g_per_100g,
        "fatPer100g": product.fat_g_per_100g,
        "carbPer100g": product.carb_g_per_100g,
    }


def _profile_payload(profile) -> dict:
    return {
        "userId": profile.id,
        "name": profile.name,
        "gender": profile.gender.value,
        "age": profile.age,
        "heightCm": profile.height_cm,
        "weightKg": _plain(profile.weight_kg),
        "activity": profile.activity.value,
        "email": profile.email,
    }


def _suggestion_payloads(items) -> list[dict]:
    return [{"name": item.name, "minutes": item.minutes} for item in items]


class NutritionService:
    """Protocol-agnostic operation handlers shared by /soap and /api."""

    def __init__(self, config: ServerConfig):
        config.validate()
        config.data_dir.mkdir(parents=True, exist_ok=True)
        seed_catalog_if_missing(config.catalog_path)
        self.config = config
        self.catalog = Catalog(config.catalog_path)
        self.profiles = ProfileStore(config.profiles_path)
        self.log = ConsumptionLog(config.log_path)
        self.outbox = Outbox(config.outbox_path, config.smtp)
        self._ops = {
            "GetProduct": self.op_get_product,
            "CheckEnergy": self.op_check_energy,
            "AddConsumption": self.op_add_consumption,
            "GetExercises": self.op_get_exercises,
            "CreateProfile": self.op_create_profile,
            "UpdateProfile": self.op_update_profile,
            "DeleteProfile": self.op_delete_profile,
            "GetProfiles": self.op_get_profiles,
        }

    def handle_operation(self, op_name: str, fields: dict) -> tuple[str, dict]:
        """Run one named operation; returns (response name, typed payload)."""
        handler = self._ops.get(op_name)
        if handler is None:
            raise UnknownOperation(f"unknown operation {op_name!r}")
        return wire.RESPONSE_FOR_REQUEST[op_name], handler(fields)

    # -- operations ------------------------------------------------------

    def op_get_product(self, fields: dict) -> dict:
        gtin = validate_code(_field(fields, "barcode"))
        product = self.catalog.lookup(gtin.digits13)
        return {"product": _product_payload(product)}

    def _candidate_energy(self, fields: dict) -> int:
        """Candidate kCal for a check: 0 g means 'just show my budget' and
        skips the product lookup entirely."""
        quantity = _number_field(fields, "quantityG")
        if quantity < 0:
            raise NonPositiveQuantity(f"quantity must be >= 0 g, got {quantity}")
        if quantity == 0:
            return 0
        gtin = validate_code(_field(fields, "barcode"))
        product = self.catalog.lookup(gtin.digits13)
        return energy_for_quantity(product, quantity)

    def op_check_energy(self, fields: dict) -> dict:
        profile = self.profiles.get(_field(fields, "userId"))
        date = parse_date(_field(fields, "date"))
        meal = parse_meal(_field(fields, "meal"))
        candidate = self._candidate_energy(fields)
        verdict = ledger.check_energy(
            profile,
            date,
            candidate,
            meal,
            log=self.log,
            table=self.config.requirement_table,
            factors=self.config.activity_factors,
            split=self.config.meal_split,
            chart=self.config.exercise_chart,
        )
        return {
            "standardKcal": verdict.standard_kcal,
            "requiredKcal": verdict.required_kcal,
            "consumedKcal": verdict.consumed_before_kcal,
            "candidateKcal": verdict.candidate_kcal,
            "balanceKcal": verdict.balance_kcal,
            "status": verdict.status.value,
            "excessKcal": verdict.excess_kcal,
            "suggestions": _suggestion_payloads(verdict.suggestions),
        }

    def op_add_consumption(self, fields: dict) -> dict:
        profile = self.profiles.get(_field(fields, "userId"))
        date = parse_date(_field(fields, "date"))
        meal = parse_meal(_field(fields, "meal"))
        quantity = _number_field(fields, "quantityG")
        if quantity <= 0:
            raise NonPositiveQuantity(f"quantity must be positive grams, got {quantity}")
        gtin = validate_code(_field(fields, "barcode"))
        product = self.catalog.lookup(gtin.digits13)
        entry = ledger.add_consumption(
            profile, date, product, quantity, meal, dt.datetime.now(), log=self.log
        )
        payload = {"entryId": entry.entry_id, "energyKcal": entry.energy_kcal}
        warning = self.notify_consumption(profile, entry, product)
        if warning is not None:
            payload["warning"] = warning
        return payload

    def op_get_exercises(self, fields: dict) -> dict:
        excess = _number_field(fields, "excessKcal")
        return {"suggestions": _suggestion_payloads(suggest(excess, self.config.exercise_chart))}

    def _profile_fields(self, fields: dict) -> dict:
        return {
            "name": _field(fields, "name"),
            "gender": parse_gender(_field(fields, "gender")),
            "age": _int_field(fields, "age"),
            "height_cm": _int_field(fields, "heightCm"),
            "weight_kg": _plain(_number_field(fields, "weightKg")),
            "activity": parse_activity(_field(fields, "activity")),
            "email": _field(fields, "email"),
        }

    def op_create_profile(self, fields: dict) -> dict:
        profile = self.profiles.create(**self._profile_fields(fields))
        return {"userId": profile.id}

    def op_update_profile(self, fields: dict) -> dict:
        profile = self.profiles.update(_field(fields, "userId"), **self._profile_fields(fields))
        return {"userId": profile.id}

    def op_delete_profile(self, fields: dict) -> dict:
        user_id = _field(fields, "userId")
        self.profiles.delete(user_id)
        return {"userId": user_id}

    def op_get_profiles(self, fields: dict) -> dict:
        return {"profiles": [_profile_payload(p) for p in self.profiles.list()]}

    # -- notifications ---------------------------------------------------

    def notify_consumption(self, profile, entry, product) -> str | None:
        """Append one outbox record for a fresh entry.

        Returns a warning string when the outbox append fails; the
        consumption itself stands either way.
        """
        record = NotificationRecord(
            to=profile.email,
            subject=f"Consumption recorded: {product.name}",
            body=(
                f"Hello {profile.name},\n"
                f"You consumed {entry.quantity_g} g of {product.name} "
                f"at {entry.meal.value} on {entry.date}: {entry.energy_kcal} kCal.\n"
                f"Recorded at {entry.timestamp}."
            ),
            created_at=entry.timestamp,
        )
        try:
            self.outbox.send(record)
        except StorageFailure as exc:
            logger.error("outbox append failed: %s", exc)
            return f"notification could not be written: {exc.message}"
        return None

    # -- protocol edges --------------------------------------------------

    def handle_soap_body(self, body: bytes) -> bytes:
        """One request envelope in, one response or Fault envelope out."""
        try:
            parsed = wire.parse_envelope(body)
            if parsed.kind != "request":
                raise UnknownOperation(f"{parsed.name} is not a request operation")
            response_name, payload = self.handle_operation(parsed.name, parsed.fields)
            return wire.render_response(response_name, payload)
        except HealthwiseError as exc:
            return wire.render_fault(exc.code, exc.message)
        except Exception as exc:  # never let a bug kill the transport
            logger.exception("unhandled error in SOAP dispatch")
            return wire.render_fault("InternalError", f"{type(exc).__name__}: {exc}")


def _stringify_json_fields(doc: dict) -> dict:
    """JSON body values onto the wire's string domain (numbers canonicalized)."""
    fields = {}
    for name, value in doc.items():
        if value is None:
            continue
        if isinstance(value, bool) or not isinstance(value, (str, int, float)):
            raise ValidationError(f"field {name!r} must be a string or number")
        fields[name] = value if isinstance(value, str) else wire.scalar_text(value)
    return fields


@dataclass(frozen=True)
class _RestResult:
    status: int
    body: bytes
    content_type: str = JSON_CONTENT_TYPE


def _json_bytes(obj) -> bytes:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


def _error_result(exc: Exception) -> _RestResult:
    code = fault_code(exc)
    message = exc.message if isinstance(exc, HealthwiseError) else f"{type(exc).__name__}: {exc}"
    if not isinstance(exc, HealthwiseError):
        logger.exception("unhandled error in REST dispatch")
    body = _json_bytes({"error": {"code": code, "message": message}})
    return _RestResult(_STATUS_BY_CODE.get(code, 400), body)


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    @property
    def service(self) -> NutritionService:
        return self.server.service  # type: ignore[attr-defined]

    def log_message(self, fmt, *args):  # keep test output quiet
        logger.debug("%s %s", self.address_string(), fmt % args)

    def _read_body(self) -> bytes:
        length = int(self.headers.get("Content-Length") or 0)
        return self.rfile.read(length) if length > 0 else b""

    def _send(self, status: int, content_type: str, body: bytes, *, cors: bool = False) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        if cors:
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()
        if body:
            self.wfile.write(body)

    # -- SOAP endpoint ---------------------------------------------------

    def _serve_soap(self) -> None:
        if self.command != "POST":
            self._send(405, "text/plain; charset=utf-8", b"POST only\n")
            return
        response = self.service.handle_soap_body(self._read_body())
        self._send(200, wire.CONTENT_TYPE, response)

    # -- REST endpoint ---------------------------------------------------

    def _parse_json_body(self) -> dict:
        body = self._read_body()
        if not body:
            return {}
        try:
            doc = json.loads(body.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ValidationError(f"request body is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ValidationError("request body must be a JSON object")
        return doc

    def _twin(self, op_name: str, fields: dict) -> _RestResult:
        response_name, payload = self.service.handle_operation(op_name, fields)
        return _RestResult(200, wire.facade_json_bytes(response_name, payload))

    def _route_rest(self, method: str, path: str, query: dict) -> _RestResult:
        service = self.service
        parts = [unquote(p) for p in path.split("/") if p]  # ["api", ...]

        if parts == ["api", "users"]:
            if method == "GET":
                return self._twin("GetProfiles", {})
            if method == "POST":
                return self._twin("CreateProfile", _stringify_json_fields(self._parse_json_body()))
            raise ValidationError(f"method {method} not allowed for /api/users")

        if len(parts) == 3 and parts[:2] == ["api", "users"]:
            user_id = parts[2]
            if method == "PUT":
                fields = _stringify_json_fields(self._parse_json_body())
                fields["userId"] = user_id
                return self._twin("UpdateProfile", fields)
            if method == "DELETE":
                return self._twin("DeleteProfile", {"userId": user_id})
            raise ValidationError(f"method {method} not allowed for /api/users/{{id}}")

        if len(parts) == 4 and parts[:2] == ["api", "users"] and parts[3] == "log":
            if method != "GET":
                raise ValidationError("the log endpoint is GET only")
            user_id = parts[2]
            service.profiles.get(user_id)
            date = parse_date(_one_param(query, "date"))
            entries = service.log.entries_for(user_id, date)
            payload = {
                "entries": [
                    {
                        "entryId": e.entry_id,
                        "date": e.date,
                        "meal": e.meal.value,
                        "gtin": e.gtin13,
                        "quantityG": e.quantity_g,
                        "energyKcal": e.energy_kcal,
                        "timestamp": e.timestamp,
                    }
                    for e in entries
                ]
            }
            return _RestResult(200, _json_bytes(payload))

        if len(parts) == 3 and parts[:2] == ["api", "products"]:
            if method != "GET":
                raise ValidationError("the products endpoint is GET only")
            return self._twin("GetProduct", {"barcode": parts[2]})

        if parts == ["api", "check"] and method == "POST":
            return self._twin("CheckEnergy", _stringify_json_fields(self._parse_json_body()))

        if parts == ["api", "consume"] and method == "POST":
            return self._twin("AddConsumption", _stringify_json_fields(self._parse_json_body()))

        if parts == ["api", "exercises"]:
            if method != "GET":
                raise ValidationError("the exercises endpoint is GET only")
            return self._twin("GetExercises", {"excessKcal": _one_param(query, "excess")})

        if parts == ["api", "decode"] and method == "POST":
            gtin = decode_image(self._read_body())
            return _RestResult(200, _json_bytes({"gtin": gtin.digits13}))

        raise UnknownOperation(f"no route {method} {path}")

    def _serve_api(self) -> None:
        url = urlparse(self.path)
        try:
            result = self._route_rest(self.command, url.path, parse_qs(url.query))
        except Exception as exc:  # never let a bug kill the transport
            result = _error_result(exc)
        self._send(result.status, result.content_type, result.body, cors=True)

    # -- HTTP verbs ------------------------------------------------------

    def _dispatch(self) -> None:
        try:
            path = urlparse(self.path).path
            if path == "/soap":
                self._serve_soap()
            elif path.startswith("/api/") or path == "/api":
                self._serve_api()
            else:
                body = _json_bytes({"error": {"code": "UnknownOperation", "message": f"no route {path}"}})
                self._send(404, JSON_CONTENT_TYPE, body)
        except Exception:
            logger.exception("transport-level failure")
            try:
                self._send(500, "text/plain; charset=utf-8", b"internal error\n")
            except Exception:
                pass  # client already gone

    def do_GET(self):
        self._dispatch()

    def do_POST(self):
        self._dispatch()

    def do_PUT(self):
        self._dispatch()

    def do_DELETE(self):
        self._dispatch()

    def do_OPTIONS(self):
        path = urlparse(self.path).path
        if path.startswith("/api"):
            self._send(204, JSON_CONTENT_TYPE, b"", cors=True)
        else:
            self._send(405, "text/plain; charset=utf-8", b"")


def _one_param(query: dict, name: str) -> str:
    values = query.get(name)
    if not values:
        raise MissingField(f"missing query parameter {name!r}")
    return values[0]


class NutritionServer:
    """Threaded HTTP server wrapping one NutritionService."""

    def __init__(self, config: ServerConfig, host: str = "127.0.0.1"):
        self.service = NutritionService(config)
        self._httpd = ThreadingHTTPServer((host, config.port), _Handler)
        self._httpd.daemon_threads = True
        self._httpd.service = self.service  # type: ignore[attr-defined]
        self._thread: threading.Thread | None = None

    @property
    def port(self) -> int:
        return self._httpd.server_address[1]

    @property
    def url(self) -> str:
        return f"http://127.0.0.1:{self.port}"

    def start(self) -> "NutritionServer":
        """Serve on a daemon thread; returns once the socket is accepting."""
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()
        return self

    def serve_forever(self) -> None:
        self._httpd.serve_forever()

    def shutdown(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None
