"""Terminal client mirroring the phone app's flow, plus `serve`.

Every networked subcommand speaks the XML protocol to the server; `scan`
decodes the image locally (capture happens on-device, data stays remote)
and `catalog import` is offline administration of the data directory.
`--output json` prints the JSON facade's exact bytes for scripting.
"""

import argparse
import datetime as dt
import json
import os
import sys
from pathlib import Path

import requests

from . import wire
from .barcode import decode_image
from .catalog import Catalog, ProductRecord
from .config import load_config
from .errors import HealthwiseError, ValidationError
from .server import NutritionServer

DEFAULT_SERVER_URL = "http://127.0.0.1:8000"

GREEN = "\x1b[32m"
RED = "\x1b[31m"
RESET = "\x1b[0m"


class CliFault(Exception):
    """A domain fault to report and exit 1 with."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


class SoapClient:
    def __init__(self, base_url: str):
        self.base_url = base_url.rstrip("/")

    def call(self, op_name: str, fields: dict) -> tuple[str, dict]:
        """POST one request envelope; returns (response name, string fields).

        Raises:
            CliFault: in-body Fault, transport failure, or bad payload
        """
        body = wire.render_request(op_name, fields)
        try:
            resp = requests.post(
                self.base_url + "/soap",
                data=body,
                headers={"Content-Type": wire.CONTENT_TYPE},
                timeout=30,
            )
        except requests.RequestException as exc:
            raise CliFault("TransportError", f"cannot reach {self.base_url}: {exc}") from exc
        if resp.status_code != 200:
            raise CliFault("TransportError", f"server answered HTTP {resp.status_code}")
        try:
            parsed = wire.parse_envelope(resp.content)
        except HealthwiseError as exc:
            raise CliFault(exc.code, exc.message) from exc
        if parsed.is_fault:
            raise CliFault(parsed.fields["code"], parsed.fields["message"])
        return parsed.name, parsed.fields


def _print_json(response_name: str, string_fields: dict) -> None:
    payload = wire.typed_payload(response_name, string_fields)
    sys.stdout.buffer.write(wire.facade_json_bytes(response_name, payload) + b"\n")
    sys.stdout.buffer.flush()


def _colored(word: str, color: str) -> str:
    if sys.stdout.isatty():
        return f"{color}{word}{RESET}"
    return word


def _require_profiles(client: SoapClient) -> None:
    """The app gate: barcode and energy features need at least one profile."""
    _, fields = client.call("GetProfiles", {})
    if not fields["profiles"]:
        raise CliFault("NoSuchUser", "create a profile first (healthwise profile create)")


def _today() -> str:
    return dt.date.today().isoformat()


# -- subcommand handlers --------------------------------------------------


def _cmd_serve(args) -> int:
    config = load_config(args.config, port=args.port, data_dir=args.data_dir)
    server = NutritionServer(config)
    print(f"listening on {server.url}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    return 0


def _profile_wire_fields(args) -> dict:
    return {
        "name": args.name,
        "gender": args.gender,
        "age": args.age,
        "heightCm": args.height,
        "weightKg": args.weight,
        "activity": args.activity,
        "email": args.email,
    }


def _cmd_profile(args, client: SoapClient) -> int:
    if args.action == "create":
        name, fields = client.call("CreateProfile", _profile_wire_fields(args))
        if args.output == "json":
            _print_json(name, fields)
        else:
            print(f"created {fields['userId']}")
    elif args.action == "update":
        payload = {"userId": args.user, **_profile_wire_fields(args)}
        name, fields = client.call("UpdateProfile", payload)
        if args.output == "json":
            _print_json(name, fields)
        else:
            print(f"updated {fields['userId']}")
    elif args.action == "delete":
        name, fields = client.call("DeleteProfile", {"userId": args.user})
        if args.output == "json":
            _print_json(name, fields)
        else:
            print(f"deleted {fields['userId']}")
    else:  # list
        name, fields = client.call("GetProfiles", {})
        if args.output == "json":
            _print_json(name, fields)
            return 0
        if not fields["profiles"]:
            print("no profiles")
        for p in fields["profiles"]:
            print(
                f"{p['userId']}  {p['name']}  {p['gender']}, {p['age']} y, "
                f"{p['heightCm']} cm, {p['weightKg']} kg, {p['activity']}  <{p['email']}>"
            )
    return 0


def _cmd_lookup(args, client: SoapClient) -> int:
    name, fields = client.call("GetProduct", {"barcode": args.code})
    if args.output == "json":
        _print_json(name, fields)
        return 0
    p = fields["product"]
    print(f"{p['gtin']}  {p['name']}")
    print(
        f"  per 100 g: {p['energyPer100g']} kCal, protein {p['proteinPer100g']} g, "
        f"fat {p['fatPer100g']} g, carb {p['carbPer100g']} g"
    )
    return 0


def _print_verdict(fields: dict) -> None:
    status = fields["status"]
    word = _colored("GREEN", GREEN) if status == "green" else _colored("RED", RED)
    print(
        f"required {fields['requiredKcal']} kCal, consumed {fields['consumedKcal']} kCal, "
        f"this item {fields['candidateKcal']} kCal"
    )
    print(f"balance {fields['balanceKcal']} kCal  {word}")
    if status == "red":
        print(f"exceeded by {fields['excessKcal']} kCal; to burn it off:")
        for item in fields["suggestions"]:
            print(f"  {item['name']}: {item['minutes']} min")


def _check_fields(args) -> dict:
    return {
        "userId": args.user,
        "date": args.date,
        "barcode": args.code,
        "quantityG": args.qty,
        "meal": args.meal,
    }


def _cmd_check(args, client: SoapClient) -> int:
    _require_profiles(client)
    name, fields = client.call("CheckEnergy", _check_fields(args))
    if args.output == "json":
        _print_json(name, fields)
    else:
        _print_verdict(fields)
    return 0


def _cmd_consume(args, client: SoapClient) -> int:
    _require_profiles(client)
    name, fields = client.call("AddConsumption", _check_fields(args))
    if args.output == "json":
        _print_json(name, fields)
        return 0
    print(f"recorded {fields['entryId']}: {fields['energyKcal']} kCal")
    if "warning" in fields:
        print(f"warning: {fields['warning']}", file=sys.stderr)
    return 0


def _cmd_scan(args, client: SoapClient) -> int:
    _require_profiles(client)
    try:
        data = Path(args.image).read_bytes()
    except OSError as exc:
        raise CliFault("ValidationError", f"cannot read {args.image}: {exc}") from exc
    gtin = decode_image(data)
    if args.user is not None:
        # Chain straight into an energy check for the scanned product.
        if args.qty is None or args.meal is None:
            raise CliFault("ValidationError", "--user requires --qty and --meal")
        fields = {
            "userId": args.user,
            "date": args.date,
            "barcode": gtin.digits13,
            "quantityG": args.qty,
            "meal": args.meal,
        }
        name, out = client.call("CheckEnergy", fields)
        if args.output == "json":
            _print_json(name, out)
        else:
            print(gtin.digits13)
            _print_verdict(out)
        return 0
    if args.output == "json":
        sys.stdout.buffer.write(
            json.dumps({"gtin": gtin.digits13}, separators=(",", ":")).encode() + b"\n"
        )
    else:
        print(gtin.digits13)
    return 0


def _cmd_exercises(args, client: SoapClient) -> int:
    name, fields = client.call("GetExercises", {"excessKcal": args.excess})
    if args.output == "json":
        _print_json(name, fields)
        return 0
    if not fields["suggestions"]:
        print("nothing to burn")
    for item in fields["suggestions"]:
        print(f"{item['name']}: {item['minutes']} min")
    return 0


def _cmd_catalog_import(args) -> int:
    config = load_config(args.config, data_dir=args.data_dir)
    path = Path(args.file)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise CliFault("ValidationError", f"cannot read {path}: {exc}") from exc
    records = []
    for index, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            records.append(ProductRecord(**json.loads(line)).validate())
        except (json.JSONDecodeError, TypeError) as exc:
            raise ValidationError(f"{path}:{index}: bad product record: {exc}") from exc
    catalog = Catalog(config.catalog_path)
    for record in records:
        catalog.upsert(record)
    print(f"imported {len(records)} products into {config.catalog_path}")
    return 0


# -- argument parsing ------------------------------------------------------


def _add_profile_field_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--name", required=True)
    parser.add_argument("--gender", required=True, choices=("male", "female"))
    parser.add_argument("--age", required=True)
    parser.add_argument("--height", required=True, help="height in cm")
    parser.add_argument("--weight", required=True, help="weight in kg")
    parser.add_argument(
        "--activity", required=True, choices=("sedentary", "moderate", "high")
    )
    parser.add_argument("--email", required=True)


def _add_check_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--user", required=True, help="profile id, e.g. u1")
    parser.add_argument("--code", required=True, help="barcode digits")
    parser.add_argument("--qty", required=True, help="quantity in grams")
    parser.add_argument("--meal", required=True, choices=("breakfast", "lunch", "dinner"))
    parser.add_argument("--date", default=_today(), help="ISO day, default today")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="healthwise",
        description="Barcode-driven food lookup and daily energy budgeting.",
    )
    parser.add_argument("--server", default=None, help="server URL (env HW_SERVER_URL)")
    parser.add_argument("--output", choices=("human", "json"), default="human")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the nutrition server")
    serve.add_argument("--port", type=int, default=None, help="listen port (env HW_PORT)")
    serve.add_argument("--data-dir", default=None, help="store directory (env HW_DATA_DIR)")
    serve.add_argument("--config", default=None, help="JSON config document")

    profile = sub.add_parser("profile", help="manage profiles")
    actions = profile.add_subparsers(dest="action", required=True)
    _add_profile_field_args(actions.add_parser("create"))
    update = actions.add_parser("update")
    update.add_argument("--user", required=True)
    _add_profile_field_args(update)
    actions.add_parser("delete").add_argument("--user", required=True)
    actions.add_parser("list")

    scan = sub.add_parser("scan", help="decode a PGM barcode image")
    scan.add_argument("image")
    scan.add_argument("--user", help="chain into an energy check for this profile")
    scan.add_argument("--qty", help="quantity in grams (with --user)")
    scan.add_argument("--meal", choices=("breakfast", "lunch", "dinner"))
    scan.add_argument("--date", default=_today())

    lookup = sub.add_parser("lookup", help="fetch product details")
    lookup.add_argument("code")

    _add_check_args(sub.add_parser("check", help="green/red energy verdict"))
    _add_check_args(sub.add_parser("consume", help="log a consumption"))

    exercises = sub.add_parser("exercises", help="exercise plans for excess kCal")
    exercises.add_argument("--excess", required=True, help="excess kCal to burn")

    catalog = sub.add_parser("catalog", help="catalog administration")
    catalog_actions = catalog.add_subparsers(dest="action", required=True)
    imp = catalog_actions.add_parser("import", help="load JSON-lines products")
    imp.add_argument("file")
    imp.add_argument("--data-dir", default=None)
    imp.add_argument("--config", default=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    server_url = args.server or os.environ.get("HW_SERVER_URL") or DEFAULT_SERVER_URL
    client = SoapClient(server_url)
    try:
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "profile":
            return _cmd_profile(args, client)
        if args.command == "scan":
            return _cmd_scan(args, client)
        if args.command == "lookup":
            return _cmd_lookup(args, client)
        if args.command == "check":
            return _cmd_check(args, client)
        if args.command == "consume":
            return _cmd_consume(args, client)
        if args.command == "exercises":
            return _cmd_exercises(args, client)
        if args.command == "catalog":
            return _cmd_catalog_import(args)
        raise AssertionError(f"unrouted command {args.command}")
    except CliFault as fault:
        print(f"{fault.code}: {fault.message}", file=sys.stderr)
        return 1
    except HealthwiseError as exc:
        print(f"{exc.code}: {exc.message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
