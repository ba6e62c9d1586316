"""Server configuration: defaults, JSON document, environment, CLI flags.

Precedence, lowest to highest: built-in defaults, then the JSON config
document, then HW_PORT / HW_DATA_DIR, then explicit CLI flags.
"""

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .energy import (
    ActivityFactors,
    Gender,
    MealSplit,
    RequirementRow,
    RequirementTable,
    default_requirement_table,
)
from .errors import ValidationError
from .exercise import DEFAULT_CHART, ExerciseSpec

DEFAULT_PORT = 8000
DEFAULT_DATA_DIR = "data"


@dataclass(frozen=True)
class SmtpSettings:
    host: str
    port: int = 25
    sender: str = "healthwise@localhost"


@dataclass(frozen=True)
class ServerConfig:
    port: int = DEFAULT_PORT
    data_dir: Path = Path(DEFAULT_DATA_DIR)
    catalog_file: Path | None = None
    log_file: Path | None = None
    profiles_file: Path | None = None
    outbox_file: Path | None = None
    requirement_table: RequirementTable = field(default_factory=default_requirement_table)
    activity_factors: ActivityFactors = field(default_factory=ActivityFactors)
    meal_split: MealSplit = field(default_factory=MealSplit)
    exercise_chart: tuple[ExerciseSpec, ...] = DEFAULT_CHART
    smtp: SmtpSettings | None = None

    def validate(self) -> None:
        if not (0 <= self.port <= 65535):
            raise ValidationError(f"port out of range: {self.port}")
        self.requirement_table.validate()
        self.activity_factors.validate()
        self.meal_split.validate()
        if not self.exercise_chart:
            raise ValidationError("exercise chart must not be empty")
        for spec in self.exercise_chart:
            spec.validate()

    # Store paths default to fixed names under the data directory.
    def path_for(self, override: Path | None, name: str) -> Path:
        return override if override is not None else self.data_dir / name

    @property
    def catalog_path(self) -> Path:
        return self.path_for(self.catalog_file, "catalog.jsonl")

    @property
    def log_path(self) -> Path:
        return self.path_for(self.log_file, "log.jsonl")

    @property
    def profiles_path(self) -> Path:
        return self.path_for(self.profiles_file, "profiles.jsonl")

    @property
    def outbox_path(self) -> Path:
        return self.path_for(self.outbox_file, "outbox.jsonl")


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValidationError(message)


def _parse_port(raw, origin: str) -> int:
    try:
        return int(str(raw).strip())
    except (TypeError, ValueError):
        raise ValidationError(f"{origin}: port must be an integer, got {raw!r}") from None


def _parse_table(rows) -> RequirementTable:
    _require(isinstance(rows, list) and rows, "requirement_table must be a nonempty list")
    parsed = []
    for row in rows:
        _require(isinstance(row, dict), "requirement_table rows must be objects")
        try:
            parsed.append(
                RequirementRow(
                    gender=Gender(str(row["gender"])),
                    age_min=int(row["age_min"]),
                    age_max=int(row["age_max"]),
                    standard_kcal=int(row["standard_kcal"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad requirement_table row {row!r}: {exc}") from exc
    return RequirementTable(rows=tuple(parsed))


def _parse_chart(items) -> tuple[ExerciseSpec, ...]:
    _require(isinstance(items, list) and items, "exercise_chart must be a nonempty list")
    chart = []
    for item in items:
        try:
            chart.append(
                ExerciseSpec(
                    name=str(item["name"]),
                    burn_rate_kcal_per_min=float(item["burn_rate_kcal_per_min"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad exercise_chart item {item!r}: {exc}") from exc
    return tuple(chart)


def _load_document(path: Path) -> dict:
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path}: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config file {path} is not valid JSON: {exc}") from exc
    _require(isinstance(doc, dict), f"config file {path} must hold a JSON object")
    return doc


def load_config(
    config_path: str | Path | None = None,
    *,
    port: int | None = None,
    data_dir: str | Path | None = None,
    env: dict | None = None,
) -> ServerConfig:
    """Build a validated ServerConfig from all sources.

    Raises:
        ValidationError
    """
    env = os.environ if env is None else env
    doc = _load_document(Path(config_path)) if config_path is not None else {}

    cfg_port = DEFAULT_PORT
    if "port" in doc:
        cfg_port = _parse_port(doc["port"], "config file")
    if env.get("HW_PORT"):
        cfg_port = _parse_port(env["HW_PORT"], "HW_PORT")
    if port is not None:
        cfg_port = port

    cfg_dir = Path(doc.get("data_dir", DEFAULT_DATA_DIR))
    if env.get("HW_DATA_DIR"):
        cfg_dir = Path(env["HW_DATA_DIR"])
    if data_dir is not None:
        cfg_dir = Path(data_dir)

    def _path_or_none(key: str) -> Path | None:
        return Path(doc[key]) if key in doc else None

    table = _parse_table(doc["requirement_table"]) if "requirement_table" in doc else default_requirement_table()

    factors = ActivityFactors()
    if "activity_factors" in doc:
        raw = doc["activity_factors"]
        _require(isinstance(raw, dict), "activity_factors must be an object")
        try:
            factors = ActivityFactors(
                sedentary=float(raw.get("sedentary", factors.sedentary)),
                moderate=float(raw.get("moderate", factors.moderate)),
                high=float(raw.get("high", factors.high)),
            )
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"bad activity_factors: {exc}") from exc

    split = MealSplit()
    if "meal_split" in doc:
        raw = doc["meal_split"]
        _require(isinstance(raw, dict), "meal_split must be an object")
        try:
            split = MealSplit(
                breakfast=float(raw.get("breakfast", split.breakfast)),
                lunch=float(raw.get("lunch", split.lunch)),
                dinner=float(raw.get("dinner", split.dinner)),
            )
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"bad meal_split: {exc}") from exc

    chart = _parse_chart(doc["exercise_chart"]) if "exercise_chart" in doc else DEFAULT_CHART

    smtp = None
    if "smtp" in doc and doc["smtp"] is not None:
        raw = doc["smtp"]
        _require(isinstance(raw, dict) and "host" in raw, "smtp settings require a host")
        smtp = SmtpSettings(
            host=str(raw["host"]),
            port=_parse_port(raw.get("port", 25), "smtp"),
            sender=str(raw.get("from", SmtpSettings.sender)),
        )

    config = ServerConfig(
        port=cfg_port,
        data_dir=cfg_dir,
        catalog_file=_path_or_none("catalog_file"),
        log_file=_path_or_none("log_file"),
        profiles_file=_path_or_none("profiles_file"),
        outbox_file=_path_or_none("outbox_file"),
        requirement_table=table,
        activity_factors=factors,
        meal_split=split,
        exercise_chart=chart,
        smtp=smtp,
    )
    config.validate()
    return config
