"""Product catalog keyed by canonical 13-digit GTIN.

The store is a compacted JSON-lines document, one product per line,
rewritten in full on mutation; at desk scale that keeps it diffable and
trivially durable.
"""

import threading
from dataclasses import asdict, dataclass
from pathlib import Path

from .barcode import validate_code
from .errors import (
    HealthwiseError,
    InvalidKey,
    InvariantViolation,
    NonPositiveQuantity,
    ProductNotFound,
)
from .jsonl import replay, rewrite
from .rounding import round_half_up

# Pure fat is ~900 kCal/100 g; anything denser is a data error.
MAX_ENERGY_PER_100G = 900


def _norm(value: float) -> float | int:
    """Collapse integral floats to ints so wire formats stay stable."""
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


@dataclass(frozen=True)
class ProductRecord:
    gtin13: str
    name: str
    energy_kcal_per_100g: float
    protein_g_per_100g: float = 0
    fat_g_per_100g: float = 0
    carb_g_per_100g: float = 0
    serving_note: str = ""

    def __post_init__(self):
        for field in (
            "energy_kcal_per_100g",
            "protein_g_per_100g",
            "fat_g_per_100g",
            "carb_g_per_100g",
        ):
            object.__setattr__(self, field, _norm(getattr(self, field)))

    def validate(self) -> "ProductRecord":
        try:
            canonical = validate_code(self.gtin13).digits13
        except HealthwiseError as exc:
            raise InvalidKey(f"catalog key {self.gtin13!r}: {exc.message}") from exc
        if canonical != self.gtin13:
            raise InvalidKey(f"catalog key must be canonical 13 digits, got {self.gtin13!r}")
        if not self.name:
            raise InvariantViolation("product name must not be empty")
        if not 0 <= self.energy_kcal_per_100g <= MAX_ENERGY_PER_100G:
            raise InvariantViolation(
                f"energy {self.energy_kcal_per_100g} kCal/100g outside 0..{MAX_ENERGY_PER_100G}"
            )
        for field in ("protein_g_per_100g", "fat_g_per_100g", "carb_g_per_100g"):
            if getattr(self, field) < 0:
                raise InvariantViolation(f"{field} must be >= 0")
        return self


def energy_for_quantity(record: ProductRecord, quantity_g: float) -> int:
    """kCal in a given quantity, rounded half-up to a whole kCal.

    Raises:
        NonPositiveQuantity: quantity_g <= 0
    """
    if quantity_g <= 0:
        raise NonPositiveQuantity(f"quantity must be positive grams, got {quantity_g}")
    return round_half_up(record.energy_kcal_per_100g * quantity_g / 100)


class Catalog:
    """Single-writer product store; reads return committed snapshots."""

    def __init__(self, path: Path | None = None):
        self._path = path
        self._records: dict[str, ProductRecord] = {}
        self._lock = threading.Lock()
        if path is not None:
            for raw in replay(path):
                record = ProductRecord(**raw).validate()
                self._records[record.gtin13] = record

    def __len__(self) -> int:
        return len(self._records)

    def lookup(self, gtin13: str) -> ProductRecord:
        """Raises InvalidKey for a non-canonical key, ProductNotFound if absent."""
        if len(gtin13) != 13 or not gtin13.isdigit():
            raise InvalidKey(f"catalog key must be canonical 13 digits, got {gtin13!r}")
        record = self._records.get(gtin13)
        if record is None:
            raise ProductNotFound(f"no catalog entry for {gtin13}")
        return record

    def upsert(self, record: ProductRecord) -> ProductRecord | None:
        """Insert or replace; returns the previous record, if any."""
        record.validate()
        with self._lock:
            previous = self._records.get(record.gtin13)
            self._records[record.gtin13] = record
            self._persist()
        return previous

    def all_records(self) -> list[ProductRecord]:
        return sorted(self._records.values(), key=lambda r: r.gtin13)

    def _persist(self) -> None:
        if self._path is not None:
            rewrite(self._path, [asdict(r) for r in self.all_records()])
