"""Per-user daily consumption log and the green/red energy verdict.

The verdict is scoped to the whole day's requirement: balance is what
remains after everything already logged plus the candidate food. Meal
budgets ride along for display only. Checking never writes; adding is a
separate, explicit act, so a red verdict does not block consumption.
"""

import datetime as dt
import threading
from dataclasses import asdict, dataclass
from enum import Enum
from pathlib import Path

from .catalog import ProductRecord, energy_for_quantity
from .energy import (
    ActivityFactors,
    MealSplit,
    RequirementTable,
    UserProfile,
    meal_budgets,
    required_energy,
)
from .errors import NonPositiveQuantity, ValidationError
from .exercise import ExercisePlanItem, ExerciseSpec, suggest
from .jsonl import append_record, replay


class Meal(str, Enum):
    BREAKFAST = "breakfast"
    LUNCH = "lunch"
    DINNER = "dinner"


class Verdict(str, Enum):
    GREEN = "green"
    RED = "red"


@dataclass(frozen=True)
class ConsumptionEntry:
    entry_id: str
    user_id: str
    date: str  # ISO calendar day
    meal: Meal
    gtin13: str
    quantity_g: float
    energy_kcal: int
    timestamp: str  # ISO instant


@dataclass(frozen=True)
class EnergyVerdict:
    standard_kcal: int
    required_kcal: int
    consumed_before_kcal: int
    candidate_kcal: int
    balance_kcal: int
    status: Verdict
    excess_kcal: int
    meal_budgets: tuple[int, int, int]
    suggestions: list[ExercisePlanItem]


def parse_date(text: str) -> str:
    """Normalize an ISO calendar day string; ValidationError if malformed."""
    try:
        return dt.date.fromisoformat(text).isoformat()
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"date must be YYYY-MM-DD, got {text!r}") from exc


def parse_meal(text: str) -> Meal:
    try:
        return Meal(text)
    except ValueError as exc:
        raise ValidationError(
            f"meal must be breakfast, lunch or dinner, got {text!r}"
        ) from exc


class ConsumptionLog:
    """Append-only store of consumption entries, replayed at startup."""

    def __init__(self, path: Path | None = None):
        self._path = path
        self._entries: list[ConsumptionEntry] = []
        self._lock = threading.Lock()
        if path is not None:
            for raw in replay(path):
                self._entries.append(
                    ConsumptionEntry(**{**raw, "meal": Meal(raw["meal"])})
                )

    def __len__(self) -> int:
        return len(self._entries)

    def record(self, **fields) -> ConsumptionEntry:
        """Assign the next entry id and append durably, as one atomic step."""
        with self._lock:
            entry = ConsumptionEntry(entry_id=f"e{len(self._entries) + 1}", **fields)
            if self._path is not None:
                raw = asdict(entry)
                raw["meal"] = entry.meal.value
                append_record(self._path, raw)
            self._entries.append(entry)
        return entry

    def entries_for(self, user_id: str, date: str) -> list[ConsumptionEntry]:
        return [e for e in self._entries if e.user_id == user_id and e.date == date]

    def consumed_total(self, user_id: str, date: str) -> int:
        """Sum of logged energy for one user and day; 0 if nothing logged."""
        return sum(e.energy_kcal for e in self.entries_for(user_id, date))


def check_energy(
    profile: UserProfile,
    date: str,
    candidate_kcal: int,
    meal: Meal,
    *,
    log: ConsumptionLog,
    table: RequirementTable,
    factors: ActivityFactors,
    split: MealSplit,
    chart: tuple[ExerciseSpec, ...],
) -> EnergyVerdict:
    """Decide green/red for consuming candidate_kcal on the given day.

    Balance is required minus already-consumed minus candidate; zero still
    counts as within limits. When red, every chart exercise is offered as an
    alternative plan for the excess. The meal tag is informational.

    Raises:
        NoTableRow (no requirement row), ValidationError (bad candidate)
    """
    if candidate_kcal < 0:
        raise ValidationError(f"candidate energy must be >= 0, got {candidate_kcal}")
    assert isinstance(meal, Meal)
    requirement = required_energy(profile, table, factors)
    consumed_before = log.consumed_total(profile.id, date)
    balance = requirement.required_kcal - consumed_before - candidate_kcal
    status = Verdict.GREEN if balance >= 0 else Verdict.RED
    excess = max(0, -balance)
    return EnergyVerdict(
        standard_kcal=requirement.standard_kcal,
        required_kcal=requirement.required_kcal,
        consumed_before_kcal=consumed_before,
        candidate_kcal=candidate_kcal,
        balance_kcal=balance,
        status=status,
        excess_kcal=excess,
        meal_budgets=meal_budgets(requirement.required_kcal, split),
        suggestions=suggest(excess, chart) if status == Verdict.RED else [],
    )


def add_consumption(
    profile: UserProfile,
    date: str,
    product: ProductRecord,
    quantity_g: float,
    meal: Meal,
    now: dt.datetime,
    *,
    log: ConsumptionLog,
) -> ConsumptionEntry:
    """Append one consumption entry durably and return it.

    Raises:
        NonPositiveQuantity, StorageFailure
    """
    if quantity_g <= 0:
        raise NonPositiveQuantity(f"quantity must be positive grams, got {quantity_g}")
    return log.record(
        user_id=profile.id,
        date=date,
        meal=meal,
        gtin13=product.gtin13,
        quantity_g=int(quantity_g) if float(quantity_g).is_integer() else quantity_g,
        energy_kcal=energy_for_quantity(product, quantity_g),
        timestamp=now.isoformat(),
    )
