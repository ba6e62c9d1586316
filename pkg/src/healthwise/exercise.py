"""Exercise chart and excess-calorie burn plans."""

import math
from dataclasses import dataclass

from .errors import EmptyChart, ValidationError
from .rounding import round_half_up


@dataclass(frozen=True)
class ExerciseSpec:
    name: str
    burn_rate_kcal_per_min: float

    def validate(self) -> "ExerciseSpec":
        if not self.name:
            raise ValidationError("exercise name must not be empty")
        if not 1 <= self.burn_rate_kcal_per_min <= 30:
            raise ValidationError(
                f"burn rate must be 1..30 kCal/min, got {self.burn_rate_kcal_per_min}"
            )
        return self


@dataclass(frozen=True)
class ExercisePlanItem:
    name: str
    minutes: int
    burns_kcal: int


DEFAULT_CHART = (
    ExerciseSpec("walking", 4),
    ExerciseSpec("cycling", 7),
    ExerciseSpec("jogging", 10),
    ExerciseSpec("skipping", 12),
)


def suggest(excess_kcal: float, chart: tuple[ExerciseSpec, ...] = DEFAULT_CHART) -> list[ExercisePlanItem]:
    """Exercise alternatives, each long enough on its own to burn the excess.

    Durations are whole minutes rounded up (never under-burn). The list is
    sorted quickest first, ties broken by name, and is empty when there is
    no excess.

    Raises:
        EmptyChart: no exercises configured
    """
    if not chart:
        raise EmptyChart("exercise chart is empty")
    if excess_kcal <= 0:
        return []
    items = []
    for spec in chart:
        minutes = math.ceil(excess_kcal / spec.burn_rate_kcal_per_min)
        items.append(
            ExercisePlanItem(
                name=spec.name,
                minutes=minutes,
                burns_kcal=round_half_up(minutes * spec.burn_rate_kcal_per_min),
            )
        )
    items.sort(key=lambda item: (item.minutes, item.name))
    return items
