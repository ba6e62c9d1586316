"""Daily energy requirements and per-meal budgets.

Standard energy is a table lookup by gender and age band; the activity
level scales it into the required daily energy. Height and weight are
recorded on the profile for validation and future use but do not enter the
computation.
"""

from dataclasses import dataclass
from enum import Enum

from .errors import NoTableRow, ValidationError
from .rounding import round_half_up


class Gender(str, Enum):
    MALE = "male"
    FEMALE = "female"


class Activity(str, Enum):
    SEDENTARY = "sedentary"
    MODERATE = "moderate"
    HIGH = "high"


@dataclass(frozen=True)
class UserProfile:
    id: str
    name: str
    gender: Gender
    age: int
    height_cm: int
    weight_kg: float
    activity: Activity
    email: str

    def validate(self) -> "UserProfile":
        """Check field ranges; raises ValidationError on the first violation."""
        if not self.name:
            raise ValidationError("name must not be empty")
        if not 1 <= self.age <= 120:
            raise ValidationError(f"age must be 1..120, got {self.age}")
        if not 50 <= self.height_cm <= 250:
            raise ValidationError(f"height must be 50..250 cm, got {self.height_cm}")
        if not 3 <= self.weight_kg <= 300:
            raise ValidationError(f"weight must be 3..300 kg, got {self.weight_kg}")
        local, _, domain = self.email.partition("@")
        if not local or not domain or "@" in domain:
            raise ValidationError(f"email must contain exactly one @, got {self.email!r}")
        return self


@dataclass(frozen=True)
class RequirementRow:
    gender: Gender
    age_min: int
    age_max: int
    standard_kcal: int


@dataclass(frozen=True)
class RequirementTable:
    """Standard daily energy by gender and age band, covering ages 1-120."""

    rows: tuple[RequirementRow, ...]

    def validate(self) -> "RequirementTable":
        for gender in Gender:
            covered = sorted(
                (r.age_min, r.age_max) for r in self.rows if r.gender == gender
            )
            expect = 1
            for lo, hi in covered:
                if lo != expect or hi < lo:
                    raise ValidationError(
                        f"requirement table has a gap or overlap at {gender.value} age {expect}"
                    )
                expect = hi + 1
            if expect <= 120:
                raise ValidationError(
                    f"requirement table does not cover {gender.value} ages up to 120"
                )
        return self

    def lookup(self, gender: Gender, age: int) -> int:
        for row in self.rows:
            if row.gender == gender and row.age_min <= age <= row.age_max:
                return row.standard_kcal
        raise NoTableRow(f"no requirement row for {gender.value} age {age}")


@dataclass(frozen=True)
class ActivityFactors:
    sedentary: float = 1.00
    moderate: float = 1.12
    high: float = 1.25

    def validate(self) -> "ActivityFactors":
        if not 1.0 <= self.sedentary <= self.moderate <= self.high <= 2.5:
            raise ValidationError(
                "activity factors must satisfy 1.0 <= sedentary <= moderate <= high <= 2.5"
            )
        return self

    def factor(self, activity: Activity) -> float:
        return {
            Activity.SEDENTARY: self.sedentary,
            Activity.MODERATE: self.moderate,
            Activity.HIGH: self.high,
        }[activity]


@dataclass(frozen=True)
class MealSplit:
    breakfast: float = 0.25
    lunch: float = 0.40
    dinner: float = 0.35

    def validate(self) -> "MealSplit":
        parts = (self.breakfast, self.lunch, self.dinner)
        if any(p <= 0 for p in parts):
            raise ValidationError("meal fractions must all be positive")
        if abs(sum(parts) - 1.0) > 1e-9:
            raise ValidationError(f"meal fractions must sum to 1, got {sum(parts)}")
        return self


@dataclass(frozen=True)
class EnergyRequirement:
    standard_kcal: int
    required_kcal: int
    budgets: tuple[int, int, int] | None = None


# Default bands. The male 18-29 row is pinned to 2200 kCal; the remaining
# values are reference-style defaults and fully config-overridable.
DEFAULT_REQUIREMENT_ROWS = (
    (Gender.MALE, 1, 3, 1060),
    (Gender.MALE, 4, 6, 1350),
    (Gender.MALE, 7, 9, 1690),
    (Gender.MALE, 10, 12, 2190),
    (Gender.MALE, 13, 15, 2450),
    (Gender.MALE, 16, 17, 2640),
    (Gender.MALE, 18, 29, 2200),
    (Gender.MALE, 30, 59, 2320),
    (Gender.MALE, 60, 120, 2000),
    (Gender.FEMALE, 1, 3, 1010),
    (Gender.FEMALE, 4, 6, 1290),
    (Gender.FEMALE, 7, 9, 1600),
    (Gender.FEMALE, 10, 12, 2010),
    (Gender.FEMALE, 13, 15, 2060),
    (Gender.FEMALE, 16, 17, 2120),
    (Gender.FEMALE, 18, 29, 1900),
    (Gender.FEMALE, 30, 59, 2050),
    (Gender.FEMALE, 60, 120, 1700),
)


def default_requirement_table() -> RequirementTable:
    rows = tuple(RequirementRow(*row) for row in DEFAULT_REQUIREMENT_ROWS)
    return RequirementTable(rows).validate()


def standard_energy(profile: UserProfile, table: RequirementTable) -> int:
    """Standard daily energy (kCal) for the profile's gender and age."""
    return table.lookup(profile.gender, profile.age)


def required_energy(
    profile: UserProfile, table: RequirementTable, factors: ActivityFactors
) -> EnergyRequirement:
    """Standard energy scaled by the profile's activity factor."""
    standard = standard_energy(profile, table)
    required = round_half_up(standard * factors.factor(profile.activity))
    return EnergyRequirement(standard_kcal=standard, required_kcal=required)


def meal_budgets(required_kcal: int, split: MealSplit) -> tuple[int, int, int]:
    """Per-meal kCal budgets summing exactly to the daily requirement.

    Each share is rounded half-up; the rounding residue (a kCal or two) is
    folded into dinner so the triple adds up exactly.
    """
    breakfast = round_half_up(required_kcal * split.breakfast)
    lunch = round_half_up(required_kcal * split.lunch)
    dinner = round_half_up(required_kcal * split.dinner)
    dinner += required_kcal - (breakfast + lunch + dinner)
    return breakfast, lunch, dinner
